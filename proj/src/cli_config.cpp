#include "cnfdr/cli_config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace cnfdr {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument("config: " + path + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path + "." + key, "missing");
  return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) fail(path, "expected an integer");
  if (v.is_number_integer() && v.get<std::int64_t>() < 0) fail(path, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

DistributionSpec parse_dist(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  const std::string type = as_string(member(v, path, "type"), path + ".type");
  try {
    if (type == "normal") {
      reject_unknown(v, path, {"type", "mu", "sigma"});
      return DistributionSpec::make_normal(as_number(member(v, path, "mu"), path + ".mu"),
                                           as_number(member(v, path, "sigma"), path + ".sigma"));
    }
    if (type == "noncentral_t") {
      reject_unknown(v, path, {"type", "df", "delta"});
      return DistributionSpec::make_noncentral_t(
          as_number(member(v, path, "df"), path + ".df"),
          as_number(member(v, path, "delta"), path + ".delta"));
    }
  } catch (const std::invalid_argument& e) {
    if (std::string(e.what()).rfind("config:", 0) == 0) throw;
    fail(path, e.what());
  }
  fail(path + ".type", "expected \"normal\" or \"noncentral_t\"");
}

Region parse_region(const json& v, const std::string& path) {
  const std::string name = as_string(v, path);
  if (name == "lower") return Region::lower;
  if (name == "upper") return Region::upper;
  if (name == "absolute") return Region::absolute;
  fail(path, "expected \"lower\", \"upper\" or \"absolute\"");
}

MixtureModel parse_model(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  reject_unknown(v, path, {"a", "region", "components", "prior", "alt"});
  MixtureModel m;
  m.a = as_number(member(v, path, "a"), path + ".a");
  m.family.region = parse_region(member(v, path, "region"), path + ".region");
  const json& comps = member(v, path, "components");
  if (!comps.is_array() || comps.empty()) fail(path + ".components", "expected a nonempty array");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    m.family.components.push_back(
        parse_dist(comps[i], path + ".components[" + std::to_string(i) + "]"));
  }
  const json& prior = member(v, path, "prior");
  if (!prior.is_array()) fail(path + ".prior", "expected an array");
  for (std::size_t i = 0; i < prior.size(); ++i) {
    m.prior.nu.push_back(as_number(prior[i], path + ".prior[" + std::to_string(i) + "]"));
  }
  m.alt = parse_dist(member(v, path, "alt"), path + ".alt");
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return m;
}

void parse_variant(const json& v, const std::string& path, ConstraintVariant* out) {
  if (!v.is_object()) fail(path, "expected an object");
  reject_unknown(v, path, {"sum_lower", "pair_margin", "gamma_beta", "small_rank_exponent"});
  if (v.contains("sum_lower")) {
    out->sum_lower = as_number(v.at("sum_lower"), path + ".sum_lower");
    if (out->sum_lower < 0.0 || out->sum_lower > 1.0) fail(path + ".sum_lower", "must lie in [0,1]");
  }
  if (v.contains("pair_margin")) {
    const std::string name = as_string(v.at("pair_margin"), path + ".pair_margin");
    if (name == "relaxed") {
      out->pair_margin = PairMargin::relaxed;
    } else if (name == "tight") {
      out->pair_margin = PairMargin::tight;
    } else {
      fail(path + ".pair_margin", "expected \"relaxed\" or \"tight\"");
    }
  }
  if (v.contains("gamma_beta")) {
    out->gamma_beta = as_number(v.at("gamma_beta"), path + ".gamma_beta");
    if (out->gamma_beta <= 0.0 || out->gamma_beta >= 1.0) fail(path + ".gamma_beta", "must lie in (0,1)");
  }
  if (v.contains("small_rank_exponent")) {
    out->small_rank_exponent =
        as_number(v.at("small_rank_exponent"), path + ".small_rank_exponent");
    if (out->small_rank_exponent < 0.0) fail(path + ".small_rank_exponent", "must be >= 0");
  }
}

std::vector<Method> parse_methods_json(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of method names");
  std::vector<Method> methods;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string item_path = path + "[" + std::to_string(i) + "]";
    try {
      methods.push_back(method_from_name(as_string(v[i], item_path)));
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).rfind("config:", 0) == 0) throw;
      fail(item_path, e.what());
    }
  }
  return methods;
}

void check_scalars(const SimConfig& cfg) {
  if (cfg.n < 2) fail("n", "must be >= 2");
  if (cfg.reps < 1) fail("reps", "must be >= 1");
  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0) fail("alpha", "must lie in (0,1)");
}

// %.6g serialization used for every numeric CSV cell
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_file(const std::string& dir, const char* name, const std::string& body) {
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << body;
  out.flush();
  if (!out) throw std::runtime_error("failed while writing " + path);
}

}  // namespace

SimConfig preset_config(int id) {
  SimConfig cfg;
  cfg.model = study_preset(id);
  return cfg;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  json root;
  try {
    in >> root;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + path + " is not valid JSON: " + e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown(root, "", {"preset", "model", "n", "reps", "alpha", "seed", "methods", "variant"});

  const bool has_preset = root.contains("preset");
  const bool has_model = root.contains("model");
  if (has_preset == has_model) {
    throw std::invalid_argument("config: exactly one of \"preset\" and \"model\" is required");
  }

  SimConfig cfg;
  if (has_preset) {
    const std::uint64_t id = as_count(root.at("preset"), "preset");
    if (id < 1 || id > 5) fail("preset", "must be 1..5");
    cfg = preset_config(static_cast<int>(id));
  } else {
    cfg.model = parse_model(root.at("model"), "model");
  }
  if (root.contains("n")) cfg.n = as_count(root.at("n"), "n");
  if (root.contains("reps")) cfg.reps = as_count(root.at("reps"), "reps");
  if (root.contains("alpha")) cfg.alpha = as_number(root.at("alpha"), "alpha");
  if (root.contains("seed")) cfg.seed = as_count(root.at("seed"), "seed");
  if (root.contains("methods")) cfg.methods = parse_methods_json(root.at("methods"), "methods");
  if (root.contains("variant")) parse_variant(root.at("variant"), "variant", &cfg.variant);
  check_scalars(cfg);
  return cfg;
}

SimConfig parse_config(const CliRun& run) {
  if ((run.preset != 0) == !run.config_path.empty()) {
    throw std::invalid_argument("exactly one of --preset and --config is required");
  }
  SimConfig cfg;
  if (run.preset != 0) {
    if (run.preset < 1 || run.preset > 5) throw std::invalid_argument("--preset must be 1..5");
    cfg = preset_config(run.preset);
  } else {
    cfg = parse_config_file(run.config_path);
  }
  if (run.n) cfg.n = *run.n;
  if (run.reps) cfg.reps = *run.reps;
  if (run.alpha) cfg.alpha = *run.alpha;
  if (run.seed) cfg.seed = *run.seed;
  if (run.methods) cfg.methods = *run.methods;
  if (run.sum_lower) {
    if (*run.sum_lower < 0.0 || *run.sum_lower > 1.0) {
      throw std::invalid_argument("--sum-lower must lie in [0,1]");
    }
    cfg.variant.sum_lower = *run.sum_lower;
  }
  if (run.pair_margin) cfg.variant.pair_margin = *run.pair_margin;
  check_scalars(cfg);
  return cfg;
}

std::vector<Method> parse_method_list(const std::string& csv) {
  std::vector<Method> methods;
  std::stringstream stream(csv);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (!token.empty()) methods.push_back(method_from_name(token));
  }
  return methods;
}

void write_outputs(const SimReport& report, const std::string& dir) {
  // method-name order keeps the files stable however the run was configured
  std::vector<const MethodReport*> ordered;
  for (const MethodReport& m : report.methods) ordered.push_back(&m);
  std::stable_sort(ordered.begin(), ordered.end(), [](const MethodReport* a, const MethodReport* b) {
    return std::string(method_name(a->method)) < std::string(method_name(b->method));
  });

  std::string metrics = "method,power,fdr,pfdr,sd_tpp\n";
  for (const MethodReport* m : ordered) {
    metrics += method_name(m->method);
    metrics += "," + fmt(m->metrics.power) + "," + fmt(m->metrics.fdr) + ",";
    if (m->metrics.pfdr) metrics += fmt(*m->metrics.pfdr);
    metrics += "," + fmt(m->metrics.sd_tpp) + "\n";
  }
  write_file(dir, "metrics.csv", metrics);

  const double nd = static_cast<double>(report.n);
  std::string curves = "method,i_over_n,scaled_p\n";
  for (const MethodReport* m : ordered) {
    for (std::size_t i = 0; i < m->scaled_p_curve.size(); ++i) {
      curves += method_name(m->method);
      curves += "," + fmt(static_cast<double>(i + 1) / nd) + "," + fmt(m->scaled_p_curve[i]) + "\n";
    }
  }
  write_file(dir, "curves.csv", curves);

  std::string coeffs = "method,i_over_n,k,c_avg\n";
  for (const MethodReport* m : ordered) {
    for (std::size_t i = 0; i < report.n && !m->coeff_curves.empty(); ++i) {
      for (std::size_t k = 0; k < m->coeff_curves.size(); ++k) {
        coeffs += method_name(m->method);
        coeffs += "," + fmt(static_cast<double>(i + 1) / nd) + "," + std::to_string(k + 1) + "," +
                  fmt(m->coeff_curves[k][i]) + "\n";
      }
    }
  }
  write_file(dir, "coeffs.csv", coeffs);
}

}  // namespace cnfdr
