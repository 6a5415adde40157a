#include "cnfdr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "cnfdr/special_fns.hpp"

namespace cnfdr {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

// Uniform in [0,1) straight from the engine bits; we avoid the library
// distribution adaptors so a seed pins the exact sequence on any platform.
double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double normal01(std::mt19937_64& gen) {
  // Box-Muller, no spare caching: two words per draw keeps sample() stateless
  const double u1 = 1.0 - uniform01(gen);  // (0,1], keeps the log finite
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Marsaglia-Tsang squeeze for Gamma(shape, 1), shape >= 1.
double gamma_ge1(std::mt19937_64& gen, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal01(gen);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01(gen);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double gamma_sample(std::mt19937_64& gen, double shape) {
  if (shape >= 1.0) return gamma_ge1(gen, shape);
  // boost the shape by one and shrink back
  const double g = gamma_ge1(gen, shape + 1.0);
  const double u = 1.0 - uniform01(gen);
  return g * std::pow(u, 1.0 / shape);
}

}  // namespace

DistributionSpec DistributionSpec::make_normal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("DistributionSpec: sigma must be > 0");
  DistributionSpec d;
  d.kind = Kind::normal;
  d.mu = mu;
  d.sigma = sigma;
  return d;
}

DistributionSpec DistributionSpec::make_noncentral_t(double df, double delta) {
  if (!(df > 0.0)) throw std::invalid_argument("DistributionSpec: df must be > 0");
  DistributionSpec d;
  d.kind = Kind::noncentral_t;
  d.df = df;
  d.delta = delta;
  return d;
}

double DistributionSpec::cdf(double x) const {
  switch (kind) {
    case Kind::normal:
      return std_normal_cdf((x - mu) / sigma);
    case Kind::noncentral_t:
      return noncentral_t_cdf(x, df, delta);
  }
  throw std::logic_error("DistributionSpec: unknown kind");
}

double DistributionSpec::pdf(double x) const {
  switch (kind) {
    case Kind::normal:
      return std_normal_pdf((x - mu) / sigma) / sigma;
    case Kind::noncentral_t:
      return noncentral_t_pdf(x, df, delta);
  }
  throw std::logic_error("DistributionSpec: unknown kind");
}

double DistributionSpec::sample(std::mt19937_64& gen) const {
  switch (kind) {
    case Kind::normal:
      return mu + sigma * normal01(gen);
    case Kind::noncentral_t: {
      const double z = normal01(gen);
      const double v = 2.0 * gamma_sample(gen, 0.5 * df);  // chi-squared(df)
      return (z + delta) / std::sqrt(v / df);
    }
  }
  throw std::logic_error("DistributionSpec: unknown kind");
}

double region_cdf(const DistributionSpec& d, Region region, double t) {
  switch (region) {
    case Region::lower:
      return d.cdf(t);
    case Region::upper:
      return 1.0 - d.cdf(-t);
    case Region::absolute:
      if (t < 0.0) throw std::invalid_argument("region_cdf: absolute region needs t >= 0");
      return d.cdf(t) - d.cdf(-t);
  }
  throw std::logic_error("region_cdf: unknown region");
}

double region_pdf(const DistributionSpec& d, Region region, double s) {
  switch (region) {
    case Region::lower:
      return d.pdf(s);
    case Region::upper:
      return d.pdf(-s);
    case Region::absolute:
      if (s < 0.0) return 0.0;
      return d.pdf(s) + d.pdf(-s);
  }
  throw std::logic_error("region_pdf: unknown region");
}

double NullFamily::score(double x) const {
  switch (region) {
    case Region::lower:
      return x;
    case Region::upper:
      return -x;
    case Region::absolute:
      return std::fabs(x);
  }
  throw std::logic_error("NullFamily: unknown region");
}

std::vector<double> NullFamily::cdf_vector(double t) const {
  std::vector<double> out(components.size());
  for (std::size_t k = 0; k < components.size(); ++k) {
    out[k] = region_cdf(components[k], region, t);
  }
  return out;
}

void NullFamily::validate() const {
  if (components.empty()) throw std::invalid_argument("NullFamily: needs at least one component");
}

void Prior::validate(std::size_t expected_size) const {
  if (nu.size() != expected_size) {
    throw std::invalid_argument("Prior: weight count does not match the family size");
  }
  double sum = 0.0;
  for (double w : nu) {
    if (w < 0.0) throw std::invalid_argument("Prior: weights must be nonnegative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("Prior: weights must sum to 1, got " + std::to_string(sum));
  }
}

void MixtureModel::validate() const {
  family.validate();
  prior.validate(family.size());
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("MixtureModel: a must lie in (0,1)");
  for (const auto& comp : family.components) {
    if (comp == alt) {
      throw std::invalid_argument("MixtureModel: the alternative must not be a null component");
    }
  }
}

LabeledSample sample_mixture(const MixtureModel& model, std::size_t n, std::uint64_t seed) {
  model.validate();
  std::mt19937_64 gen(seed);

  std::vector<std::pair<double, std::uint8_t>> rows;
  rows.reserve(n);
  const std::size_t num_comp = model.family.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = uniform01(gen);
    double x;
    std::uint8_t null_true;
    if (pick < model.a) {
      x = model.alt.sample(gen);
      null_true = 0;
    } else {
      // walk the prior on the rescaled remainder of the pick
      double v = (pick - model.a) / (1.0 - model.a);
      std::size_t k = 0;
      double acc = 0.0;
      for (; k + 1 < num_comp; ++k) {
        acc += model.prior.nu[k];
        if (v < acc) break;
      }
      x = model.family.components[k].sample(gen);
      null_true = 1;
    }
    rows.emplace_back(model.family.score(x), null_true);
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  LabeledSample out;
  out.s.resize(n);
  out.is_null.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.s[i] = rows[i].first;
    out.is_null[i] = rows[i].second;
  }
  return out;
}

MixtureModel study_preset(int id) {
  using D = DistributionSpec;
  MixtureModel m;
  m.a = 0.05;
  m.family.region = Region::lower;
  switch (id) {
    case 1:
      m.family.components = {D::make_normal(0, 1), D::make_normal(-1, 1), D::make_normal(-2, 1)};
      m.prior.nu = {0.75, 0.15, 0.10};
      m.alt = D::make_normal(-4, 1);
      break;
    case 2:
      m.family.components = {D::make_noncentral_t(20, 0), D::make_noncentral_t(20, -1),
                             D::make_noncentral_t(20, -2)};
      m.prior.nu = {0.75, 0.15, 0.10};
      m.alt = D::make_noncentral_t(20, -4);
      break;
    case 3:
      m.family.components = {D::make_normal(0, 1), D::make_normal(-1, 1), D::make_normal(-2, 1)};
      m.prior.nu = {0.60, 0.25, 0.15};
      m.alt = D::make_normal(-4, 1);
      break;
    case 4:
      m.family.components = {D::make_normal(0, 1), D::make_normal(-1, 1.5),
                             D::make_normal(-2, 1.5)};
      m.prior.nu = {0.75, 0.15, 0.10};
      m.alt = D::make_normal(-4, 1);
      break;
    case 5:
      m.family.components = {D::make_normal(0, 1), D::make_normal(-1, 1), D::make_normal(-2, 1),
                             D::make_normal(-3, 1), D::make_normal(-4, 1)};
      m.prior.nu = {0.65, 0.15, 0.10, 0.05, 0.05};
      m.alt = D::make_normal(-5, 1);
      break;
    default:
      throw std::invalid_argument("study_preset: id must be 1..5");
  }
  return m;
}

}  // namespace cnfdr
