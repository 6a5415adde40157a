#include "cnfdr/pvalues.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cnfdr/empirical.hpp"
#include "cnfdr/lp_core.hpp"
#include "cnfdr/special_fns.hpp"

namespace cnfdr {

const char* method_name(Method m) {
  switch (m) {
    case Method::seq: return "seq";
    case Method::glb: return "glb";
    case Method::max: return "max";
    case Method::mix: return "mix";
  }
  throw std::logic_error("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "seq") return Method::seq;
  if (name == "glb") return Method::glb;
  if (name == "max") return Method::max;
  if (name == "mix") return Method::mix;
  throw std::invalid_argument("unknown method '" + name + "' (expected seq, glb, max or mix)");
}

namespace {

double clamp01(double v) { return std::fmin(1.0, std::fmax(0.0, v)); }

// phi values for every observation, row-major n x L
std::vector<double> phi_matrix(const std::vector<double>& points, const NullFamily& family) {
  const std::size_t L = family.size();
  std::vector<double> phi(points.size() * L);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < L; ++k) {
      phi[i * L + k] = region_cdf(family.components[k], family.region, points[i]);
    }
  }
  return phi;
}

}  // namespace

PValueSet p_max_all(const LabeledSample& sample, const NullFamily& family) {
  family.validate();
  const std::size_t L = family.size();
  const std::vector<double> phi = phi_matrix(sample.s, family);
  PValueSet out;
  out.method = Method::max;
  out.p.resize(sample.n());
  for (std::size_t i = 0; i < sample.n(); ++i) {
    double best = 0.0;
    for (std::size_t k = 0; k < L; ++k) best = std::fmax(best, phi[i * L + k]);
    out.p[i] = clamp01(best);
  }
  return out;
}

PValueSet p_mix_all(const LabeledSample& sample, const NullFamily& family, const Prior& prior) {
  family.validate();
  prior.validate(family.size());
  const std::size_t L = family.size();
  const std::vector<double> phi = phi_matrix(sample.s, family);
  PValueSet out;
  out.method = Method::mix;
  out.p.resize(sample.n());
  for (std::size_t i = 0; i < sample.n(); ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k < L; ++k) v += prior.nu[k] * phi[i * L + k];
    out.p[i] = clamp01(v);
  }
  return out;
}

std::vector<double> u_bounds(const LabeledSample& sample, const ConstraintVariant& variant) {
  const std::size_t n = sample.n();
  const double nd = static_cast<double>(n);
  const double eps = epsilon_n(n);
  const double cutoff = std::pow(nd, variant.small_rank_exponent);
  std::vector<double> u(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double jd = static_cast<double>(j);
    if (jd <= cutoff) {
      u[j - 1] = gamma_upper_quantile(1.0 / nd, jd, 1.0 / variant.gamma_beta) / nd;
    } else {
      u[j - 1] = jd / nd + eps;
    }
  }
  return u;
}

namespace {

struct PairRow {
  std::size_t g1, g2;
  double activation;  // the pair joins once x_(i) <= this grid point
};

// Shared precomputation for both solve modes.
struct ConstrainedContext {
  std::size_t n = 0, L = 0;
  std::vector<double> phi_obs;   // n x L
  std::vector<double> phi_grid;  // G x L
  std::vector<double> u;
  std::vector<double> pair_coeff;  // one row per grid pair, L entries each
  std::vector<double> pair_bound;
  std::vector<PairRow> pairs;  // sorted by activation descending
};

ConstrainedContext build_context(const LabeledSample& sample, const NullFamily& family,
                                 const ConstraintVariant& variant) {
  ConstrainedContext ctx;
  ctx.n = sample.n();
  ctx.L = family.size();
  ctx.phi_obs = phi_matrix(sample.s, family);
  ctx.u = u_bounds(sample, variant);

  const EcdfView ecdf = EcdfView::over(sample.s);
  const ConstraintGrid grid = build_grid(ecdf);
  const double eps = epsilon_n(ctx.n);
  const double margin = variant.pair_margin == PairMargin::relaxed ? eps : -eps;
  ctx.phi_grid = phi_matrix(grid.t, family);

  std::vector<double> fn(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) fn[g] = ecdf.value(grid.t[g]);

  // every ordered grid pair, arranged so that walking i from the top of the
  // sample downward only ever appends rows
  for (std::size_t g1 = grid.size(); g1-- > 0;) {
    for (std::size_t g2 = g1 + 1; g2 < grid.size(); ++g2) {
      ctx.pairs.push_back(PairRow{g1, g2, grid.t[g1]});
      for (std::size_t k = 0; k < ctx.L; ++k) {
        ctx.pair_coeff.push_back(ctx.phi_grid[g2 * ctx.L + k] - ctx.phi_grid[g1 * ctx.L + k]);
      }
      ctx.pair_bound.push_back(fn[g2] - fn[g1] + margin);
    }
  }
  return ctx;
}

std::vector<double> objective_at(const ConstrainedContext& ctx, std::size_t i) {
  return std::vector<double>(ctx.phi_obs.begin() + i * ctx.L,
                             ctx.phi_obs.begin() + (i + 1) * ctx.L);
}

void add_mass_rows(IncrementalLp& lp, std::size_t L, double sum_lower) {
  const std::vector<double> ones(L, 1.0);
  lp.add_row(ones, 1.0);
  if (sum_lower > 0.0) {
    std::vector<double> neg(L, -1.0);
    lp.add_row(neg, -sum_lower);
  }
}

}  // namespace

PValueSet p_constrained(const LabeledSample& sample, const NullFamily& family,
                        const ConstraintVariant& variant, Method mode) {
  if (mode != Method::seq && mode != Method::glb) {
    throw std::invalid_argument("p_constrained: mode must be seq or glb");
  }
  family.validate();
  if (sample.n() < 2) throw std::invalid_argument("p_constrained: need n >= 2");
  if (variant.sum_lower < 0.0 || variant.sum_lower > 1.0) {
    throw std::invalid_argument("p_constrained: sum_lower must lie in [0,1]");
  }

  // The high-mass variant can be infeasible at some indices; those fall back
  // to the plain value, so compute the plain run first.
  PValueSet plain;
  if (variant.sum_lower > 0.0) {
    ConstraintVariant pv = variant;
    pv.sum_lower = 0.0;
    plain = p_constrained(sample, family, pv, mode);
  }

  const ConstrainedContext ctx = build_context(sample, family, variant);
  const std::size_t n = ctx.n;
  const std::size_t L = ctx.L;

  PValueSet out;
  out.method = mode;
  out.p.assign(n, 0.0);
  out.coeffs = CoeffMatrix::zeros(n, L);
  out.infeasible.assign(n, 0);

  IncrementalLp lp(L);
  add_mass_rows(lp, L, variant.sum_lower);

  auto record = [&](std::size_t i, const LpSolution& sol) {
    out.p[i] = clamp01(sol.value);
    for (std::size_t k = 0; k < L; ++k) (*out.coeffs)(i, k) = sol.c_star[k];
  };
  auto fall_back_from = [&](std::size_t i, bool descending) {
    // Rows only accumulate along the sweep, so infeasibility is permanent and
    // every remaining index gets the fallback: the plain value for the
    // high-mass variant, the vacuous maximum 0 (already in place from the
    // initial fill) for a plain program whose feasible set is empty.
    const bool primed = variant.sum_lower > 0.0;
    for (;;) {
      if (primed) {
        out.p[i] = plain.p[i];
        for (std::size_t k = 0; k < L; ++k) (*out.coeffs)(i, k) = (*plain.coeffs)(i, k);
      }
      out.infeasible[i] = 1;
      if (descending) {
        if (i == 0) break;
        --i;
      } else {
        if (++i == n) break;
      }
    }
  };

  if (mode == Method::glb) {
    for (std::size_t j = 0; j < n; ++j) lp.add_row(objective_at(ctx, j), ctx.u[j]);
    for (std::size_t r = 0; r < ctx.pairs.size(); ++r) {
      lp.add_row(std::vector<double>(ctx.pair_coeff.begin() + r * L,
                                     ctx.pair_coeff.begin() + (r + 1) * L),
                 ctx.pair_bound[r]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      lp.set_objective(objective_at(ctx, i));
      const LpSolution sol = lp.solve();
      if (sol.status == LpStatus::infeasible) {
        fall_back_from(i, /*descending=*/false);
        break;
      }
      if (sol.status != LpStatus::optimal) throw std::logic_error("p_constrained: unexpected LP status");
      record(i, sol);
    }
  } else {
    std::size_t next_pair = 0;
    for (std::size_t i = n; i-- > 0;) {
      lp.add_row(objective_at(ctx, i), ctx.u[i]);
      while (next_pair < ctx.pairs.size() && ctx.pairs[next_pair].activation >= sample.s[i]) {
        lp.add_row(std::vector<double>(ctx.pair_coeff.begin() + next_pair * L,
                                       ctx.pair_coeff.begin() + (next_pair + 1) * L),
                   ctx.pair_bound[next_pair]);
        ++next_pair;
      }
      lp.set_objective(objective_at(ctx, i));
      const LpSolution sol = lp.solve();
      if (sol.status == LpStatus::infeasible) {
        fall_back_from(i, /*descending=*/true);
        break;
      }
      if (sol.status != LpStatus::optimal) throw std::logic_error("p_constrained: unexpected LP status");
      record(i, sol);
    }
  }
  return out;
}

}  // namespace cnfdr
