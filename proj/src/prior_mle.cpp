#include "cnfdr/prior_mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cnfdr/special_fns.hpp"

namespace cnfdr {

namespace {

// density of every component at every observation, row-major n x L
std::vector<double> density_matrix(const std::vector<double>& x, const NullFamily& family) {
  const std::size_t L = family.size();
  std::vector<double> f(x.size() * L);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < L; ++k) f[i * L + k] = family.components[k].pdf(x[i]);
  }
  return f;
}

double mixture_density(const std::vector<double>& f, std::size_t i, std::size_t L,
                       const std::vector<double>& c) {
  double q = 0.0;
  for (std::size_t k = 0; k < L; ++k) q += c[k] * f[i * L + k];
  return q;
}

}  // namespace

MleResult em_fit_prior(const std::vector<double>& x, const NullFamily& family,
                       std::size_t max_iter, double tol,
                       std::vector<double>* loglik_trace) {
  family.validate();
  if (x.empty()) throw std::invalid_argument("em_fit_prior: empty sample");
  const std::size_t n = x.size();
  const std::size_t L = family.size();
  const std::vector<double> f = density_matrix(x, family);

  MleResult res;
  std::vector<double> c(L, 1.0 / static_cast<double>(L));
  std::vector<double> next(L);
  for (std::size_t it = 0; it < max_iter; ++it) {
    double ell = 0.0;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double q = mixture_density(f, i, L, c);
      if (!(q > 0.0)) {
        throw std::domain_error("em_fit_prior: zero mixture density at observation " +
                                std::to_string(i));
      }
      ell += std::log(q);
      for (std::size_t k = 0; k < L; ++k) next[k] += c[k] * f[i * L + k] / q;
    }
    double delta = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
      next[k] /= static_cast<double>(n);
      delta = std::fmax(delta, std::fabs(next[k] - c[k]));
    }
    c = next;
    ++res.iterations;
    if (loglik_trace) loglik_trace->push_back(ell);
    if (delta < tol) {
      res.converged = true;
      break;
    }
  }
  res.nu_hat = c;
  res.log_likelihood = log_likelihood(c, x, family);
  return res;
}

MleResult extended_fit_prior(const std::vector<double>& x, const NullFamily& family,
                             std::size_t max_iter, double tol,
                             std::vector<double>* loglik_trace) {
  family.validate();
  if (x.empty()) throw std::invalid_argument("extended_fit_prior: empty sample");
  const std::size_t n = x.size();
  const std::size_t L = family.size();
  const std::vector<double> f = density_matrix(x, family);

  std::vector<double> c(L, 1.0 / static_cast<double>(L));
  std::vector<double> q(n), trial_c(L), trial_q(n), grad(L);

  auto objective = [&](const std::vector<double>& coeff, std::vector<double>* dens) {
    double ell = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double qi = mixture_density(f, i, L, coeff);
      if (!(qi > 0.0)) return -std::numeric_limits<double>::infinity();
      (*dens)[i] = qi;
      ell += std::log(qi);
    }
    return ell;
  };

  MleResult res;
  double ell = objective(c, &q);
  if (std::isinf(ell)) {
    throw std::domain_error("extended_fit_prior: zero mixture density at the uniform start");
  }
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (loglik_trace) loglik_trace->push_back(ell);
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < L; ++k) grad[k] += f[i * L + k] / q[i];
    }
    // project the gradient onto the sum-zero subspace so the weights keep
    // summing to one; negative coordinates are allowed
    double mean = 0.0;
    for (double g : grad) mean += g;
    mean /= static_cast<double>(L);
    double slope = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
      grad[k] = (grad[k] - mean) / static_cast<double>(n);
      slope += grad[k] * grad[k];
    }
    slope *= static_cast<double>(n);  // directional derivative along grad

    double step = 1.0;
    bool moved = false;
    for (int half = 0; half < 60; ++half) {
      double delta = 0.0;
      for (std::size_t k = 0; k < L; ++k) {
        trial_c[k] = c[k] + step * grad[k];
        delta = std::fmax(delta, std::fabs(step * grad[k]));
      }
      const double trial_ell = objective(trial_c, &trial_q);
      if (trial_ell >= ell + 1e-4 * step * slope) {
        c = trial_c;
        q = trial_q;
        ell = trial_ell;
        ++res.iterations;
        moved = true;
        if (delta < tol) res.converged = true;
        break;
      }
      step *= 0.5;
    }
    if (res.converged || !moved) {
      // an unimprovable point is a converged point for a concave objective
      if (!moved) res.converged = true;
      break;
    }
  }
  res.nu_hat = c;
  res.log_likelihood = ell;
  return res;
}

double log_likelihood(const std::vector<double>& c, const std::vector<double>& x,
                      const NullFamily& family) {
  family.validate();
  if (c.size() != family.size()) {
    throw std::invalid_argument("log_likelihood: weight/component count mismatch");
  }
  double ell = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double q = 0.0;
    for (std::size_t k = 0; k < family.size(); ++k) {
      q += c[k] * family.components[k].pdf(x[i]);
    }
    if (!(q > 0.0)) {
      throw std::domain_error("log_likelihood: nonpositive mixture density at observation " +
                              std::to_string(i));
    }
    ell += std::log(q);
  }
  return ell;
}

RhoCheck check_rho_condition(const std::function<double(double)>& rho, const NullFamily& family,
                             double quad_range, double tol) {
  family.validate();
  if (!(quad_range > 0.0)) throw std::invalid_argument("check_rho_condition: range must be > 0");

  // widen symmetrically until every component keeps essentially all its mass
  // inside the window
  double r = quad_range;
  for (int tries = 0; tries < 64; ++tries) {
    double worst = 0.0;
    for (const DistributionSpec& d : family.components) {
      worst = std::fmax(worst, d.cdf(-r) + (1.0 - d.cdf(r)));
    }
    if (worst < 1e-12) break;
    r *= 2.0;
  }

  // Panel width tied to the narrowest component so no density bump can slip
  // between the first probe points of the adaptive rule.
  double scale = 1.0;
  for (const DistributionSpec& d : family.components) {
    if (d.kind == DistributionSpec::Kind::normal) scale = std::fmin(scale, d.sigma);
  }
  const double width = 0.5 * scale;
  const std::size_t panels = static_cast<std::size_t>(std::ceil(2.0 * r / width));

  RhoCheck out;
  out.satisfied = true;
  for (const DistributionSpec& d : family.components) {
    auto integrand = [&](double t) {
      const double v = rho(t);
      if (v < 0.0) {
        throw std::domain_error("check_rho_condition: rho negative at t = " + std::to_string(t));
      }
      return v * d.pdf(t);
    };
    double integral = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = -r + 2.0 * r * static_cast<double>(p) / static_cast<double>(panels);
      const double b = -r + 2.0 * r * static_cast<double>(p + 1) / static_cast<double>(panels);
      integral += integrate_simpson(integrand, a, b, 1e-9 / static_cast<double>(panels));
    }
    out.integrals.push_back(integral);
    if (std::fabs(integral - 1.0) > tol) out.satisfied = false;
  }
  return out;
}

}  // namespace cnfdr
