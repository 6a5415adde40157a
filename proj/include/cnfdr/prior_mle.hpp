#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cnfdr/model.hpp"

namespace cnfdr {

struct MleResult {
  std::vector<double> nu_hat;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Maximum likelihood weights of the null family fitted to raw observations x,
// treating every observation as a true null: maximize sum_i ln(c . f(x_i))
// over the probability simplex via the EM fixed point
//   c_k <- (1/n) sum_i c_k f_k(x_i) / (c . f(x_i))
// from the uniform start.  Stops when max|delta c| < tol or after max_iter
// iterations.  If loglik_trace is given it receives the log-likelihood after
// every iteration (a nondecreasing sequence).  Throws when some observation
// has zero mixture density under the uniform weights.
MleResult em_fit_prior(const std::vector<double>& x, const NullFamily& family,
                       std::size_t max_iter = 10000, double tol = 1e-9,
                       std::vector<double>* loglik_trace = nullptr);

// Same objective over the wider search set {sum c_k = 1, c . f >= 0}: weights
// may go negative as long as the fitted mixture density stays nonnegative,
// which is enforced at every observation (the functional constraint is not
// finitely checkable).  Projected gradient ascent along the sum-zero subspace
// with backtracking line search.
MleResult extended_fit_prior(const std::vector<double>& x, const NullFamily& family,
                             std::size_t max_iter = 10000, double tol = 1e-9,
                             std::vector<double>* loglik_trace = nullptr);

// sum_i ln(c . f(x_i)); throws if the mixture density is not positive at
// every observation.
double log_likelihood(const std::vector<double>& c, const std::vector<double>& x,
                      const NullFamily& family);

struct RhoCheck {
  std::vector<double> integrals;  // integral of rho * f_k per component
  bool satisfied = false;         // all integrals within tol of 1
};

// Numeric test of the recoverability condition: the all-null MLE converges to
// the true weights exactly when the contamination density ratio rho has
// integral 1 against every component.  Quadrature starts on
// [-quad_range, quad_range] and the interval is widened until every
// component's mass outside is below 1e-12.  Throws if rho evaluates negative
// at a quadrature endpoint or probe.
RhoCheck check_rho_condition(const std::function<double(double)>& rho, const NullFamily& family,
                             double quad_range = 12.0, double tol = 1e-6);

}  // namespace cnfdr
