#pragma once

#include <functional>

namespace cnfdr {

// CDF of the standard normal distribution.
double std_normal_cdf(double x);

// Density of the standard normal distribution.
double std_normal_pdf(double x);

// Regularized lower incomplete gamma function P(shape, x).
// Series expansion for x < shape + 1, Lentz continued fraction otherwise.
// Requires shape > 0 and x >= 0.
double reg_lower_gamma(double shape, double x);

// Upper-tail quantile of the Gamma(shape, scale) distribution: the x with
// P(X > x) = z.  Newton iteration safeguarded by bisection; the initial
// bracket [0, shape*scale*50] is doubled outward if it does not straddle
// the root.  Requires z in (0,1), shape > 0, scale > 0.
double gamma_upper_quantile(double z, double shape, double scale);

// CDF of the noncentral t distribution with df degrees of freedom and
// noncentrality delta, evaluated by adaptive quadrature of
//   F(x) = integral over u of Phi(x*u - delta) dP(W <= u),
// where W = sqrt(V/df) and V is chi-squared with df degrees of freedom.
// Requires df > 0.
double noncentral_t_cdf(double x, double df, double delta);

// Density of the noncentral t distribution, from the same mixture
// representation (needed for likelihood work on t families).
double noncentral_t_pdf(double x, double df, double delta);

// Adaptive Simpson quadrature of f over [a, b] with absolute tolerance.
// Bisection recursion up to depth 60, so isolated kinks or jumps cost extra
// subdivisions but still converge.
double integrate_simpson(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace cnfdr
