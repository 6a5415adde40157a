#include "cnfdr/special_fns.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cnfdr {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// Series expansion of P(a, x), valid and fast for x < a + 1.  The term count
// grows like sqrt(a) when x is close to a, so the cap must accommodate huge
// shapes (df/2 for a million degrees of freedom needs a few thousand terms).
double lower_gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 100000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("reg_lower_gamma: series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Q(a, x) = 1 - P(a, x),
// valid for x >= a + 1.
double upper_gamma_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 100000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("reg_lower_gamma: continued fraction did not converge");
}

// Unscaled gamma density x^{a-1} e^{-x} / Gamma(a); used as the Newton
// derivative when inverting the gamma tails.
double gamma_pdf_unscaled(double a, double x) {
  if (x <= 0.0) return (a < 1.0) ? std::numeric_limits<double>::infinity()
                                 : (a == 1.0 ? 1.0 : 0.0);
  return std::exp((a - 1.0) * std::log(x) - x - std::lgamma(a));
}

// Native upper tail Q(a, x).  The continued fraction yields Q directly, so
// deep tails survive where 1 - P(a, x) would round to zero; the series branch
// only runs where Q is far from machine epsilon and the subtraction is safe.
double upper_gamma_native(double a, double x) {
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - lower_gamma_series(a, x) : upper_gamma_cf(a, x);
}

// Solve f(t) = target for f monotone decreasing (upper tail) or increasing
// (lower tail) on [lo, hi], Newton steps safeguarded by bisection.  `tail`
// selects which regularized gamma tail f evaluates.
enum class GammaTail { lower, upper };

double invert_gamma_tail(GammaTail tail, double a, double target, double lo, double hi) {
  auto eval = [&](double t) {
    return (tail == GammaTail::lower ? reg_lower_gamma(a, t) : upper_gamma_native(a, t)) -
           target;
  };
  double flo = eval(lo);
  double fhi = eval(hi);
  // Widen until the bracket straddles the root.
  for (int k = 0; k < 200 && flo * fhi > 0.0; ++k) {
    hi *= 2.0;
    fhi = eval(hi);
  }
  if (flo * fhi > 0.0) throw std::runtime_error("gamma quantile: bracket search failed");

  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = eval(t);
    if ((f > 0.0) == (flo > 0.0)) {
      lo = t;
    } else {
      hi = t;
    }
    const double deriv = (tail == GammaTail::lower ? 1.0 : -1.0) * gamma_pdf_unscaled(a, t);
    double next = t - (deriv != 0.0 ? f / deriv : 0.0);
    if (!(next > lo && next < hi) || deriv == 0.0) {
      next = 0.5 * (lo + hi);  // Newton left the bracket; bisect instead
    }
    if (std::fabs(next - t) <= 1e-14 * (1.0 + std::fabs(next))) {
      return next;
    }
    t = next;
  }
  return t;
}

// log of the density of W = sqrt(V/df), V ~ chi-squared(df).
double log_chi_over_sqrt_df_pdf(double df, double u) {
  const double half = 0.5 * df;
  return std::log(2.0) + half * std::log(half) - std::lgamma(half) +
         (df - 1.0) * std::log(u) - half * u * u;
}

// Plain adaptive Simpson with absolute tolerance.  The first `force` levels
// always subdivide: when a steep cdf factor meets a peaked density the
// product can live entirely between the stencil points of the first few
// splits, and the two coarse estimates then agree near zero and would accept
// a grossly wrong answer.  Forcing 64 seed panels bounds the width a feature
// can have while staying invisible.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth, int force) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || (force <= 0 && std::fabs(delta) <= 15.0 * tol)) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 60, 6);
}

// Integration range for the chi mixture: carry all but ~1e-16 of the mass of W.
void noncentral_t_range(double df, double* u_lo, double* u_hi) {
  const double half = 0.5 * df;
  const double g_lo = invert_gamma_tail(GammaTail::lower, half, 1e-16, 0.0, half + 1.0);
  const double g_hi = invert_gamma_tail(GammaTail::upper, half, 1e-16, half + 1.0, 50.0 * half + 50.0);
  *u_lo = std::sqrt(2.0 * g_lo / df);
  *u_hi = std::sqrt(2.0 * g_hi / df);
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double reg_lower_gamma(double shape, double x) {
  if (!(shape > 0.0)) throw std::invalid_argument("reg_lower_gamma: shape must be > 0");
  if (!(x >= 0.0)) throw std::invalid_argument("reg_lower_gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  return x < shape + 1.0 ? lower_gamma_series(shape, x) : 1.0 - upper_gamma_cf(shape, x);
}

double gamma_upper_quantile(double z, double shape, double scale) {
  if (!(z > 0.0 && z < 1.0)) throw std::invalid_argument("gamma_upper_quantile: z must be in (0,1)");
  if (!(shape > 0.0)) throw std::invalid_argument("gamma_upper_quantile: shape must be > 0");
  if (!(scale > 0.0)) throw std::invalid_argument("gamma_upper_quantile: scale must be > 0");
  return scale * invert_gamma_tail(GammaTail::upper, shape, z, 0.0, shape * 50.0);
}

double noncentral_t_cdf(double x, double df, double delta) {
  if (!(df > 0.0)) throw std::invalid_argument("noncentral_t_cdf: df must be > 0");
  double u_lo, u_hi;
  noncentral_t_range(df, &u_lo, &u_hi);
  auto f = [&](double u) {
    return std_normal_cdf(x * u - delta) * std::exp(log_chi_over_sqrt_df_pdf(df, u));
  };
  const double v = integrate(f, u_lo, u_hi, 1e-11);
  return std::fmin(1.0, std::fmax(0.0, v));
}

double noncentral_t_pdf(double x, double df, double delta) {
  if (!(df > 0.0)) throw std::invalid_argument("noncentral_t_pdf: df must be > 0");
  double u_lo, u_hi;
  noncentral_t_range(df, &u_lo, &u_hi);
  auto f = [&](double u) {
    return u * std_normal_pdf(x * u - delta) * std::exp(log_chi_over_sqrt_df_pdf(df, u));
  };
  return std::fmax(0.0, integrate(f, u_lo, u_hi, 1e-12));
}

double integrate_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  return integrate(f, a, b, tol);
}

}  // namespace cnfdr
