#include "cnfdr/special_fns.hpp"

#include <boost/math/distributions/non_central_t.hpp>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

using namespace cnfdr;

TEST_SUITE("special_fns") {

TEST_CASE("normal cdf matches reference values") {
  CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::fabs(std_normal_cdf(1.96) - 0.9750021048517795) < 1e-12);
  CHECK(std::fabs(std_normal_cdf(-1.0) - 0.1586552539314571) < 1e-12);
  CHECK(std_normal_cdf(-40.0) == 0.0);
  CHECK(std_normal_cdf(40.0) == 1.0);
}

TEST_CASE("normal cdf is monotone and symmetric") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(gen);
    CHECK(std::fabs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) < 1e-14);
    CHECK(std_normal_cdf(x) <= std_normal_cdf(x + 1e-3));
  }
}

TEST_CASE("lower incomplete gamma agrees with closed forms") {
  // shape 1 is the exponential distribution
  for (double x : {0.0, 0.1, 0.5, 1.0, 2.5, 7.0, 30.0}) {
    CHECK(std::fabs(reg_lower_gamma(1.0, x) - (1.0 - std::exp(-x))) < 1e-13);
  }
  CHECK(std::fabs(reg_lower_gamma(2.0, 1.0) - 0.2642411176571153) < 1e-12);
  // shape 1/2 connects to erf: P(1/2, t^2) = erf(t)
  for (double t : {0.2, 0.7, 1.3, 2.1, 3.0}) {
    CHECK(std::fabs(reg_lower_gamma(0.5, t * t) - std::erf(t)) < 1e-13);
  }
}

TEST_CASE("lower incomplete gamma covers both evaluation branches") {
  // series (x < shape+1) and continued fraction (x >= shape+1) must join smoothly
  for (double a : {0.3, 1.0, 2.5, 8.0, 50.0}) {
    const double left = reg_lower_gamma(a, a + 1.0 - 1e-9);
    const double right = reg_lower_gamma(a, a + 1.0 + 1e-9);
    CHECK(std::fabs(left - right) < 1e-9);
  }
}

TEST_CASE("lower incomplete gamma rejects bad arguments") {
  CHECK_THROWS_AS(reg_lower_gamma(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(reg_lower_gamma(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(reg_lower_gamma(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("gamma upper quantile hits known points") {
  // exponential: upper tail e^{-x}, so the e^{-1} quantile is exactly 1
  CHECK(std::fabs(gamma_upper_quantile(std::exp(-1.0), 1.0, 1.0) - 1.0) < 1e-9);
  CHECK(std::fabs(gamma_upper_quantile(0.5, 1.0, 1.0 / 0.95) - 0.7296286111157320) < 1e-9);
  CHECK(std::fabs(gamma_upper_quantile(0.5, 2.0, 1.0) - 1.6783469900166608) < 1e-9);
}

TEST_CASE("gamma upper quantile round-trips through the tail probability") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> uz(0.0, 1.0);
  std::uniform_real_distribution<double> ua(0.1, 30.0);
  std::uniform_real_distribution<double> us(0.2, 5.0);
  for (int i = 0; i < 300; ++i) {
    const double z = 1e-6 + uz(gen) * (1.0 - 2e-6);
    const double a = ua(gen);
    const double s = us(gen);
    const double x = gamma_upper_quantile(z, a, s);
    CHECK(x > 0.0);
    CHECK(std::fabs((1.0 - reg_lower_gamma(a, x / s)) - z) < 1e-9);
  }
  // beyond the default bracket: deep upper tail forces the widening loop
  const double deep = gamma_upper_quantile(1e-200, 1.0, 1.0);
  CHECK(std::fabs(deep - 200.0 * std::log(10.0)) < 1e-6);
}

TEST_CASE("gamma upper quantile rejects bad arguments") {
  CHECK_THROWS_AS(gamma_upper_quantile(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_upper_quantile(1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_upper_quantile(0.5, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_upper_quantile(0.5, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("noncentral t cdf matches an independent implementation") {
  // boost evaluates the cdf through its series representation, a different
  // route than our quadrature of the chi-mixture integral
  const double cases[][3] = {{-1, 20, -1}, {0, 20, 0},    {1.5, 10, 0.5}, {-3, 20, -2},
                             {2, 5, 1},    {-4, 20, -4},  {0.7, 2, -0.3}, {-0.5, 40, 1.2}};
  for (const auto& c : cases) {
    boost::math::non_central_t_distribution<double> d(c[1], c[2]);
    CHECK(std::fabs(noncentral_t_cdf(c[0], c[1], c[2]) - boost::math::cdf(d, c[0])) < 1e-8);
    CHECK(std::fabs(noncentral_t_pdf(c[0], c[1], c[2]) - boost::math::pdf(d, c[0])) < 1e-8);
  }
  CHECK(noncentral_t_cdf(0.0, 20.0, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::fabs(noncentral_t_cdf(-1.0, 20.0, -1.0) - 0.50493407625819) < 1e-8);
}

TEST_CASE("noncentral t cdf sweep against boost") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> ux(-6.0, 6.0);
  std::uniform_real_distribution<double> ud(-4.0, 4.0);
  std::uniform_real_distribution<double> uf(2.0, 60.0);
  for (int i = 0; i < 100; ++i) {
    const double x = ux(gen), df = uf(gen), del = ud(gen);
    boost::math::non_central_t_distribution<double> d(df, del);
    CHECK(std::fabs(noncentral_t_cdf(x, df, del) - boost::math::cdf(d, x)) < 1e-8);
  }
}

TEST_CASE("noncentral t approaches the shifted normal for huge df") {
  for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    for (double del : {-2.0, 0.0, 1.5}) {
      CHECK(std::fabs(noncentral_t_cdf(x, 1e6, del) - std_normal_cdf(x - del)) < 1e-3);
    }
  }
}

TEST_CASE("noncentral t cdf is monotone in x") {
  double prev = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.25) {
    const double v = noncentral_t_cdf(x, 20.0, -1.0);
    CHECK(v >= prev);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("noncentral t rejects bad df") {
  CHECK_THROWS_AS(noncentral_t_cdf(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(noncentral_t_pdf(0.0, -2.0, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
