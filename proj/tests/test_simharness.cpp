#include "cnfdr/simharness.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace cnfdr;

namespace {

bool reports_identical(const SimReport& a, const SimReport& b) {
  if (a.n != b.n || a.reps != b.reps || a.methods.size() != b.methods.size()) return false;
  for (std::size_t m = 0; m < a.methods.size(); ++m) {
    const MethodReport& x = a.methods[m];
    const MethodReport& y = b.methods[m];
    if (x.method != y.method) return false;
    if (x.metrics.fdr != y.metrics.fdr || x.metrics.power != y.metrics.power ||
        x.metrics.sd_tpp != y.metrics.sd_tpp || x.metrics.pfdr != y.metrics.pfdr) {
      return false;
    }
    if (x.scaled_p_curve != y.scaled_p_curve) return false;
    if (x.coeff_curves != y.coeff_curves) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("simharness") {

TEST_CASE("curve averaging follows the scaled order-statistic formula") {
  // two repetitions, n = 1: mean smallest p is 0.02, scaled by n/i = 1
  CHECK(pvalue_curves({{0.01}, {0.03}})[0] == doctest::Approx(0.02).epsilon(1e-15));

  // two repetitions, n = 100, same pair at the first order statistic:
  // ordinate 100 * 0.02 / 1 = 2
  std::vector<double> a(100, 0.5), b(100, 0.5);
  a[0] = 0.01;
  b[0] = 0.03;
  const std::vector<double> scaled = pvalue_curves({a, b});
  CHECK(scaled[0] == doctest::Approx(2.0).epsilon(1e-15));

  // exactly uniform order statistics flatten to 1
  std::vector<double> uniform(100);
  for (int i = 0; i < 100; ++i) uniform[i] = (i + 1) / 100.0;
  for (double v : pvalue_curves({uniform, uniform})) {
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }

  // single repetition: the curve is that repetition rescaled
  std::vector<double> one = {0.1, 0.4, 0.9};
  const std::vector<double> c = pvalue_curves({one});
  CHECK(c[0] == doctest::Approx(3.0 * 0.1 / 1.0));
  CHECK(c[1] == doctest::Approx(3.0 * 0.4 / 2.0));
  CHECK(c[2] == doctest::Approx(3.0 * 0.9 / 3.0));

  CHECK_THROWS_AS(pvalue_curves({}), std::invalid_argument);
  CHECK_THROWS_AS(pvalue_curves({{0.1}, {0.1, 0.2}}), std::invalid_argument);
}

TEST_CASE("coefficient averaging preserves the feasible range") {
  // all repetitions at the last vertex: component L is constantly 1
  CoeffMatrix v = CoeffMatrix::zeros(4, 3);
  for (std::size_t i = 0; i < 4; ++i) v(i, 2) = 1.0;
  const std::vector<std::vector<double>> curves = coefficient_curves({v, v});
  REQUIRE(curves.size() == 3);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(curves[0][i] == 0.0);
    CHECK(curves[1][i] == 0.0);
    CHECK(curves[2][i] == 1.0);
  }

  // single repetition: identity
  CoeffMatrix w = CoeffMatrix::zeros(2, 2);
  w(0, 0) = 0.25;
  w(1, 1) = 0.5;
  const std::vector<std::vector<double>> single = coefficient_curves({w});
  CHECK(single[0][0] == 0.25);
  CHECK(single[1][1] == 0.5);

  CoeffMatrix other = CoeffMatrix::zeros(3, 2);
  CHECK_THROWS_AS(coefficient_curves({w, other}), std::invalid_argument);
  CHECK_THROWS_AS(coefficient_curves({}), std::invalid_argument);
  CHECK_THROWS_AS(coefficient_curves({CoeffMatrix::zeros(0, 0)}), std::invalid_argument);
}

TEST_CASE("identical configurations reproduce bitwise across thread counts") {
  SimConfig cfg;
  cfg.model = study_preset(1);
  cfg.n = 300;
  cfg.reps = 16;
  cfg.alpha = 0.25;
  cfg.seed = 11;

  const SimReport r1 = run_simulation(cfg, 1);
  const SimReport r2 = run_simulation(cfg, 1);
  const SimReport r3 = run_simulation(cfg, 3);
  CHECK(reports_identical(r1, r2));
  CHECK(reports_identical(r1, r3));  // reduction is ordered by repetition

  // a different seed must actually change the outcome
  SimConfig other = cfg;
  other.seed = 12;
  CHECK(!reports_identical(r1, run_simulation(other, 1)));

  // basic report shape and ranges
  REQUIRE(r1.methods.size() == 4);
  for (const MethodReport& mr : r1.methods) {
    CHECK(mr.scaled_p_curve.size() == cfg.n);
    CHECK(mr.metrics.fdr >= 0.0);
    CHECK(mr.metrics.fdr <= 1.0);
    CHECK(mr.metrics.power >= 0.0);
    CHECK(mr.metrics.power <= 1.0);
    CHECK(mr.metrics.sd_tpp >= 0.0);
    CHECK(mr.metrics.sd_tpp <= 1.0);
  }
  // optimizing weights only for the LP methods, in configured order
  CHECK(r1.methods[0].method == Method::seq);
  CHECK(r1.methods[0].coeff_curves.size() == 3);
  CHECK(r1.methods[1].method == Method::glb);
  CHECK(r1.methods[1].coeff_curves.size() == 3);
  CHECK(r1.methods[2].coeff_curves.empty());
  CHECK(r1.methods[3].coeff_curves.empty());
  for (const auto& curve : r1.methods[0].coeff_curves) {
    for (double v : curve) {
      CHECK(v >= -1e-12);
      CHECK(v <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("scaled p-value curves separate the methods near the origin") {
  SimConfig cfg;
  cfg.model = study_preset(1);
  cfg.n = 500;
  cfg.reps = 40;
  cfg.alpha = 0.25;
  cfg.seed = 11;
  const SimReport r = run_simulation(cfg, 0);
  const std::vector<double>& seq = r.methods[0].scaled_p_curve;
  const std::vector<double>& glb = r.methods[1].scaled_p_curve;
  const std::vector<double>& max = r.methods[2].scaled_p_curve;
  const std::vector<double>& mix = r.methods[3].scaled_p_curve;
  for (std::size_t i = 0; i < cfg.n / 20; ++i) {  // i/n <= 0.05
    CHECK(max[i] > seq[i]);
    CHECK(seq[i] > mix[i]);
    CHECK(glb[i] > mix[i]);
    // the two LP curves track each other closely
    CHECK(std::fabs(seq[i] - glb[i]) / glb[i] < 0.10);
  }
}

TEST_CASE("high-mass side constraint never loses power repetition by repetition") {
  // primed p-values are dominated by plain ones, so the step-up rejection
  // set can only grow; check the implication directly on a few repetitions
  SimConfig plain;
  plain.model = study_preset(1);
  plain.n = 400;
  plain.reps = 8;
  plain.alpha = 0.25;
  plain.seed = 23;
  plain.methods = {Method::seq};
  SimConfig primed = plain;
  primed.variant.sum_lower = 0.9;
  const SimReport rp = run_simulation(plain, 0);
  const SimReport rq = run_simulation(primed, 0);
  CHECK(rq.methods[0].metrics.power >= rp.methods[0].metrics.power);
}

TEST_CASE("a vanishing false fraction forces zero power") {
  SimConfig cfg;
  cfg.model = study_preset(1);
  cfg.model.a = 1e-12;
  cfg.n = 200;
  cfg.reps = 10;
  cfg.alpha = 0.25;
  cfg.seed = 3;
  cfg.methods = {Method::mix};
  const SimReport r = run_simulation(cfg, 1);
  CHECK(r.methods[0].metrics.power == 0.0);
}

TEST_CASE("invalid configurations are rejected") {
  SimConfig cfg;
  cfg.model = study_preset(1);
  cfg.n = 100;
  cfg.reps = 0;
  CHECK_THROWS_AS(run_simulation(cfg, 1), std::invalid_argument);
  cfg.reps = 2;
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(run_simulation(cfg, 1), std::invalid_argument);
  cfg.alpha = 0.25;
  cfg.n = 1;
  CHECK_THROWS_AS(run_simulation(cfg, 1), std::invalid_argument);
}

}  // TEST_SUITE
