#include "cnfdr/lp_core.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"

using namespace cnfdr;

namespace {

// residual check: a claimed optimum must satisfy every constraint
void check_feasible(const LinearProgram& lp, const LpSolution& s, double tol = 1e-9) {
  REQUIRE(s.status == LpStatus::optimal);
  const std::size_t L = lp.objective.size();
  for (std::size_t k = 0; k < L; ++k) {
    const double lo = lp.var_lower.empty() ? 0.0 : lp.var_lower[k];
    CHECK(s.c_star[k] >= lo - tol);
  }
  for (const LpRow& r : lp.rows) {
    double v = 0.0;
    for (std::size_t k = 0; k < L; ++k) v += r.coeff[k] * s.c_star[k];
    CHECK(v <= r.bound + tol);
  }
  for (const LpRow& r : lp.lower_rows) {
    double v = 0.0;
    for (std::size_t k = 0; k < L; ++k) v += r.coeff[k] * s.c_star[k];
    CHECK(v >= r.bound - tol);
  }
}

LinearProgram random_program(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> nl(1, 3), nr(1, 12);
  LinearProgram lp;
  const int L = nl(gen), m = nr(gen);
  lp.objective.resize(L);
  for (auto& v : lp.objective) v = u(gen);
  lp.rows.push_back({std::vector<double>(L, 1.0), 2.0});  // keeps the region bounded
  for (int r = 0; r < m; ++r) {
    LpRow row;
    row.coeff.resize(L);
    for (auto& v : row.coeff) v = u(gen);
    row.bound = u(gen);
    lp.rows.push_back(row);
  }
  if (std::uniform_int_distribution<int>(0, 2)(gen) == 0) {
    lp.lower_rows.push_back({std::vector<double>(L, 1.0), 0.5});
  }
  return lp;
}

}  // namespace

TEST_SUITE("lp_core") {

TEST_CASE("textbook programs solve to their hand optima") {
  {  // maximize c1 subject to c1 <= 0.3
    LinearProgram lp;
    lp.objective = {1.0};
    lp.rows = {{{1.0}, 0.3}};
    const LpSolution s = lp_maximize(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(std::fabs(s.value - 0.3) < 1e-9);
    CHECK(std::fabs(s.c_star[0] - 0.3) < 1e-9);
  }
  {  // maximize 2 c1 + c2 subject to c1 + c2 <= 1, c1 <= 0.2: unique optimum at (0.2, 0.8)
    LinearProgram lp;
    lp.objective = {2.0, 1.0};
    lp.rows = {{{1.0, 1.0}, 1.0}, {{1.0, 0.0}, 0.2}};
    const LpSolution s = lp_maximize(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(std::fabs(s.value - 1.2) < 1e-9);
    CHECK(std::fabs(s.c_star[0] - 0.2) < 1e-9);
    CHECK(std::fabs(s.c_star[1] - 0.8) < 1e-9);
  }
  {  // contradictory bounds: c1 >= 0.9 and c1 <= 0.5
    LinearProgram lp;
    lp.objective = {1.0};
    lp.rows = {{{1.0}, 0.5}};
    lp.lower_rows = {{{1.0}, 0.9}};
    CHECK(lp_maximize(lp).status == LpStatus::infeasible);
    CHECK(lp_brute_oracle(lp).status == LpStatus::infeasible);
  }
  {  // negative bound with nonnegative variables is plainly infeasible
    LinearProgram lp;
    lp.objective = {1.0};
    lp.rows = {{{1.0}, -1.0}};
    CHECK(lp_maximize(lp).status == LpStatus::infeasible);
  }
  {  // nothing caps the objective direction
    LinearProgram lp;
    lp.objective = {1.0, 0.0};
    lp.rows = {{{0.0, 1.0}, 1.0}};
    CHECK(lp_maximize(lp).status == LpStatus::unbounded);
  }
  {  // equality pinch: 0.3 <= c1 <= 0.3
    LinearProgram lp;
    lp.objective = {-1.0};
    lp.rows = {{{1.0}, 0.3}};
    lp.lower_rows = {{{1.0}, 0.3}};
    const LpSolution s = lp_maximize(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(std::fabs(s.c_star[0] - 0.3) < 1e-9);
  }
  {  // variable lower bounds fold in: min x1 + 2 x2 with x1 >= .1, x2 >= .2, .9 <= x1+x2 <= 1
    LinearProgram lp;
    lp.objective = {-1.0, -2.0};
    lp.rows = {{{1.0, 1.0}, 1.0}};
    lp.lower_rows = {{{1.0, 1.0}, 0.9}};
    lp.var_lower = {0.1, 0.2};
    const LpSolution s = lp_maximize(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(std::fabs(s.value + 1.1) < 1e-9);  // x = (0.7, 0.2)
    check_feasible(lp, s);
  }
}

TEST_CASE("solver agrees with the vertex-enumeration oracle on random programs") {
  std::mt19937_64 gen(42);
  int optimal = 0, infeasible = 0;
  for (int it = 0; it < 400; ++it) {
    const LinearProgram lp = random_program(gen);
    const LpSolution a = lp_maximize(lp);
    const LpSolution b = lp_brute_oracle(lp);
    REQUIRE((a.status == LpStatus::optimal) == (b.status == LpStatus::optimal));
    if (a.status == LpStatus::optimal) {
      ++optimal;
      CHECK(std::fabs(a.value - b.value) <= 1e-6);
      check_feasible(lp, a);
    } else {
      ++infeasible;
    }
    const std::size_t budget =
        50 * (lp.objective.size() + lp.rows.size() + lp.lower_rows.size());
    CHECK(a.pivots <= budget);
  }
  // the generator must exercise both verdicts
  CHECK(optimal > 50);
  CHECK(infeasible > 50);
}

TEST_CASE("repeated solves return bitwise-identical vertices") {
  std::mt19937_64 gen(9);
  for (int it = 0; it < 50; ++it) {
    const LinearProgram lp = random_program(gen);
    const LpSolution a = lp_maximize(lp);
    const LpSolution b = lp_maximize(lp);
    REQUIRE(a.status == b.status);
    if (a.status != LpStatus::optimal) continue;
    REQUIRE(a.c_star.size() == b.c_star.size());
    CHECK(std::memcmp(a.c_star.data(), b.c_star.data(), a.c_star.size() * sizeof(double)) == 0);
    CHECK(a.value == b.value);
    CHECK(a.pivots == b.pivots);
  }
}

TEST_CASE("duplicated rows stay within the pivot budget") {
  // heavy degeneracy: every constraint repeated many times must not stall
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int it = 0; it < 30; ++it) {
    LinearProgram lp;
    lp.objective = {u(gen), u(gen), u(gen)};
    LpRow base{{u(gen), u(gen), u(gen)}, u(gen)};
    LpRow cap{{1.0, 1.0, 1.0}, 1.0};
    for (int d = 0; d < 20; ++d) {
      lp.rows.push_back(base);
      lp.rows.push_back(cap);
    }
    const LpSolution s = lp_maximize(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.pivots <= 50 * (3 + lp.rows.size()));
    check_feasible(lp, s);
    // same optimum as the deduplicated program
    LinearProgram small;
    small.objective = lp.objective;
    small.rows = {base, cap};
    CHECK(std::fabs(lp_maximize(small).value - s.value) <= 1e-9);
  }
}

TEST_CASE("dropping a constraint never lowers the optimum") {
  std::mt19937_64 gen(13);
  for (int it = 0; it < 60; ++it) {
    LinearProgram lp = random_program(gen);
    lp.lower_rows.clear();  // keep the relaxation feasible whenever lp is
    const LpSolution full = lp_maximize(lp);
    if (full.status != LpStatus::optimal) continue;
    for (std::size_t drop = 1; drop < lp.rows.size(); ++drop) {
      LinearProgram relaxed = lp;
      relaxed.rows.erase(relaxed.rows.begin() + static_cast<std::ptrdiff_t>(drop));
      const LpSolution r = lp_maximize(relaxed);
      if (r.status == LpStatus::optimal) CHECK(r.value >= full.value - 1e-9);
      else CHECK(r.status == LpStatus::unbounded);
    }
  }
}

TEST_CASE("incremental engine tracks cold solves across mutation chains") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checks = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const int L = 1 + static_cast<int>(u(gen) * 4.0);
    IncrementalLp inc(static_cast<std::size_t>(L));
    LinearProgram cold;
    cold.objective.assign(L, 0.0);
    const std::vector<double> ones(static_cast<std::size_t>(L), 1.0);
    inc.add_row(ones, 1.0);  // total-mass row, as in intended use
    cold.rows.push_back({ones, 1.0});
    std::vector<double> obj(static_cast<std::size_t>(L));
    for (int step = 0; step < 60; ++step) {
      const int nadd = 1 + static_cast<int>(u(gen) * 2.0);
      for (int a = 0; a < nadd; ++a) {
        LpRow row;
        row.coeff.resize(static_cast<std::size_t>(L));
        for (auto& v : row.coeff) v = u(gen) * (u(gen) < 0.15 ? -1.0 : 1.0);
        row.bound = u(gen) * 0.8;
        inc.add_row(row.coeff, row.bound);
        cold.rows.push_back(row);
      }
      for (auto& v : obj) v = u(gen) * (u(gen) < 0.1 ? -0.3 : 1.0);
      inc.set_objective(obj);
      cold.objective = obj;
      const LpSolution warm = inc.solve();
      const LpSolution ref = lp_maximize(cold);
      ++checks;
      REQUIRE(warm.status == ref.status);
      if (warm.status == LpStatus::optimal) {
        CHECK(std::fabs(warm.value - ref.value) <= 1e-8);
      }
      if (warm.status == LpStatus::infeasible) break;  // sticky by design
    }
  }
  CHECK(checks > 500);
}

}  // TEST_SUITE
