#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnfdr/model.hpp"

namespace cnfdr {

enum class Method { seq, glb, max, mix };

const char* method_name(Method m);
Method method_from_name(const std::string& name);  // throws on unknown names

// Which side of the pair-increment constraint the concentration margin lands
// on: `relaxed` grants the candidate mixture +epsilon_n of slack, `tight`
// demands it beat the empirical increment by epsilon_n.  Both appear in the
// source material; relaxed is the default and both are exercised end to end.
enum class PairMargin { relaxed, tight };

// Knobs of the constrained-maximization p-values.
struct ConstraintVariant {
  double sum_lower = 0.0;            // 0 = plain, 0.9 = high-mass variant
  PairMargin pair_margin = PairMargin::relaxed;
  double gamma_beta = 0.95;          // tail parameter of the small-rank bound
  double small_rank_exponent = 0.2;  // ranks up to n^exponent get the gamma bound
};

struct CoeffMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  static CoeffMatrix zeros(std::size_t rows, std::size_t cols) {
    return CoeffMatrix{rows, cols, std::vector<double>(rows * cols, 0.0)};
  }
  double operator()(std::size_t i, std::size_t k) const { return data[i * cols + k]; }
  double& operator()(std::size_t i, std::size_t k) { return data[i * cols + k]; }
};

struct PValueSet {
  Method method = Method::max;
  std::vector<double> p;                 // aligned with the sorted scores
  std::optional<CoeffMatrix> coeffs;     // optimizing weights, seq/glb only
  std::vector<std::uint8_t> infeasible;  // per-index infeasibility marks, seq/glb only
};

// p_i = max_k phi_k(x_i): the most conservative null in the family.
PValueSet p_max_all(const LabeledSample& sample, const NullFamily& family);

// p_i = nu . phi(x_i): the known-prior mixture null.
PValueSet p_mix_all(const LabeledSample& sample, const NullFamily& family, const Prior& prior);

// Per-rank caps on the feasible null mass at the order statistics: a gamma
// tail quantile for ranks up to n^small_rank_exponent, the empirical cdf
// plus epsilon_n beyond.
std::vector<double> u_bounds(const LabeledSample& sample, const ConstraintVariant& variant);

// The LP-maximized p-values.  For each sorted index i,
//   p_i = max c . phi(x_(i))
// over c >= 0 with sum_lower <= sum(c) <= 1, subject to
//   c . phi(x_(j)) <= u_j              (j >= i in seq mode, all j in glb mode)
//   c . [phi(t2) - phi(t1)] <= Fn(t2) - Fn(t1) +/- epsilon_n
// for grid pairs t1 < t2 (t1 >= x_(i) in seq mode, all pairs in glb mode).
// mode must be Method::seq or Method::glb.  Infeasible programs are marked in
// `infeasible`: with sum_lower > 0 the index falls back to the plain
// (sum_lower = 0) value; a plain program with an empty feasible set (routine
// under the tight pair margin, where a sparse stretch of data can rule out
// every c >= 0) reports the vacuous maximum 0.
PValueSet p_constrained(const LabeledSample& sample, const NullFamily& family,
                        const ConstraintVariant& variant, Method mode);

}  // namespace cnfdr
