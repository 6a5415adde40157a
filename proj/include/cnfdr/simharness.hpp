#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cnfdr/bh.hpp"
#include "cnfdr/model.hpp"
#include "cnfdr/pvalues.hpp"

namespace cnfdr {

// One study: draw `reps` samples of size n from the model, compute the
// requested p-values, apply the step-up procedure at `alpha`, aggregate.
struct SimConfig {
  MixtureModel model;
  std::size_t n = 5000;
  std::size_t reps = 200;
  double alpha = 0.25;
  std::vector<Method> methods{Method::seq, Method::glb, Method::max, Method::mix};
  ConstraintVariant variant;  // applies to seq/glb only
  std::uint64_t seed = 1;
};

struct MethodReport {
  Method method = Method::max;
  RunMetrics metrics;
  // n * (mean i-th smallest p) / i for i = 1..n; the abscissa of entry i-1
  // is i/n
  std::vector<double> scaled_p_curve;
  // coeff_curves[k][i-1] = mean k-th optimizing weight at the i-th smallest
  // p-value; only filled for seq/glb
  std::vector<std::vector<double>> coeff_curves;
};

struct SimReport {
  std::size_t n = 0;
  std::size_t reps = 0;
  std::vector<MethodReport> methods;  // one per configured method, same order
};

// Runs the repetitions (across `threads` workers; 0 means the hardware
// count) and reduces in repetition order, so the report is bitwise
// reproducible for a given config regardless of scheduling.  Per-repetition
// seeds are derived from (config.seed, repetition index).
SimReport run_simulation(const SimConfig& config, std::size_t threads = 0);

// Mean-over-repetitions curve of scaled sorted p-values: entry i-1 holds
// n * mean(p_(i)) / i.  All repetitions must share one n.
std::vector<double> pvalue_curves(const std::vector<std::vector<double>>& sorted_p_per_rep);

// Mean-over-repetitions optimizing weights, already aligned to each
// repetition's sorted p-values; returns one curve per component.
std::vector<std::vector<double>> coefficient_curves(const std::vector<CoeffMatrix>& aligned);

}  // namespace cnfdr
