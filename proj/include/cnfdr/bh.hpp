#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cnfdr/model.hpp"
#include "cnfdr/pvalues.hpp"

namespace cnfdr {

// One application of the step-up procedure to one sample.
struct TestOutcome {
  std::size_t R = 0;                     // rejection count
  std::vector<std::uint8_t> rejected;    // aligned to the sorted scores
  std::size_t V = 0;                     // rejected true nulls
  double alpha = 0.0;
};

// Step-up cutoff: R = max{ i >= 0 : p_(i)/alpha <= (rank count of s_(i))/n },
// rejecting every observation with s_i <= s_(R).  Rank counts rather than the
// plain index keep tied scores together: either every copy of a value is
// rejected or none is.
TestOutcome bh_reject(const PValueSet& pset, double alpha, const LabeledSample& sample);

struct RunMetrics {
  double fdr = 0.0;              // mean of V/(R v 1)
  std::optional<double> pfdr;    // mean of V/R over repetitions with R > 0
  double power = 0.0;            // mean of (R-V)/((n-N) v 1)
  double sd_tpp = 0.0;           // sample sd of the per-repetition power terms
};

// Monte-Carlo aggregation across repetitions.  false_null_counts[r] is the
// number of false nulls (n - N) planted in repetition r.  pfdr is absent when
// no repetition rejects anything.
RunMetrics run_metrics(const std::vector<TestOutcome>& outcomes,
                       const std::vector<std::size_t>& false_null_counts);

// Ingredients of the finite-sample FDR remainder for the modified sequential
// procedure.  a_n is the small-rank cutoff (n^0.2 in the study) and beta the
// gamma-bound tail parameter.
struct RnBoundInputs {
  std::size_t n = 0;
  double epsilon_n = 0.0;
  std::size_t grid_size = 0;
  double a_n = 0.0;
  double beta = 0.0;
};

// r_n = 2(1+grid_size)exp(-2n eps^2) + a_n[1/n + (beta e^(1-beta))^(n+1)].
double fdr_bound_rn(const RnBoundInputs& inputs);

}  // namespace cnfdr
