#include "cnfdr/bh.hpp"

#include <cmath>
#include <stdexcept>

#include "cnfdr/empirical.hpp"

namespace cnfdr {

TestOutcome bh_reject(const PValueSet& pset, double alpha, const LabeledSample& sample) {
  const std::size_t n = sample.n();
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("bh_reject: alpha must be in (0,1)");
  if (pset.p.size() != n) throw std::invalid_argument("bh_reject: p-value/sample size mismatch");
  if (n == 0) throw std::invalid_argument("bh_reject: empty sample");

  const EcdfView ecdf = EcdfView::over(sample.s);
  const double nd = static_cast<double>(n);

  TestOutcome out;
  out.alpha = alpha;
  out.rejected.assign(n, 0);

  // scan candidate cutoffs from the top; i = 0 (reject nothing) always
  // satisfies the condition, so absence of a hit leaves R = 0
  std::size_t hit = 0;
  for (std::size_t i = n; i >= 1; --i) {
    const double rank = static_cast<double>(ecdf.rank_count(sample.s[i - 1]));
    if (pset.p[i - 1] / alpha <= rank / nd) {
      hit = i;
      break;
    }
  }
  if (hit == 0) return out;

  const double cutoff = sample.s[hit - 1];
  for (std::size_t i = 0; i < n; ++i) {
    if (sample.s[i] <= cutoff) {
      out.rejected[i] = 1;
      ++out.R;
      if (sample.is_null[i]) ++out.V;
    }
  }
  return out;
}

RunMetrics run_metrics(const std::vector<TestOutcome>& outcomes,
                       const std::vector<std::size_t>& false_null_counts) {
  const std::size_t reps = outcomes.size();
  if (reps == 0) throw std::invalid_argument("run_metrics: need at least one repetition");
  if (false_null_counts.size() != reps) {
    throw std::invalid_argument("run_metrics: outcome/count length mismatch");
  }

  RunMetrics m;
  double pfdr_sum = 0.0;
  std::size_t pfdr_reps = 0;
  std::vector<double> tpp(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const double R = static_cast<double>(outcomes[r].R);
    const double V = static_cast<double>(outcomes[r].V);
    const double planted = static_cast<double>(false_null_counts[r]);
    m.fdr += V / std::fmax(R, 1.0);
    if (outcomes[r].R > 0) {
      pfdr_sum += V / R;
      ++pfdr_reps;
    }
    tpp[r] = (R - V) / std::fmax(planted, 1.0);
    m.power += tpp[r];
  }
  m.fdr /= static_cast<double>(reps);
  m.power /= static_cast<double>(reps);
  if (pfdr_reps > 0) m.pfdr = pfdr_sum / static_cast<double>(pfdr_reps);

  if (reps >= 2) {
    double ss = 0.0;
    for (double t : tpp) ss += (t - m.power) * (t - m.power);
    m.sd_tpp = std::sqrt(ss / static_cast<double>(reps - 1));
  }
  return m;
}

double fdr_bound_rn(const RnBoundInputs& inputs) {
  if (inputs.n == 0 || inputs.epsilon_n <= 0.0 || inputs.a_n <= 0.0) {
    throw std::invalid_argument("fdr_bound_rn: n, epsilon_n and a_n must be positive");
  }
  if (inputs.beta <= 0.0 || inputs.beta >= 1.0) {
    throw std::invalid_argument("fdr_bound_rn: beta must be in (0,1)");
  }
  const double nd = static_cast<double>(inputs.n);
  const double grid = 2.0 * (1.0 + static_cast<double>(inputs.grid_size)) *
                      std::exp(-2.0 * nd * inputs.epsilon_n * inputs.epsilon_n);
  // (beta e^(1-beta))^(n+1) in log space; the base is < 1 so this underflows
  // gracefully instead of overflowing
  const double tail = std::exp((nd + 1.0) * (std::log(inputs.beta) + 1.0 - inputs.beta));
  return grid + inputs.a_n * (1.0 / nd + tail);
}

}  // namespace cnfdr
