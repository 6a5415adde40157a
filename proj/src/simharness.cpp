#include "cnfdr/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace cnfdr {

namespace {

// splitmix-style stateless hash so repetition seeds do not depend on
// scheduling order
std::uint64_t rep_seed(std::uint64_t master, std::uint64_t rep) {
  std::uint64_t z = master + (rep + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct RepSlot {
  std::vector<TestOutcome> outcomes;     // one per method
  std::vector<std::vector<double>> sorted_p;
  std::vector<CoeffMatrix> coeffs;       // empty matrix for max/mix
  std::size_t planted = 0;
};

PValueSet method_pvalues(const SimConfig& config, const LabeledSample& sample, Method m) {
  switch (m) {
    case Method::max: return p_max_all(sample, config.model.family);
    case Method::mix: return p_mix_all(sample, config.model.family, config.model.prior);
    case Method::seq:
    case Method::glb: return p_constrained(sample, config.model.family, config.variant, m);
  }
  throw std::logic_error("method_pvalues: unknown method");
}

void run_one_rep(const SimConfig& config, std::size_t r, RepSlot* slot) {
  const LabeledSample sample = sample_mixture(config.model, config.n, rep_seed(config.seed, r));
  for (std::uint8_t label : sample.is_null) slot->planted += !label;

  for (Method m : config.methods) {
    PValueSet pset = method_pvalues(config, sample, m);
    slot->outcomes.push_back(bh_reject(pset, config.alpha, sample));

    // align everything to sorted p; a stable sort keeps the score order on
    // ties, and for the monotone methods this is the identity
    std::vector<std::size_t> perm(config.n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return pset.p[a] < pset.p[b]; });
    std::vector<double> sorted(config.n);
    for (std::size_t i = 0; i < config.n; ++i) sorted[i] = pset.p[perm[i]];
    slot->sorted_p.push_back(std::move(sorted));

    CoeffMatrix aligned;
    if (pset.coeffs) {
      aligned = CoeffMatrix::zeros(config.n, pset.coeffs->cols);
      for (std::size_t i = 0; i < config.n; ++i) {
        for (std::size_t k = 0; k < pset.coeffs->cols; ++k) {
          aligned(i, k) = (*pset.coeffs)(perm[i], k);
        }
      }
    }
    slot->coeffs.push_back(std::move(aligned));
  }
}

}  // namespace

std::vector<double> pvalue_curves(const std::vector<std::vector<double>>& sorted_p_per_rep) {
  if (sorted_p_per_rep.empty()) throw std::invalid_argument("pvalue_curves: no repetitions");
  const std::size_t n = sorted_p_per_rep.front().size();
  if (n == 0) throw std::invalid_argument("pvalue_curves: empty repetition");
  for (const auto& rep : sorted_p_per_rep) {
    if (rep.size() != n) throw std::invalid_argument("pvalue_curves: repetitions disagree on n");
  }
  std::vector<double> curve(n, 0.0);
  for (const auto& rep : sorted_p_per_rep) {
    for (std::size_t i = 0; i < n; ++i) curve[i] += rep[i];
  }
  const double nd = static_cast<double>(n);
  const double reps = static_cast<double>(sorted_p_per_rep.size());
  for (std::size_t i = 0; i < n; ++i) {
    curve[i] = nd * (curve[i] / reps) / static_cast<double>(i + 1);
  }
  return curve;
}

std::vector<std::vector<double>> coefficient_curves(const std::vector<CoeffMatrix>& aligned) {
  if (aligned.empty()) throw std::invalid_argument("coefficient_curves: no repetitions");
  const std::size_t n = aligned.front().rows;
  const std::size_t L = aligned.front().cols;
  if (n == 0 || L == 0) throw std::invalid_argument("coefficient_curves: method carries no weights");
  for (const auto& rep : aligned) {
    if (rep.rows != n || rep.cols != L) {
      throw std::invalid_argument("coefficient_curves: repetitions disagree on shape");
    }
  }
  std::vector<std::vector<double>> curves(L, std::vector<double>(n, 0.0));
  for (const auto& rep : aligned) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < L; ++k) curves[k][i] += rep(i, k);
    }
  }
  for (auto& curve : curves) {
    for (double& v : curve) v /= static_cast<double>(aligned.size());
  }
  return curves;
}

SimReport run_simulation(const SimConfig& config, std::size_t threads) {
  config.model.validate();
  if (config.reps < 1) throw std::invalid_argument("run_simulation: need at least one repetition");
  if (config.alpha <= 0.0 || config.alpha >= 1.0) {
    throw std::invalid_argument("run_simulation: alpha must be in (0,1)");
  }
  if (config.n < 2) throw std::invalid_argument("run_simulation: need n >= 2");

  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = std::min<std::size_t>(threads, config.reps);

  std::vector<RepSlot> slots(config.reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure = nullptr;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= config.reps) return;
      try {
        run_one_rep(config, r, &slots[r]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  SimReport report;
  report.n = config.n;
  report.reps = config.reps;

  std::vector<std::size_t> planted(config.reps);
  for (std::size_t r = 0; r < config.reps; ++r) planted[r] = slots[r].planted;

  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    MethodReport mr;
    mr.method = config.methods[m];

    std::vector<TestOutcome> outcomes;
    std::vector<std::vector<double>> sorted_p;
    outcomes.reserve(config.reps);
    sorted_p.reserve(config.reps);
    for (std::size_t r = 0; r < config.reps; ++r) {
      outcomes.push_back(slots[r].outcomes[m]);
      sorted_p.push_back(slots[r].sorted_p[m]);
    }
    mr.metrics = run_metrics(outcomes, planted);
    mr.scaled_p_curve = pvalue_curves(sorted_p);

    if (mr.method == Method::seq || mr.method == Method::glb) {
      std::vector<CoeffMatrix> coeffs;
      coeffs.reserve(config.reps);
      for (std::size_t r = 0; r < config.reps; ++r) coeffs.push_back(slots[r].coeffs[m]);
      mr.coeff_curves = coefficient_curves(coeffs);
    }
    report.methods.push_back(std::move(mr));
  }
  return report;
}

}  // namespace cnfdr
