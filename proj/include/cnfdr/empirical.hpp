#pragma once

#include <cstddef>
#include <vector>

namespace cnfdr {

// Non-owning view over sorted scores answering empirical-CDF queries.
struct EcdfView {
  const double* data = nullptr;
  std::size_t n = 0;

  // Validates ordering once; the view keeps a pointer into `sorted`.
  static EcdfView over(const std::vector<double>& sorted);

  // #{ s_i <= t }
  std::size_t rank_count(double t) const;
  // empirical CDF at t
  double value(double t) const;
};

// Concentration margin sqrt(ln n / n); requires n >= 2.
double epsilon_n(std::size_t n);

// Equally spaced evaluation points used by the increment constraints.
struct ConstraintGrid {
  std::vector<double> t;

  std::size_t size() const { return t.size(); }
};

// floor((ln n)^2) points spanning [min score, max score], endpoints included.
// Requires n >= 2 and a non-degenerate range.
ConstraintGrid build_grid(const EcdfView& ecdf);

}  // namespace cnfdr
