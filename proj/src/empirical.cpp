#include "cnfdr/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cnfdr {

EcdfView EcdfView::over(const std::vector<double>& sorted) {
  if (sorted.size() < 2) throw std::invalid_argument("EcdfView: need at least two observations");
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw std::invalid_argument("EcdfView: scores must be sorted ascending");
  }
  return EcdfView{sorted.data(), sorted.size()};
}

std::size_t EcdfView::rank_count(double t) const {
  return static_cast<std::size_t>(std::upper_bound(data, data + n, t) - data);
}

double EcdfView::value(double t) const {
  return static_cast<double>(rank_count(t)) / static_cast<double>(n);
}

double epsilon_n(std::size_t n) {
  if (n < 2) throw std::invalid_argument("epsilon_n: need n >= 2");
  const double nd = static_cast<double>(n);
  return std::sqrt(std::log(nd) / nd);
}

ConstraintGrid build_grid(const EcdfView& ecdf) {
  if (ecdf.n < 2) throw std::invalid_argument("build_grid: need n >= 2");
  const double lo = ecdf.data[0];
  const double hi = ecdf.data[ecdf.n - 1];
  if (!(lo < hi)) throw std::invalid_argument("build_grid: degenerate score range");

  const double ln = std::log(static_cast<double>(ecdf.n));
  const std::size_t m = static_cast<std::size_t>(std::floor(ln * ln));
  if (m < 2) throw std::invalid_argument("build_grid: sample too small for a grid");

  ConstraintGrid grid;
  grid.t.resize(m);
  const double step = (hi - lo) / static_cast<double>(m - 1);
  for (std::size_t g = 0; g < m; ++g) {
    grid.t[g] = lo + step * static_cast<double>(g);
  }
  grid.t.back() = hi;  // exact endpoint regardless of rounding
  return grid;
}

}  // namespace cnfdr
