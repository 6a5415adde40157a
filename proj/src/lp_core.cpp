#include "cnfdr/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

// The engine solves
//     maximize  obj . x   s.t.  row_r . x <= bound_r,  x >= 0
// through the equivalent equality system over multipliers y (one per row)
// and slacks s (one per variable):
//     minimize  bound . y   s.t.  sum_r y_r row_r - s = obj,   y, s >= 0.
// The system has as many equations as variables of the outer program, so the
// basis stays a tiny square matrix no matter how many rows pile up.  At
// optimality the simplex multipliers of the equations are exactly the outer
// optimal vertex: a basic row multiplier pins its row to equality, a basic
// slack pins its variable to zero, which is the active-set description of a
// vertex walk over the coefficient polytope.

namespace cnfdr {

namespace {

constexpr double kCostTol = 1e-9;   // reduced-cost / row-residual tolerance
constexpr double kFeasTol = 1e-9;   // basic-value feasibility tolerance
constexpr double kPivotTol = 1e-11; // smallest usable pivot element
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr std::size_t kStallLimit = 200;  // degenerate pivots before least-index mode

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

IncrementalLp::IncrementalLp(std::size_t num_vars) : L_(num_vars) {
  if (num_vars == 0) throw std::invalid_argument("IncrementalLp: need at least one variable");
  // slack columns first: column k is -e_k with zero cost
  col_a_.assign(L_ * L_, 0.0);
  for (std::size_t k = 0; k < L_; ++k) col_a_[k * L_ + k] = -1.0;
  col_cost_.assign(L_, 0.0);
  in_basis_.assign(L_, 0);
  rhs_.assign(L_, 0.0);
  lu_.assign(L_ * L_, 0.0);
  lu_perm_.assign(L_, 0);
  basic_value_.assign(L_, 0.0);
  multiplier_.assign(L_, 0.0);
}

void IncrementalLp::add_row(const std::vector<double>& coeff, double bound) {
  if (coeff.size() != L_) throw std::invalid_argument("IncrementalLp: row width mismatch");
  col_a_.insert(col_a_.end(), coeff.begin(), coeff.end());
  col_cost_.push_back(bound);
  in_basis_.push_back(0);
  ++rows_;
  if (basis_ready_ && !infeasible_) {
    // does the new row cut off the carried optimum?
    const double r = bound - dot(multiplier_.data(), coeff.data(), L_);
    if (r < -kCostTol) cols_dirty_ = true;
  }
}

void IncrementalLp::set_objective(const std::vector<double>& objective) {
  if (objective.size() != L_) throw std::invalid_argument("IncrementalLp: objective width mismatch");
  if (std::equal(objective.begin(), objective.end(), rhs_.begin(), rhs_.end())) return;
  // restore optimality for the old objective first, so the feasibility-
  // restoring pass after the swap starts from a dual-feasible basis
  if (basis_ready_ && cols_dirty_ && !infeasible_) {
    run_primal();
    cols_dirty_ = false;
  }
  std::copy(objective.begin(), objective.end(), rhs_.begin());
  rhs_dirty_ = true;
}

void IncrementalLp::factor_basis() {
  // gather basis columns, then LU with partial pivoting (dimension <= 5 or so)
  for (std::size_t t = 0; t < L_; ++t) {
    const double* col = &col_a_[basis_[t] * L_];
    for (std::size_t i = 0; i < L_; ++i) lu_[i * L_ + t] = col[i];
  }
  for (std::size_t k = 0; k < L_; ++k) {
    std::size_t piv = k;
    double best = std::fabs(lu_[k * L_ + k]);
    for (std::size_t r = k + 1; r < L_; ++r) {
      const double v = std::fabs(lu_[r * L_ + k]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < kPivotTol) throw std::logic_error("IncrementalLp: singular basis");
    lu_perm_[k] = piv;
    if (piv != k) {
      for (std::size_t j = 0; j < L_; ++j) std::swap(lu_[k * L_ + j], lu_[piv * L_ + j]);
    }
    const double d = lu_[k * L_ + k];
    for (std::size_t r = k + 1; r < L_; ++r) {
      const double f = lu_[r * L_ + k] / d;
      lu_[r * L_ + k] = f;
      for (std::size_t j = k + 1; j < L_; ++j) lu_[r * L_ + j] -= f * lu_[k * L_ + j];
    }
  }
}

std::vector<double> IncrementalLp::solve_basis(const std::vector<double>& rhs) const {
  std::vector<double> z = rhs;
  for (std::size_t k = 0; k < L_; ++k) {
    if (lu_perm_[k] != k) std::swap(z[k], z[lu_perm_[k]]);
  }
  for (std::size_t r = 1; r < L_; ++r) {
    for (std::size_t j = 0; j < r; ++j) z[r] -= lu_[r * L_ + j] * z[j];
  }
  for (std::size_t r = L_; r-- > 0;) {
    for (std::size_t j = r + 1; j < L_; ++j) z[r] -= lu_[r * L_ + j] * z[j];
    z[r] /= lu_[r * L_ + r];
  }
  return z;
}

std::vector<double> IncrementalLp::solve_basis_transposed(const std::vector<double>& rhs) const {
  // with P M = L U the transpose system M^T p = c factors as U^T L^T P p = c
  std::vector<double> z = rhs;
  for (std::size_t r = 0; r < L_; ++r) {  // U^T is lower triangular
    for (std::size_t j = 0; j < r; ++j) z[r] -= lu_[j * L_ + r] * z[j];
    z[r] /= lu_[r * L_ + r];
  }
  for (std::size_t r = L_; r-- > 0;) {  // L^T is unit upper triangular
    for (std::size_t j = r + 1; j < L_; ++j) z[r] -= lu_[j * L_ + r] * z[j];
  }
  for (std::size_t k = L_; k-- > 0;) {  // undo the row permutation
    if (lu_perm_[k] != k) std::swap(z[k], z[lu_perm_[k]]);
  }
  return z;
}

double IncrementalLp::column_cost(std::size_t j) const {
  if (phase1_) return j >= artificial_base_ ? 1.0 : 0.0;
  return col_cost_[j];
}

void IncrementalLp::refresh_state() {
  factor_basis();
  basic_value_ = solve_basis(rhs_);
  std::vector<double> cb(L_);
  for (std::size_t t = 0; t < L_; ++t) cb[t] = column_cost(basis_[t]);
  multiplier_ = solve_basis_transposed(cb);
}

double IncrementalLp::inner_objective() const {
  double s = 0.0;
  for (std::size_t t = 0; t < L_; ++t) s += column_cost(basis_[t]) * basic_value_[t];
  return s;
}

// One pricing pass plus pivot.  Returns false when no column prices out
// (current basis optimal).  Sets infeasible_ when an improving column has no
// blocking basic variable, which certifies the outer program empty.
bool IncrementalLp::price_and_pivot() {
  const std::size_t ncols = col_cost_.size();
  std::size_t enter = kNone;
  if (!bland_mode_) {
    double best = -kCostTol;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (in_basis_[j]) continue;
      if (!phase1_ && j >= artificial_base_) continue;
      const double r = column_cost(j) - dot(multiplier_.data(), &col_a_[j * L_], L_);
      if (r < best) {
        best = r;
        enter = j;
      }
    }
  } else {
    for (std::size_t j = 0; j < ncols; ++j) {
      if (in_basis_[j]) continue;
      if (!phase1_ && j >= artificial_base_) continue;
      const double r = column_cost(j) - dot(multiplier_.data(), &col_a_[j * L_], L_);
      if (r < -kCostTol) {
        enter = j;
        break;
      }
    }
  }
  if (enter == kNone) return false;

  std::vector<double> a_in(col_a_.begin() + enter * L_, col_a_.begin() + (enter + 1) * L_);
  const std::vector<double> d = solve_basis(a_in);
  std::size_t leave = kNone;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < L_; ++t) {
    if (d[t] > kPivotTol) {
      const double ratio = std::max(basic_value_[t], 0.0) / d[t];
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 && (leave == kNone || basis_[t] < basis_[leave]))) {
        best_ratio = ratio;
        leave = t;
      }
    }
  }
  if (leave == kNone) {
    infeasible_ = true;
    return false;
  }

  const double before = inner_objective();
  in_basis_[basis_[leave]] = 0;
  in_basis_[enter] = 1;
  basis_[leave] = enter;
  ++pivots_;
  refresh_state();
  note_progress(before - inner_objective());
  return true;
}

// One step restoring basic-value feasibility after an objective swap, keeping
// every reduced cost nonnegative.  Returns false when feasibility is restored.
// Sets unbounded_hint_ when no entering column exists: the rows cannot pin the
// new objective, i.e. the outer program is unbounded over the current rows.
bool IncrementalLp::dual_step() {
  std::size_t leave = kNone;
  if (!bland_mode_) {
    double worst = -kFeasTol;
    for (std::size_t t = 0; t < L_; ++t) {
      if (basic_value_[t] < worst) {
        worst = basic_value_[t];
        leave = t;
      }
    }
  } else {
    for (std::size_t t = 0; t < L_; ++t) {
      if (basic_value_[t] < -kFeasTol && (leave == kNone || basis_[t] < basis_[leave])) leave = t;
    }
  }
  if (leave == kNone) return false;

  // row `leave` of the basis inverse
  std::vector<double> unit(L_, 0.0);
  unit[leave] = 1.0;
  const std::vector<double> q = solve_basis_transposed(unit);

  const std::size_t ncols = col_cost_.size();
  std::size_t enter = kNone;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ncols; ++j) {
    if (in_basis_[j]) continue;
    if (j >= artificial_base_) continue;
    const double w = dot(q.data(), &col_a_[j * L_], L_);
    if (w < -kPivotTol) {
      const double r = column_cost(j) - dot(multiplier_.data(), &col_a_[j * L_], L_);
      const double ratio = std::max(r, 0.0) / (-w);
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 && (enter == kNone || j < enter))) {
        best_ratio = ratio;
        enter = j;
      }
    }
  }
  if (enter == kNone) {
    unbounded_hint_ = true;
    return false;
  }

  const double before = inner_objective();
  in_basis_[basis_[leave]] = 0;
  in_basis_[enter] = 1;
  basis_[leave] = enter;
  ++pivots_;
  refresh_state();
  note_progress(inner_objective() - before);  // dual steps push the inner value up
  return true;
}

void IncrementalLp::note_progress(double improvement) {
  if (improvement > 1e-12 * (1.0 + std::fabs(inner_objective()))) {
    stall_ = 0;
    bland_mode_ = false;
  } else if (++stall_ >= kStallLimit) {
    bland_mode_ = true;  // least-index rule: slower but provably cycle-free
  }
}

void IncrementalLp::run_primal() {
  while (price_and_pivot()) {
  }
}

// Cold start: park an artificial identity column on every equation, price the
// artificial mass down to zero, then swap in the true costs.
void IncrementalLp::run_phase1() {
  artificial_base_ = col_cost_.size();
  for (std::size_t k = 0; k < L_; ++k) {
    std::vector<double> a(L_, 0.0);
    a[k] = rhs_[k] < 0.0 ? -1.0 : 1.0;
    col_a_.insert(col_a_.end(), a.begin(), a.end());
    col_cost_.push_back(0.0);  // unused; phase-1 pricing overrides the cost
    in_basis_.push_back(1);
  }
  basis_.resize(L_);
  for (std::size_t k = 0; k < L_; ++k) basis_[k] = artificial_base_ + k;

  phase1_ = true;
  bland_mode_ = false;
  stall_ = 0;
  refresh_state();
  run_primal();

  const double residual = inner_objective();
  bool ok = residual <= 1e-7 && !infeasible_;
  infeasible_ = false;  // phase-1 "infeasible" only says the artificials stick

  if (ok) {
    // force leftover zero-level artificials out of the basis
    for (std::size_t t = 0; t < L_ && ok; ++t) {
      if (basis_[t] < artificial_base_) continue;
      std::vector<double> unit(L_, 0.0);
      unit[t] = 1.0;
      const std::vector<double> q = solve_basis_transposed(unit);
      std::size_t pick = kNone;
      for (std::size_t j = 0; j < artificial_base_ && pick == kNone; ++j) {
        if (!in_basis_[j] && std::fabs(dot(q.data(), &col_a_[j * L_], L_)) > kPivotTol) pick = j;
      }
      if (pick == kNone) {
        ok = false;  // cannot happen while the slack columns span, but stay safe
        break;
      }
      in_basis_[basis_[t]] = 0;
      in_basis_[pick] = 1;
      basis_[t] = pick;
      ++pivots_;
      refresh_state();
    }
  }

  // drop the artificial columns; they are all nonbasic now when ok
  col_a_.resize(artificial_base_ * L_);
  col_cost_.resize(artificial_base_);
  in_basis_.resize(artificial_base_);
  phase1_ = false;
  artificial_base_ = kNone;

  if (!ok) {
    unbounded_hint_ = true;
    basis_ready_ = false;
    return;
  }
  basis_ready_ = true;
  refresh_state();
}

LpSolution IncrementalLp::solve() {
  LpSolution out;
  if (infeasible_) {  // rows only ever get added, so emptiness is permanent
    out.status = LpStatus::infeasible;
    out.pivots = pivots_;
    return out;
  }
  unbounded_hint_ = false;
  artificial_base_ = kNone;

  if (!basis_ready_) {
    bland_mode_ = false;
    stall_ = 0;
    run_phase1();
    if (basis_ready_ && !infeasible_) {
      run_primal();
    }
    rhs_dirty_ = cols_dirty_ = false;
  } else {
    if (rhs_dirty_) {
      basic_value_ = solve_basis(rhs_);
      while (dual_step()) {
      }
      rhs_dirty_ = false;
    }
    if (!infeasible_ && !unbounded_hint_ && cols_dirty_) {
      run_primal();
      cols_dirty_ = false;
    }
  }

  out.pivots = pivots_;
  if (infeasible_) {
    basis_ready_ = false;  // a stale basis is useless once emptiness is known
    out.status = LpStatus::infeasible;
    return out;
  }
  if (unbounded_hint_) {
    basis_ready_ = false;
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.c_star = multiplier_;
  out.value = dot(rhs_.data(), multiplier_.data(), L_);
  return out;
}

namespace {

struct FoldedProgram {
  std::size_t L = 0;
  std::vector<std::vector<double>> coeff;  // all rows as <= constraints on z = x - lower
  std::vector<double> bound;
  std::vector<double> lower;  // original variable lower bounds
  std::vector<double> objective;
};

FoldedProgram fold(const LinearProgram& lp) {
  FoldedProgram f;
  f.L = lp.objective.size();
  if (f.L == 0) throw std::invalid_argument("lp_maximize: empty objective");
  if (!lp.var_lower.empty() && lp.var_lower.size() != f.L) {
    throw std::invalid_argument("lp_maximize: var_lower size mismatch");
  }
  f.lower = lp.var_lower.empty() ? std::vector<double>(f.L, 0.0) : lp.var_lower;
  f.objective = lp.objective;

  auto push = [&](const LpRow& row, double sign) {
    if (row.coeff.size() != f.L) throw std::invalid_argument("lp_maximize: row width mismatch");
    std::vector<double> c(f.L);
    for (std::size_t k = 0; k < f.L; ++k) c[k] = sign * row.coeff[k];
    // shift by the variable lower bounds: a.(z + l) <= b  =>  a.z <= b - a.l
    double b = sign * row.bound;
    for (std::size_t k = 0; k < f.L; ++k) b -= c[k] * f.lower[k];
    f.coeff.push_back(std::move(c));
    f.bound.push_back(b);
  };
  for (const auto& r : lp.rows) push(r, 1.0);
  for (const auto& r : lp.lower_rows) push(r, -1.0);
  return f;
}

// least-slack feasibility probe: max -s  s.t.  a_r.z - s <= b_r, z,s >= 0
bool folded_is_feasible(const FoldedProgram& f, std::size_t* pivots) {
  IncrementalLp probe(f.L + 1);
  for (std::size_t r = 0; r < f.coeff.size(); ++r) {
    std::vector<double> c(f.L + 1);
    std::copy(f.coeff[r].begin(), f.coeff[r].end(), c.begin());
    c[f.L] = -1.0;
    probe.add_row(c, f.bound[r]);
  }
  std::vector<double> obj(f.L + 1, 0.0);
  obj[f.L] = -1.0;
  probe.set_objective(obj);
  const LpSolution sol = probe.solve();
  *pivots += sol.pivots;
  // the probe is feasible (huge s) and capped at 0, so it is always optimal
  return sol.status == LpStatus::optimal && sol.value >= -kFeasTol;
}

}  // namespace

LpSolution lp_maximize(const LinearProgram& lp) {
  const FoldedProgram f = fold(lp);
  IncrementalLp engine(f.L);
  for (std::size_t r = 0; r < f.coeff.size(); ++r) engine.add_row(f.coeff[r], f.bound[r]);
  engine.set_objective(f.objective);
  LpSolution sol = engine.solve();

  if (sol.status == LpStatus::unbounded) {
    // the engine cannot tell an uncapped objective from an empty region when
    // the cold start fails, so settle it with the feasibility probe
    if (!folded_is_feasible(f, &sol.pivots)) sol.status = LpStatus::infeasible;
    return sol;
  }
  if (sol.status == LpStatus::optimal) {
    double shift = 0.0;
    for (std::size_t k = 0; k < f.L; ++k) {
      sol.c_star[k] += f.lower[k];
      shift += f.objective[k] * f.lower[k];
    }
    sol.value += shift;
  }
  return sol;
}

LpSolution lp_brute_oracle(const LinearProgram& lp) {
  const FoldedProgram f = fold(lp);
  const std::size_t L = f.L;
  if (L > 3) throw std::invalid_argument("lp_brute_oracle: supports at most 3 variables");

  // hyperplane list: every row at equality, then every variable at its bound
  const std::size_t m = f.coeff.size();
  const std::size_t total = m + L;
  auto plane_coeff = [&](std::size_t i, std::size_t k) {
    return i < m ? f.coeff[i][k] : (i - m == k ? 1.0 : 0.0);
  };
  auto plane_bound = [&](std::size_t i) { return i < m ? f.bound[i] : 0.0; };

  LpSolution best;
  best.status = LpStatus::infeasible;

  std::vector<std::size_t> pick(L);
  std::vector<double> z(L), mat(L * L), rhsv(L);

  // lexicographic enumeration of all active-set candidates of size L
  auto consider = [&]() {
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t k = 0; k < L; ++k) mat[i * L + k] = plane_coeff(pick[i], k);
      rhsv[i] = plane_bound(pick[i]);
    }
    // Gaussian elimination with partial pivoting; bail out on singularity
    for (std::size_t k = 0; k < L; ++k) {
      std::size_t piv = k;
      for (std::size_t r = k + 1; r < L; ++r) {
        if (std::fabs(mat[r * L + k]) > std::fabs(mat[piv * L + k])) piv = r;
      }
      if (std::fabs(mat[piv * L + k]) < 1e-10) return;
      if (piv != k) {
        for (std::size_t j = 0; j < L; ++j) std::swap(mat[k * L + j], mat[piv * L + j]);
        std::swap(rhsv[k], rhsv[piv]);
      }
      for (std::size_t r = k + 1; r < L; ++r) {
        const double fct = mat[r * L + k] / mat[k * L + k];
        for (std::size_t j = k; j < L; ++j) mat[r * L + j] -= fct * mat[k * L + j];
        rhsv[r] -= fct * rhsv[k];
      }
    }
    for (std::size_t r = L; r-- > 0;) {
      double v = rhsv[r];
      for (std::size_t j = r + 1; j < L; ++j) v -= mat[r * L + j] * z[j];
      z[r] = v / mat[r * L + r];
    }
    for (std::size_t k = 0; k < L; ++k) {
      if (z[k] < -1e-8) return;
    }
    for (std::size_t r = 0; r < m; ++r) {
      double s = 0.0;
      for (std::size_t k = 0; k < L; ++k) s += f.coeff[r][k] * z[k];
      if (s > f.bound[r] + 1e-8) return;
    }
    double val = 0.0;
    for (std::size_t k = 0; k < L; ++k) val += f.objective[k] * z[k];
    if (best.status != LpStatus::optimal || val > best.value + 1e-12) {
      best.status = LpStatus::optimal;
      best.value = val;
      best.c_star = z;
    }
  };

  if (L == 1) {
    for (pick[0] = 0; pick[0] < total; ++pick[0]) consider();
  } else if (L == 2) {
    for (pick[0] = 0; pick[0] < total; ++pick[0]) {
      for (pick[1] = pick[0] + 1; pick[1] < total; ++pick[1]) consider();
    }
  } else {
    for (pick[0] = 0; pick[0] < total; ++pick[0]) {
      for (pick[1] = pick[0] + 1; pick[1] < total; ++pick[1]) {
        for (pick[2] = pick[1] + 1; pick[2] < total; ++pick[2]) consider();
      }
    }
  }

  if (best.status == LpStatus::optimal) {
    double shift = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
      best.c_star[k] += f.lower[k];
      shift += f.objective[k] * f.lower[k];
    }
    best.value += shift;
  }
  return best;
}

}  // namespace cnfdr
