#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cnfdr {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpRow {
  std::vector<double> coeff;
  double bound = 0.0;
};

// maximize objective . c
//   subject to  row.coeff . c <= row.bound        for rows
//               row.coeff . c >= row.bound        for lower_rows
//               c_k >= var_lower[k]               (zeros when empty)
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<LpRow> lower_rows;
  std::vector<double> var_lower;
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> c_star;  // populated only when optimal
  double value = 0.0;
  std::size_t pivots = 0;
};

// Deterministic exact solver.  The variable count is tiny (3-5) while rows can
// run to thousands, so the solve walks vertices of the coefficient polytope
// with a compact basis of as many active constraints as there are variables;
// pivoting is largest-violation with least-index ties and a least-index
// fallback when degenerate pivots stall, so cycling is impossible and repeated
// solves return bitwise-identical vertices.
LpSolution lp_maximize(const LinearProgram& lp);

// Brute-force reference: enumerate candidate vertices from all choices of
// active constraints and keep the best feasible one.  Exponential in the
// variable count; intended for cross-checking with <= 3 variables, and
// assumes the feasible region is bounded.
LpSolution lp_brute_oracle(const LinearProgram& lp);

// Engine for solving many related programs cheaply: rows may be appended and
// the objective replaced between solves, and the optimal basis is carried
// over so a mutation that does not cut off the current optimum costs almost
// nothing.  Variables are nonnegative; bounds other than zero must be folded
// into the rows by the caller.
class IncrementalLp {
 public:
  explicit IncrementalLp(std::size_t num_vars);

  std::size_t num_vars() const { return L_; }
  std::size_t num_rows() const { return rows_; }

  void add_row(const std::vector<double>& coeff, double bound);
  void set_objective(const std::vector<double>& objective);

  // Re-optimize from the carried basis.  `optimal` and `infeasible` are
  // definitive.  `unbounded` means the rows fail to cap the objective
  // direction; after a failed cold start this can also mask an empty region,
  // and callers needing the distinction should run a feasibility probe the
  // way lp_maximize does.  Intended uses always include a total-mass row, so
  // they only ever see optimal or infeasible.
  LpSolution solve();

 private:
  void factor_basis();
  std::vector<double> solve_basis(const std::vector<double>& rhs) const;
  std::vector<double> solve_basis_transposed(const std::vector<double>& rhs) const;
  double column_cost(std::size_t j) const;
  void refresh_state();
  double inner_objective() const;
  bool price_and_pivot();  // one pricing pass + pivot; false when optimal
  bool dual_step();        // one feasibility-restoring step after an objective swap
  void note_progress(double improvement);
  void run_primal();
  void run_phase1();

  std::size_t L_;
  std::size_t rows_ = 0;
  // column pool of the equality system: one slack per variable first, then
  // one column per added row, stored flat (L_ entries per column)
  std::vector<double> col_a_;
  std::vector<double> col_cost_;
  std::vector<std::uint8_t> in_basis_;
  std::vector<double> rhs_;  // current objective of the outer program
  std::vector<std::size_t> basis_;
  std::vector<double> lu_;  // row-major LU factors of the basis matrix
  std::vector<std::size_t> lu_perm_;
  std::vector<double> basic_value_;
  std::vector<double> multiplier_;
  std::size_t artificial_base_ = static_cast<std::size_t>(-1);
  bool phase1_ = false;
  bool basis_ready_ = false;
  bool infeasible_ = false;      // sticky: rows only ever get added
  bool unbounded_hint_ = false;  // see solve() docs
  bool rhs_dirty_ = false;
  bool cols_dirty_ = false;
  bool bland_mode_ = false;
  std::size_t stall_ = 0;
  std::size_t pivots_ = 0;
};

}  // namespace cnfdr
