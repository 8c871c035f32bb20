#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hypersteiner/rational.hpp"

namespace hypersteiner {

enum class Sense { le, ge, eq };

struct LinearRow {
  std::vector<std::pair<int, Rational>> coeffs;  // (variable, coefficient)
  Sense sense = Sense::le;
  Rational rhs;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational objective;
  std::vector<Rational> x;
};

/// Exact dense-tableau simplex for  min c.x  subject to rows, x >= 0.
///
/// Pricing is Dantzig's rule; after a run of degenerate pivots the solver switches
/// to Bland's rule until the next non-degenerate pivot, so it cannot cycle. Rows
/// added after a successful solve() are appended to the optimal tableau and the
/// next solve() re-optimizes with the dual simplex method.
class SimplexSolver {
 public:
  SimplexSolver(int num_vars, std::vector<Rational> objective);

  /// Returns the row index. Equality rows are only accepted before the first solve.
  int add_row(const LinearRow& row);
  LpResult solve();

  int num_vars() const { return n_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  long pivots() const { return pivots_; }

 private:
  using Row = std::vector<Rational>;

  void build_initial();
  void append_row_to_tableau(const LinearRow& row);
  void pivot(std::size_t r, std::size_t q);
  bool primal(bool phase_one);
  bool dual();
  void set_objective_row(const std::vector<Rational>& cost);
  LpResult extract() const;
  std::size_t add_column();

  int n_;
  std::vector<Rational> c_;
  std::vector<LinearRow> rows_;
  std::size_t built_rows_ = 0;
  bool built_ = false;
  bool infeasible_ = false;

  std::vector<Row> t_;          // tableau rows, one per basic variable
  std::vector<Rational> b_;     // right-hand sides
  std::vector<std::size_t> basis_;
  std::vector<char> artificial_;
  std::vector<char> dead_;      // removed columns
  Row d_;                       // reduced costs
  Rational z_;                  // negated objective value
  std::size_t cols_ = 0;
  long pivots_ = 0;
};

}  // namespace hypersteiner
