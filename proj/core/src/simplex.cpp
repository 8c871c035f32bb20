#include "hypersteiner/simplex.hpp"

#include <algorithm>

#include "hypersteiner/error.hpp"

namespace hypersteiner {

namespace {

constexpr int kDegenerateRunBeforeBland = 50;

}  // namespace

SimplexSolver::SimplexSolver(int num_vars, std::vector<Rational> objective)
    : n_(num_vars), c_(std::move(objective)) {
  if (num_vars < 0) throw InvalidArgument("negative variable count");
  if (static_cast<int>(c_.size()) != num_vars) throw InvalidArgument("objective length mismatch");
}

int SimplexSolver::add_row(const LinearRow& row) {
  for (const auto& [j, a] : row.coeffs) {
    if (j < 0 || j >= n_) throw InvalidArgument("row references unknown variable");
  }
  if (built_ && row.sense == Sense::eq) {
    throw InvalidArgument("equality rows cannot be added after solving");
  }
  rows_.push_back(row);
  return static_cast<int>(rows_.size()) - 1;
}

std::size_t SimplexSolver::add_column() {
  for (auto& r : t_) r.emplace_back(0);
  d_.emplace_back(0);
  artificial_.push_back(0);
  dead_.push_back(0);
  return cols_++;
}

void SimplexSolver::build_initial() {
  const bool has_eq = std::any_of(rows_.begin(), rows_.end(),
                                  [](const LinearRow& r) { return r.sense == Sense::eq; });
  const bool dual_start =
      !has_eq && std::all_of(c_.begin(), c_.end(), [](const Rational& v) { return sgn(v) >= 0; });

  // Normalize every row to  a.x (+ slack) = b  and decide which columns it needs.
  struct Plan {
    std::vector<std::pair<int, Rational>> coeffs;
    Rational rhs;
    int slack_sign = 0;  // 0: no slack
    bool needs_artificial = false;
  };
  std::vector<Plan> plans;
  std::size_t extra = 0;
  for (const auto& row : rows_) {
    Plan p{row.coeffs, row.rhs, 0, false};
    if (row.sense == Sense::ge) {
      for (auto& [j, a] : p.coeffs) a = -a;
      p.rhs = -p.rhs;
    }
    if (row.sense != Sense::eq) {
      p.slack_sign = 1;
      ++extra;
      if (sgn(p.rhs) < 0 && !dual_start) {
        for (auto& [j, a] : p.coeffs) a = -a;
        p.rhs = -p.rhs;
        p.slack_sign = -1;
        p.needs_artificial = true;
        ++extra;
      }
    } else {
      if (sgn(p.rhs) < 0) {
        for (auto& [j, a] : p.coeffs) a = -a;
        p.rhs = -p.rhs;
      }
      p.needs_artificial = true;
      ++extra;
    }
    plans.push_back(std::move(p));
  }

  cols_ = static_cast<std::size_t>(n_) + extra;
  artificial_.assign(cols_, 0);
  dead_.assign(cols_, 0);
  d_.assign(cols_, Rational(0));
  t_.clear();
  b_.clear();
  basis_.clear();
  std::size_t next = static_cast<std::size_t>(n_);
  bool any_artificial = false;
  for (auto& p : plans) {
    Row r(cols_, Rational(0));
    for (const auto& [j, a] : p.coeffs) r[static_cast<std::size_t>(j)] += a;
    std::size_t basic = 0;
    if (p.slack_sign != 0) {
      r[next] = p.slack_sign;
      basic = next++;
    }
    if (p.needs_artificial) {
      r[next] = 1;
      artificial_[next] = 1;
      basic = next++;
      any_artificial = true;
    }
    t_.push_back(std::move(r));
    b_.push_back(p.rhs);
    basis_.push_back(basic);
  }
  built_ = true;
  built_rows_ = rows_.size();

  if (any_artificial) {
    std::fill(d_.begin(), d_.end(), Rational(0));
    z_ = 0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (!artificial_[basis_[i]]) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!artificial_[j]) d_[j] -= t_[i][j];
      }
      z_ -= b_[i];
    }
    if (!primal(true)) throw InvariantViolation("phase one reported an unbounded problem");
    if (sgn(z_) != 0) {
      infeasible_ = true;
      return;
    }
    std::vector<std::size_t> redundant;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (!artificial_[basis_[i]]) continue;
      std::size_t q = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!artificial_[j] && !dead_[j] && sgn(t_[i][j]) != 0) {
          q = j;
          break;
        }
      }
      if (q == cols_) {
        redundant.push_back(i);
      } else {
        pivot(i, q);
      }
    }
    for (auto it = redundant.rbegin(); it != redundant.rend(); ++it) {
      t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(*it));
      b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(*it));
      basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(*it));
    }
    for (std::size_t j = 0; j < cols_; ++j) {
      if (artificial_[j]) dead_[j] = 1;
    }
  }

  set_objective_row(c_);
  if (dual_start) {
    if (!dual()) infeasible_ = true;
  }
}

void SimplexSolver::set_objective_row(const std::vector<Rational>& cost) {
  std::fill(d_.begin(), d_.end(), Rational(0));
  for (std::size_t j = 0; j < cost.size(); ++j) d_[j] = cost[j];
  z_ = 0;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    std::size_t bj = basis_[i];
    if (bj >= cost.size() || sgn(cost[bj]) == 0) continue;
    const Rational& cb = cost[bj];
    for (std::size_t j = 0; j < cols_; ++j) {
      if (sgn(t_[i][j]) != 0) d_[j] -= cb * t_[i][j];
    }
    z_ -= cb * b_[i];
  }
  for (std::size_t j = 0; j < cols_; ++j) {
    if (dead_[j]) d_[j] = 0;
  }
}

void SimplexSolver::append_row_to_tableau(const LinearRow& row) {
  const std::size_t s = add_column();
  Row r(cols_, Rational(0));
  const int sign = row.sense == Sense::ge ? -1 : 1;
  for (const auto& [j, a] : row.coeffs) r[static_cast<std::size_t>(j)] += sign * a;
  r[s] = 1;
  Rational rhs = sign * row.rhs;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    const std::size_t bj = basis_[i];
    if (sgn(r[bj]) == 0) continue;
    Rational f = r[bj];
    const Row& ti = t_[i];
    for (std::size_t j = 0; j < cols_; ++j) {
      if (sgn(ti[j]) != 0) r[j] -= f * ti[j];
    }
    rhs -= f * b_[i];
  }
  t_.push_back(std::move(r));
  b_.push_back(rhs);
  basis_.push_back(s);
}

void SimplexSolver::pivot(std::size_t r, std::size_t q) {
  Row& pr = t_[r];
  const Rational inv = 1 / pr[q];
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < cols_; ++j) {
    if (sgn(pr[j]) != 0) {
      pr[j] *= inv;
      nz.push_back(j);
    }
  }
  b_[r] *= inv;
  Rational f;
  Rational tmp;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (i == r || sgn(t_[i][q]) == 0) continue;
    f = t_[i][q];
    Row& ti = t_[i];
    for (std::size_t j : nz) {
      tmp = f * pr[j];
      ti[j] -= tmp;
    }
    tmp = f * b_[r];
    b_[i] -= tmp;
  }
  if (sgn(d_[q]) != 0) {
    f = d_[q];
    for (std::size_t j : nz) {
      tmp = f * pr[j];
      d_[j] -= tmp;
    }
    tmp = f * b_[r];
    z_ -= tmp;
  }
  basis_[r] = q;
  ++pivots_;
}

bool SimplexSolver::primal(bool phase_one) {
  int degenerate_run = 0;
  bool bland = false;
  for (;;) {
    std::size_t q = cols_;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (dead_[j] || sgn(d_[j]) >= 0) continue;
      if (!phase_one && artificial_[j]) continue;
      if (q == cols_ || (!bland && d_[j] < d_[q])) q = j;
      if (bland) break;
    }
    if (q == cols_) return true;
    std::size_t r = t_.size();
    Rational best;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (sgn(t_[i][q]) <= 0) continue;
      Rational ratio = b_[i] / t_[i][q];
      if (r == t_.size() || ratio < best || (ratio == best && basis_[i] < basis_[r])) {
        r = i;
        best = ratio;
      }
    }
    if (r == t_.size()) return false;
    const bool degenerate = sgn(b_[r]) == 0;
    pivot(r, q);
    if (degenerate) {
      if (++degenerate_run >= kDegenerateRunBeforeBland) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

bool SimplexSolver::dual() {
  int degenerate_run = 0;
  bool bland = false;
  for (;;) {
    std::size_t r = t_.size();
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (sgn(b_[i]) >= 0) continue;
      if (r == t_.size()) {
        r = i;
      } else if (bland ? basis_[i] < basis_[r]
                       : (b_[i] < b_[r] || (b_[i] == b_[r] && basis_[i] < basis_[r]))) {
        r = i;
      }
    }
    if (r == t_.size()) return true;
    std::size_t q = cols_;
    Rational best;
    const Row& tr = t_[r];
    for (std::size_t j = 0; j < cols_; ++j) {
      if (dead_[j] || sgn(tr[j]) >= 0) continue;
      Rational ratio = d_[j] / -tr[j];
      if (q == cols_ || ratio < best) {
        q = j;
        best = ratio;
      }
    }
    if (q == cols_) return false;
    const bool degenerate = sgn(d_[q]) == 0;
    pivot(r, q);
    if (degenerate) {
      if (++degenerate_run >= kDegenerateRunBeforeBland) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

LpResult SimplexSolver::extract() const {
  LpResult res;
  res.status = LpStatus::optimal;
  res.x.assign(static_cast<std::size_t>(n_), Rational(0));
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (basis_[i] < static_cast<std::size_t>(n_)) res.x[basis_[i]] = b_[i];
  }
  res.objective = 0;
  for (int j = 0; j < n_; ++j) res.objective += c_[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
  if (res.objective != -z_) throw InvariantViolation("simplex objective bookkeeping drifted");
  return res;
}

LpResult SimplexSolver::solve() {
  if (!built_) {
    build_initial();
    if (infeasible_) return LpResult{LpStatus::infeasible, 0, {}};
    if (!primal(false)) return LpResult{LpStatus::unbounded, 0, {}};
    return extract();
  }
  if (infeasible_) return LpResult{LpStatus::infeasible, 0, {}};
  for (; built_rows_ < rows_.size(); ++built_rows_) append_row_to_tableau(rows_[built_rows_]);
  if (!dual()) {
    infeasible_ = true;
    return LpResult{LpStatus::infeasible, 0, {}};
  }
  if (!primal(false)) return LpResult{LpStatus::unbounded, 0, {}};
  return extract();
}

}  // namespace hypersteiner
