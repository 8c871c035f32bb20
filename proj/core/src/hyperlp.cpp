#include "hypersteiner/hyperlp.hpp"

#include <algorithm>

#include "hypersteiner/error.hpp"
#include "hypersteiner/simplex.hpp"

namespace hypersteiner {

LpMode parse_lp_mode(const std::string& text) {
  if (text == "full") return LpMode::full;
  if (text == "cuts") return LpMode::cuts;
  throw InvalidArgument("unknown LP mode '" + text + "' (expected full or cuts)");
}

std::string to_string(LpMode mode) { return mode == LpMode::full ? "full" : "cuts"; }

std::vector<WeightedSet> FractionalSolution::weighted() const {
  std::vector<WeightedSet> out;
  for (std::size_t i = 0; i < components.size(); ++i) out.push_back({components[i].terminal_mask, values[i]});
  return out;
}

long FractionalSolution::blowup_factor() const {
  return to_int64(Rational(lcm_of_denominators(values)));
}

namespace {

LinearRow packing_row(const std::vector<Component>& columns, TerminalMask s) {
  LinearRow row;
  row.sense = Sense::le;
  row.rhs = mask_size(s) - 1;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    int k = mask_size(s & columns[j].terminal_mask);
    if (k > 1) row.coeffs.emplace_back(static_cast<int>(j), Rational(k - 1));
  }
  return row;
}

std::vector<WeightedSet> support_of(const std::vector<Component>& columns, const std::vector<Rational>& x) {
  std::vector<WeightedSet> out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (sgn(x[j]) > 0) out.push_back({columns[j].terminal_mask, x[j]});
  }
  return out;
}

}  // namespace

FractionalSolution solve_lp_exact(const SteinerInstance& inst, const std::vector<Component>& columns,
                                  const LpOptions& options, LpStats* stats) {
  const int r = inst.num_terminals();
  if (r < 2) throw InvalidArgument("the LP needs at least two terminals");
  if (r > 63) throw InvalidArgument("at most 63 terminals are supported");
  if (options.mode == LpMode::full && r > std::min(options.max_full_terminals, kMaxEnumerationTerminals)) {
    throw InvalidArgument("full enumeration is limited to " +
                          std::to_string(std::min(options.max_full_terminals, kMaxEnumerationTerminals)) +
                          " terminals; use the cuts mode");
  }
  const TerminalMask all = (TerminalMask{1} << r) - 1;
  std::vector<Rational> cost;
  for (const auto& c : columns) {
    if ((c.terminal_mask & ~all) != 0 || c.size() < 2) throw InvalidArgument("malformed LP column");
    cost.push_back(c.cost);
  }
  if (columns.empty()) throw InfeasibleError("LP infeasible");

  SimplexSolver lp(static_cast<int>(columns.size()), cost);
  LinearRow eq;
  eq.sense = Sense::eq;
  eq.rhs = r - 1;
  for (std::size_t j = 0; j < columns.size(); ++j) eq.coeffs.emplace_back(static_cast<int>(j), Rational(columns[j].size() - 1));
  lp.add_row(eq);

  auto add = [&](TerminalMask s) {
    LinearRow row = packing_row(columns, s);
    if (row.coeffs.empty()) return;
    lp.add_row(row);
  };
  if (options.mode == LpMode::full) {
    for (TerminalMask s = 1; s < all; ++s) {
      if (mask_size(s) >= 2) add(s);
    }
  } else {
    // Seed rows: every pair and every R - v.
    for (int a = 0; a < r; ++a) {
      for (int b = a + 1; b < r; ++b) add((TerminalMask{1} << a) | (TerminalMask{1} << b));
    }
    if (r > 3) {
      for (int v = 0; v < r; ++v) add(all & ~(TerminalMask{1} << v));
    }
  }

  LpResult res;
  int rounds = 0;
  while (true) {
    res = lp.solve();
    if (res.status == LpStatus::infeasible) throw InfeasibleError("LP infeasible");
    if (res.status == LpStatus::unbounded) throw InvariantViolation("component LP reported unbounded");
    if (options.mode == LpMode::full) break;
    auto cut = separate_lp(support_of(columns, res.x), all);
    if (!cut) break;
    ++rounds;
    LinearRow row = packing_row(columns, cut->argmin);
    if (row.coeffs.empty()) throw InvariantViolation("separation returned a trivial row");
    lp.add_row(row);
  }

  FractionalSolution out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (sgn(res.x[j]) > 0) {
      out.components.push_back(columns[j]);
      out.values.push_back(res.x[j]);
    }
  }
  std::vector<std::size_t> order(out.components.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.components[a].terminal_mask < out.components[b].terminal_mask;
  });
  FractionalSolution sorted;
  for (std::size_t i : order) {
    sorted.components.push_back(out.components[i]);
    sorted.values.push_back(out.values[i]);
  }
  sorted.objective = res.objective;
  if (stats) {
    stats->pivots = lp.pivots();
    stats->rows = lp.num_rows();
    stats->cut_rounds = rounds;
  }
  return sorted;
}

bool is_lp_feasible(const std::vector<WeightedSet>& x, int num_terminals) {
  if (num_terminals < 1 || num_terminals > 63) throw InvalidArgument("bad terminal count");
  const TerminalMask all = (TerminalMask{1} << num_terminals) - 1;
  Rational total;
  for (const auto& c : x) {
    if (sgn(c.weight) < 0) return false;
    if ((c.terminals & ~all) != 0) return false;
    total += c.weight * (mask_size(c.terminals) - 1);
  }
  if (total != num_terminals - 1) return false;
  if (num_terminals <= kMaxEnumerationTerminals) {
    for (TerminalMask s = 1; s <= all; ++s) {
      if (sgn(lp_slack(x, s)) < 0) return false;
    }
    return true;
  }
  for (int v = 0; v < num_terminals; ++v) {
    Rational cover;
    for (const auto& c : x) {
      if (mask_contains(c.terminals, v)) cover += c.weight;
    }
    if (cover < 1) return false;
  }
  return !separate_lp(x, all).has_value();
}

BlowupGraph build_blowup(const SteinerInstance& inst, const FractionalSolution& x) {
  const long n = x.blowup_factor();
  BlowupGraph g(inst, n);
  for (std::size_t i = 0; i < x.components.size(); ++i) {
    Rational copies = x.values[i] * n;
    if (copies.get_den() != 1) throw InvariantViolation("blowup factor does not clear a denominator");
    add_component_copies(g, inst, x.components[i], to_int64(copies));
  }
  return g;
}

}  // namespace hypersteiner
