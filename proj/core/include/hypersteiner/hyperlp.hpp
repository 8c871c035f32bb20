#pragma once

#include <vector>

#include "hypersteiner/blowup.hpp"
#include "hypersteiner/components.hpp"
#include "hypersteiner/sepflow.hpp"

namespace hypersteiner {

enum class LpMode { full, cuts };

LpMode parse_lp_mode(const std::string& text);
std::string to_string(LpMode mode);

struct LpOptions {
  LpMode mode = LpMode::full;
  int max_full_terminals = 12;  // full mode refuses larger instances
};

struct LpStats {
  long pivots = 0;
  int rows = 0;
  int cut_rounds = 0;
};

/// Optimal point of the component LP, restricted to its support.
struct FractionalSolution {
  std::vector<Component> components;  // ascending terminal mask
  std::vector<Rational> values;       // positive
  Rational objective;

  std::vector<WeightedSet> weighted() const;
  /// Least common multiple of the value denominators.
  long blowup_factor() const;
};

/// Minimizes sum c_C x_C subject to the packing rows over terminal subsets and the
/// equality row sum x_C (|C| - 1) = |R| - 1. Throws InfeasibleError("LP infeasible")
/// when the columns cannot span R.
FractionalSolution solve_lp_exact(const SteinerInstance& inst, const std::vector<Component>& columns,
                                  const LpOptions& options = {}, LpStats* stats = nullptr);

/// Checks every row of the LP exactly (subset enumeration up to 16 terminals,
/// separation beyond).
bool is_lp_feasible(const std::vector<WeightedSet>& x, int num_terminals);

/// The minimal blowup graph: x_C * N copies of each support component.
BlowupGraph build_blowup(const SteinerInstance& inst, const FractionalSolution& x);

}  // namespace hypersteiner
