#pragma once

#include <vector>

#include "hypersteiner/hyperlp.hpp"
#include "hypersteiner/instance.hpp"

namespace hypersteiner {

/// Arc 2e runs edge e from u to v, arc 2e + 1 from v to u.
struct BcrSolution {
  int root = -1;               // a terminal vertex
  std::vector<Rational> x;     // per arc
  Rational objective;
  int cut_rows = 0;
};

/// Replaces every terminal-terminal edge by two edges of half the cost through a
/// fresh Steiner vertex. Requires a quasi-bipartite instance.
SteinerInstance preprocess_quasi(const SteinerInstance& inst);

/// Exact optimum of the bidirected cut relaxation rooted at `root` by cutting
/// planes. Among optimal solutions the one minimizing the edge-index weighted
/// capacity is returned, which acts as a symbolic perturbation making costs
/// within a star distinct.
BcrSolution solve_bcr(const SteinerInstance& inst, int root);

/// Every terminal can send a unit of flow to the root within the capacities.
bool is_bcr_feasible(const SteinerInstance& inst, const BcrSolution& sol);

/// Reverses a unit flow from `new_root` to the current root.
BcrSolution relocate_root(const SteinerInstance& inst, const BcrSolution& sol, int new_root);

/// Transfers the capacity of each star into hypergraphic components, one
/// star at a time. The result is checked for LP feasibility and for the objective
/// of `sol`; with `check` every intermediate capacity vector is re-verified.
/// The instance must already be preprocessed.
FractionalSolution natural_decomposition(const SteinerInstance& inst, const BcrSolution& sol, bool check = false);

}  // namespace hypersteiner
