#pragma once

#include <cstdint>
#include <vector>

#include "hypersteiner/hyperlp.hpp"
#include "hypersteiner/removal_matroid.hpp"
#include "hypersteiner/splitting.hpp"

namespace hypersteiner {

struct IterationRecord {
  TerminalMask q = 0;                // current terminal labels of the contracted component
  std::vector<int> q_vertices;       // instance terminals merged by this step
  Rational q_cost;
  EdgeIdSet removed;                 // B
  EdgeIdSet cleaned;                 // F
  Rational removed_weight;           // w(B)
  Rational potential_before;
  Rational potential_after;
};

/// State between two iterations of the contraction loop.
struct AlgorithmState {
  const SteinerInstance* instance = nullptr;
  SplittingState split;              // current graph, K, witnesses and weights
  std::vector<int> tree_edges;       // instance edges of contracted components, ascending
  std::vector<IterationRecord> log;
};

struct Selection {
  int piece = -1;                    // index into split.graph.pieces()
  TerminalMask q = 0;
  EdgeIdSet basis;                   // maximum-weight basis of the removal matroid restricted to K
  Rational weight;                   // w(B)
};

/// The component maximizing w(B)/N - cost(Q); one greedy basis per terminal set.
/// Throws InvariantViolation when no component pays for itself.
Selection select_component(const AlgorithmState& state, RankOracle oracle = RankOracle::gammoid);

/// Removes B and the cleanup edges F whose witnesses lie in B, contracts Q and
/// restricts K. With `check` every invariant of the step is re-verified.
AlgorithmState contract_step(const AlgorithmState& state, const Selection& sel, bool check = false);

/// MST of the given instance edges followed by removal of Steiner leaves.
SteinerTree prune_to_steiner_tree(const SteinerInstance& inst, const std::vector<int>& edge_ids);

struct Certificate {
  Rational lp_value;
  long n = 1;
  int support = 0;
  SplitStrategy strategy = SplitStrategy::dp;
  Rational potential;                // initial potential
  Rational binarized_potential;
  bool fell_back = false;
  Rational contracted_cost;          // sum of the contracted component costs
  Rational tree_cost;
  std::vector<IterationRecord> iterations;

  bool tree_within_potential() const { return tree_cost * n <= potential; }
  bool potential_drops_cover_weights() const;
};

struct RunOptions {
  int k = 0;                         // 0 means |R|
  SplitStrategy strategy = SplitStrategy::dp;
  std::uint64_t seed = 1;
  LpOptions lp{LpMode::cuts, 12};
  RankOracle oracle = RankOracle::gammoid;
  bool check = false;
};

struct RunResult {
  SteinerTree tree;
  FractionalSolution lp;
  Certificate certificate;
};

/// Contraction loop from a feasible blowup graph and a splitting set.
RunResult run_from_state(const SteinerInstance& inst, const FractionalSolution& lp, const SplitChoice& choice,
                         const RunOptions& options);

/// LP, blowup, splitting set and contraction loop.
RunResult run(const SteinerInstance& inst, const RunOptions& options = {});

}  // namespace hypersteiner
