#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "hypersteiner/blowup.hpp"

namespace hypersteiner {

enum class SplitStrategy { random, dp, quasi };

SplitStrategy parse_split_strategy(const std::string& text);
std::string to_string(SplitStrategy strategy);

/// A splitting set K of `graph` with witness sets and core weights.
struct SplittingState {
  BlowupGraph graph;
  EdgeIdSet k;                         // core edges, ascending ids
  std::map<int, EdgeIdSet> witness;    // every edge id; {e} for core edges
  std::map<int, Rational> weight;      // core edges only
  Rational potential;                  // sum of c(e) H(|W(e)|)
  bool binarized = false;              // graph carries zero-cost auxiliary edges
};

/// Replaces every Steiner vertex of degree d > 3 by a path of d - 2 vertices joined
/// by zero-cost auxiliary edges (original_edge = -1), each of degree 3.
BlowupGraph binarize(const BlowupGraph& x);

/// Witness sets, weights and potential for a splitting set. Throws InvalidArgument
/// when K is not a splitting set of x.
SplittingState compute_witnesses_and_weights(const BlowupGraph& x, const EdgeIdSet& k);

/// Root edge of every piece is its smallest edge id; every Steiner vertex marks one
/// of its edges pointing away from the root edge as cleanup, uniformly at random.
/// Steiner degrees must be at most 3.
SplittingState random_splitting_set(const BlowupGraph& x, std::uint64_t seed);

/// Splitting set of minimum potential, one tree dynamic program per piece.
/// Steiner degrees must be at most 3.
SplittingState optimal_splitting_set(const BlowupGraph& x);

/// Every piece must be a star (or a single edge); its cheapest edge is the only
/// cleanup edge.
SplittingState quasi_bipartite_splitting_set(const BlowupGraph& x);

/// Maps a splitting set of binarize(x) to x: inside every cleanup tree of x that
/// now holds several terminals, each Steiner vertex keeps only its cheapest cleanup
/// path and the remaining edges become core.
EdgeIdSet map_back(const BlowupGraph& x, const BlowupGraph& binarized, const EdgeIdSet& k_binarized);

struct SplitChoice {
  SplittingState state;
  Rational binarized_potential;  // potential before mapping back (equal when unused)
  bool fell_back = false;        // mapping back raised the potential; kept the binarized graph
};

/// Full selection pipeline for one strategy. For random and dp the graph is
/// binarized first when needed and the result mapped back.
SplitChoice choose_splitting_set(const BlowupGraph& x, SplitStrategy strategy, std::uint64_t seed = 1);

}  // namespace hypersteiner
