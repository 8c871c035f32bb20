#pragma once

#include <vector>

#include "hypersteiner/blowup.hpp"
#include "hypersteiner/instance.hpp"

// Brute-force reference implementations. They share only the data types with the
// modules they check and refuse inputs beyond their size limits.
namespace hypersteiner::oracles {

/// Dreyfus-Wagner over terminal subsets. At most 12 terminals.
SteinerTree exact_steiner_tree(const SteinerInstance& inst);

/// Cheapest edge subset that is a Steiner tree, by enumeration. At most 20 edges.
SteinerTree exhaustive_steiner_tree(const SteinerInstance& inst);

/// Metric closure on the terminals, its minimum spanning tree unfolded into shortest
/// paths, then pruned to a tree with terminal leaves.
SteinerTree mst_two_approx(const SteinerInstance& inst);

/// h_{x-removed}(S) evaluated from scratch for a nonempty S over the terminal labels.
long slack(const BlowupGraph& x, const EdgeIdSet& removed, TerminalMask s);

/// Minimum of h_{x-removed}(S) over active S containing q. At most 20 active labels.
long min_slack_over_supersets(const BlowupGraph& x, const EdgeIdSet& removed, TerminalMask q);

/// x with N copies of a component on q, minus the edges B, is feasible.
bool feasible_after_adding(const BlowupGraph& x, TerminalMask q, const EdgeIdSet& removed);

/// All minimal B with (x plus N copies of q) - B feasible. At most 12 edges.
std::vector<EdgeIdSet> enumerate_minimal_removals(const BlowupGraph& x, TerminalMask q);

/// Complements of spanning trees of x with every terminal identified. At most 20 edges.
std::vector<EdgeIdSet> enumerate_splitting_sets(const BlowupGraph& x);

/// Matrix-tree count of spanning trees of x with every terminal identified.
long count_splitting_sets(const BlowupGraph& x);

/// Smallest set of core edges whose removal makes cleanup edge e pendant, found by
/// trying subsets of K in order of size. At most 16 core edges.
EdgeIdSet witness_by_search(const BlowupGraph& x, const EdgeIdSet& k, int e);

/// sum of c(e) H(|W(e)|) with W(e) = {e} on K and witness_by_search elsewhere.
Rational potential_by_search(const BlowupGraph& x, const EdgeIdSet& k);

/// Minimum potential over every splitting set.
Rational min_potential_exhaustive(const BlowupGraph& x);

}  // namespace hypersteiner::oracles
