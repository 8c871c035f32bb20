#pragma once

#include <string>
#include <vector>

#include "hypersteiner/blowup.hpp"
#include "hypersteiner/components.hpp"
#include "hypersteiner/hyperlp.hpp"
#include "hypersteiner/instance.hpp"

namespace hypersteiner::testing {

// Terminals 0..k-1 around the Steiner center k.
SteinerInstance star_instance(int k, const Rational& spoke);

// a - u - b with unit costs; a = 0, u = 1 (Steiner), b = 2.
SteinerInstance path_instance();

// Four terminals and one unit-cost Steiner hub over every terminal triple.
// LP optimum 9/2 with three stars at 1/2, optimal tree 5.
SteinerInstance triple_star_instance();

FractionalSolution solve_cuts(const SteinerInstance& inst, LpStats* stats = nullptr);

BlowupGraph lp_blowup(const SteinerInstance& inst);

// LP blowups of small general instances with at most `max_edges` edges.
std::vector<BlowupGraph> small_blowups(int count, int max_edges, std::uint64_t first_seed = 1);

TerminalMask all_labels(const BlowupGraph& x);

EdgeIdSet all_edge_ids(const BlowupGraph& x);

// Terminal label masks of the pieces.
std::vector<TerminalMask> piece_masks(const BlowupGraph& x);

}  // namespace hypersteiner::testing
