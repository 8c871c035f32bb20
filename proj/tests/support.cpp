#include "support.hpp"

namespace hypersteiner::testing {

SteinerInstance star_instance(int k, const Rational& spoke) {
  std::vector<int> terms;
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i) {
    terms.push_back(i);
    edges.push_back(Edge{i, k, spoke});
  }
  return SteinerInstance(k + 1, terms, edges);
}

SteinerInstance path_instance() { return SteinerInstance(3, {0, 2}, {Edge{0, 1, Rational(1)}, Edge{1, 2, Rational(1)}}); }

SteinerInstance triple_star_instance() {
  std::vector<Edge> edges;
  int hub = 4;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      for (int c = b + 1; c < 4; ++c) {
        for (int v : {a, b, c}) edges.push_back(Edge{v, hub, Rational(1)});
        ++hub;
      }
    }
  }
  return SteinerInstance(hub, {0, 1, 2, 3}, edges);
}

FractionalSolution solve_cuts(const SteinerInstance& inst, LpStats* stats) {
  return solve_lp_exact(inst, enumerate_components(inst, inst.num_terminals()), LpOptions{LpMode::cuts, 12}, stats);
}

BlowupGraph lp_blowup(const SteinerInstance& inst) { return build_blowup(inst, solve_cuts(inst)); }

std::vector<BlowupGraph> small_blowups(int count, int max_edges, std::uint64_t first_seed) {
  std::vector<BlowupGraph> out;
  for (std::uint64_t seed = first_seed; static_cast<int>(out.size()) < count; ++seed) {
    const int t = 3 + static_cast<int>(seed % 3);
    BlowupGraph x = lp_blowup(generate_random(t, 1 + static_cast<int>(seed % 2), Rational(1, 2), seed, false));
    if (x.num_edges() <= max_edges) out.push_back(std::move(x));
  }
  return out;
}

TerminalMask all_labels(const BlowupGraph& x) { return x.active_terminals(); }

EdgeIdSet all_edge_ids(const BlowupGraph& x) {
  EdgeIdSet ids;
  for (const auto& e : x.edges()) ids.push_back(e.id);
  return ids;
}

std::vector<TerminalMask> piece_masks(const BlowupGraph& x) {
  std::vector<TerminalMask> out;
  for (const auto& p : x.pieces()) out.push_back(p.terminals);
  return out;
}

}  // namespace hypersteiner::testing
