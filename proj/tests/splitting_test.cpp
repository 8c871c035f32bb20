#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <queue>

#include "hypersteiner/error.hpp"
#include "hypersteiner/oracles.hpp"
#include "hypersteiner/splitting.hpp"
#include "hypersteiner/verify.hpp"
#include "support.hpp"

using namespace hypersteiner;
using namespace hypersteiner::testing;

namespace {

BlowupGraph whole_instance_graph(const SteinerInstance& inst) {
  Component c;
  c.terminals = inst.terminals();
  c.terminal_mask = (TerminalMask{1} << inst.num_terminals()) - 1;
  for (int e = 0; e < inst.num_edges(); ++e) {
    c.edges.push_back(e);
    c.cost += inst.edge(e).cost;
  }
  return single_component_graph(inst, c);
}

// Steiner chain s0 - s1 - s2 - s3, all of degree 3, with six terminal leaves.
// Edge 0 (t0 - s0) is the root edge; edge 8 (t5 - s3) is four non-root edges away.
SteinerInstance caterpillar() {
  const int s0 = 6;
  return SteinerInstance(10, {0, 1, 2, 3, 4, 5},
                         {Edge{0, s0, Rational(2)}, Edge{s0, s0 + 1, Rational(1)}, Edge{s0 + 1, s0 + 2, Rational(3)},
                          Edge{s0 + 2, s0 + 3, Rational(1)}, Edge{1, s0, Rational(4)}, Edge{2, s0 + 1, Rational(1)},
                          Edge{3, s0 + 2, Rational(2)}, Edge{4, s0 + 3, Rational(5)}, Edge{5, s0 + 3, Rational(1)}});
}

// Edges from e towards the root edge of a single-piece tree, e first, root edge excluded.
std::vector<int> path_to_root_edge(const BlowupGraph& x, int e, int root_edge) {
  std::map<int, std::vector<std::pair<int, int>>> adj;
  for (const auto& be : x.edges()) {
    adj[be.u].emplace_back(be.v, be.id);
    adj[be.v].emplace_back(be.u, be.id);
  }
  const BlowupEdge& r = x.edge_by_id(root_edge);
  std::map<int, int> up;  // vertex -> edge towards the root edge
  std::queue<int> queue;
  up[r.u] = root_edge;
  up[r.v] = root_edge;
  queue.push(r.u);
  queue.push(r.v);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (auto [w, id] : adj[v]) {
      if (up.count(w)) continue;
      up[w] = id;
      queue.push(w);
    }
  }
  const BlowupEdge& be = x.edge_by_id(e);
  int v = up[be.u] == e ? be.v : be.u;
  std::vector<int> path{e};
  while (up[v] != root_edge) {
    path.push_back(up[v]);
    v = x.edge_by_id(up[v]).other(v);
  }
  return path;
}

bool contains(const EdgeIdSet& k, int id) { return std::binary_search(k.begin(), k.end(), id); }

Rational core_weight_sum(const SplittingState& s) {
  Rational total;
  for (const auto& [id, w] : s.weight) total += w;
  return total;
}

}  // namespace

TEST(Binarize, FourStarGetsOneAuxiliaryEdge) {
  const BlowupGraph x = whole_instance_graph(star_instance(4, Rational(1)));
  const BlowupGraph b = binarize(x);
  EXPECT_EQ(b.num_edges(), 5);
  EXPECT_EQ(b.num_vertices(), x.num_vertices() + 1);
  int aux = 0;
  for (const auto& e : b.edges()) {
    if (e.original_edge < 0) {
      ++aux;
      EXPECT_EQ(e.cost, 0);
    }
  }
  EXPECT_EQ(aux, 1);
  EXPECT_EQ(b.cost(), x.cost());
  EXPECT_FALSE(b.structural_problem().has_value());
}

TEST(Binarize, DegreeThreeIsUnchanged) {
  const BlowupGraph x = whole_instance_graph(star_instance(3, Rational(1)));
  const BlowupGraph b = binarize(x);
  EXPECT_EQ(b.num_edges(), x.num_edges());
  EXPECT_EQ(b.num_vertices(), x.num_vertices());
}

TEST(Binarize, HighDegreeStarBecomesBinary) {
  const BlowupGraph b = binarize(whole_instance_graph(star_instance(7, Rational(2))));
  std::map<int, int> degree;
  for (const auto& e : b.edges()) {
    ++degree[e.u];
    ++degree[e.v];
  }
  for (auto [v, d] : degree) {
    if (!b.is_terminal_vertex(v)) {
      EXPECT_EQ(d, 3);
    }
  }
  EXPECT_EQ(b.cost(), 14);
}

TEST(RandomSplitting, SingleEdgeIsCore) {
  const BlowupGraph x = whole_instance_graph(SteinerInstance(2, {0, 1}, {Edge{0, 1, Rational(4)}}));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SplittingState s = random_splitting_set(x, seed);
    ASSERT_EQ(s.k.size(), 1U);
    EXPECT_EQ(s.witness.at(s.k[0]).size(), 1U);
    EXPECT_EQ(s.potential, 4);
    EXPECT_EQ(s.weight.at(s.k[0]), 4);
  }
}

TEST(RandomSplitting, RootEdgeCoreAndHalfMarginals) {
  const BlowupGraph x = whole_instance_graph(caterpillar());
  const int root = x.pieces().front().min_edge_id;
  const int samples = 4000;
  std::map<int, int> core;
  for (int s = 1; s <= samples; ++s) {
    const SplittingState st = random_splitting_set(x, static_cast<std::uint64_t>(s));
    ASSERT_TRUE(is_splitting_set(x, st.k));
    EXPECT_TRUE(contains(st.k, root));
    for (int id : st.k) ++core[id];
  }
  const double sigma = std::sqrt(0.25 / samples);
  for (const auto& e : x.edges()) {
    if (e.id == root) continue;
    EXPECT_NEAR(core[e.id] / static_cast<double>(samples), 0.5, 4 * sigma) << "edge " << e.id;
  }
}

TEST(RandomSplitting, ConsecutiveCleanupRunIsGeometric) {
  const BlowupGraph x = whole_instance_graph(caterpillar());
  const int root = x.pieces().front().min_edge_id;
  const int far = x.edges().back().id;
  const std::vector<int> path = path_to_root_edge(x, far, root);
  const int k = static_cast<int>(path.size());
  ASSERT_EQ(k, 4);
  const int samples = 20000;
  std::vector<int> hist(static_cast<std::size_t>(k + 1), 0);
  for (int s = 1; s <= samples; ++s) {
    const SplittingState st = random_splitting_set(x, static_cast<std::uint64_t>(s));
    int run = 0;
    while (run < k && !contains(st.k, path[static_cast<std::size_t>(run)])) ++run;
    ++hist[static_cast<std::size_t>(run)];
    const std::size_t w = st.witness.at(far).size();
    // When the whole path is cleanup the root edge joins the k side edges in W(e).
    EXPECT_EQ(w, static_cast<std::size_t>(run + 1));
  }
  for (int i = 0; i <= k; ++i) {
    const double p = i < k ? std::pow(0.5, i + 1) : std::pow(0.5, k);
    const double sigma = std::sqrt(p * (1 - p) / samples);
    EXPECT_NEAR(hist[static_cast<std::size_t>(i)] / static_cast<double>(samples), p, 4 * sigma) << "X = " << i;
  }
}

TEST(RandomSplitting, MeanHarmonicWitnessSizeBelowLn4) {
  const BlowupGraph x = whole_instance_graph(caterpillar());
  const int samples = 20000;
  std::map<int, std::vector<double>> values;
  for (int s = 1; s <= samples; ++s) {
    const SplittingState st = random_splitting_set(x, static_cast<std::uint64_t>(s));
    for (const auto& [id, w] : st.witness) values[id].push_back(to_double(harmonic(static_cast<int>(w.size()))));
  }
  for (const auto& [id, v] : values) {
    double mean = 0;
    for (double a : v) mean += a;
    mean /= v.size();
    double var = 0;
    for (double a : v) var += (a - mean) * (a - mean);
    const double se = std::sqrt(var / (v.size() - 1) / v.size());
    EXPECT_LE(mean, std::log(4.0) + 3 * se) << "edge " << id;
  }
}

TEST(OptimalSplitting, SingleEdgePotentialIsCost) {
  const BlowupGraph x = whole_instance_graph(SteinerInstance(2, {0, 1}, {Edge{0, 1, Rational(7, 2)}}));
  EXPECT_EQ(optimal_splitting_set(x).potential, Rational(7, 2));
}

TEST(OptimalSplitting, MatchesExhaustiveMinimum) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto [inst, c] = random_binary_component(seed, 8);
    const BlowupGraph x = single_component_graph(inst, c);
    const SplittingState st = optimal_splitting_set(x);
    EXPECT_TRUE(is_splitting_set(x, st.k));
    EXPECT_EQ(st.potential, oracles::min_potential_exhaustive(x)) << "seed " << seed;
    EXPECT_EQ(st.potential, oracles::potential_by_search(x, st.k));
  }
  const BlowupGraph star3 = whole_instance_graph(star_instance(3, Rational(1)));
  EXPECT_EQ(optimal_splitting_set(star3).potential, oracles::min_potential_exhaustive(star3));
}

TEST(OptimalSplitting, NeverWorseThanRandom) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto [inst, c] = random_binary_component(seed + 100, 12);
    const BlowupGraph x = single_component_graph(inst, c);
    const Rational best = optimal_splitting_set(x).potential;
    for (std::uint64_t r = 1; r <= 30; ++r) EXPECT_LE(best, random_splitting_set(x, r).potential);
  }
}

TEST(OptimalSplitting, RejectsHighDegree) {
  EXPECT_THROW(optimal_splitting_set(whole_instance_graph(star_instance(4, Rational(1)))), InvalidArgument);
  EXPECT_THROW(random_splitting_set(whole_instance_graph(star_instance(5, Rational(1))), 1), InvalidArgument);
}

TEST(QuasiSplitting, UniformStars) {
  const std::vector<std::pair<int, Rational>> cases = {{5, Rational(73, 12)}, {3, Rational(7, 2)}, {2, Rational(2)}};
  for (const auto& [k, phi] : cases) {
    const BlowupGraph x = whole_instance_graph(star_instance(k, Rational(1)));
    const SplittingState st = quasi_bipartite_splitting_set(x);
    EXPECT_EQ(st.potential, phi) << "k = " << k;
    EXPECT_EQ(st.potential / x.cost(), (k - 1 + harmonic(k - 1)) / k);
    EXPECT_LE(st.potential * 60, x.cost() * 73);
  }
}

TEST(QuasiSplitting, CheapestSpokeIsCleanup) {
  const SteinerInstance inst(5, {0, 1, 2, 3}, {Edge{0, 4, Rational(3)}, Edge{1, 4, Rational(1)}, Edge{2, 4, Rational(2)},
                                               Edge{3, 4, Rational(5)}});
  const BlowupGraph x = whole_instance_graph(inst);
  const SplittingState st = quasi_bipartite_splitting_set(x);
  ASSERT_EQ(st.k.size(), 3U);
  EXPECT_FALSE(contains(st.k, x.edges()[1].id));
  EXPECT_EQ(st.witness.at(x.edges()[1].id).size(), 3U);
  EXPECT_EQ(st.potential, 10 + harmonic(3));
}

TEST(QuasiSplitting, RejectsNonStar) {
  const SteinerInstance path(4, {0, 3}, {Edge{0, 1, Rational(1)}, Edge{1, 2, Rational(1)}, Edge{2, 3, Rational(1)}});
  EXPECT_THROW(quasi_bipartite_splitting_set(whole_instance_graph(path)), InvalidArgument);
}

TEST(QuasiSplitting, BoundOnQuasiInstances) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const BlowupGraph x = lp_blowup(quasi_family_instance(seed));
    const SplittingState st = quasi_bipartite_splitting_set(x);
    EXPECT_LE(st.potential * 60, x.cost() * 73);
    EXPECT_EQ(core_weight_sum(st), x.cost());
  }
}

TEST(Witnesses, WeightsSumToCost) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const BlowupGraph x = lp_blowup(general_family_instance(seed));
    for (SplitStrategy s : {SplitStrategy::random, SplitStrategy::dp}) {
      const SplitChoice c = choose_splitting_set(x, s, seed);
      EXPECT_TRUE(is_splitting_set(c.state.graph, c.state.k));
      EXPECT_EQ(core_weight_sum(c.state), c.state.graph.cost());
      EXPECT_EQ(c.state.graph.cost(), x.cost());
      if (!c.fell_back) {
        EXPECT_LE(c.state.potential, c.binarized_potential);
      }
    }
  }
}

TEST(Witnesses, MinimalAgainstSearch) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto [inst, c] = random_binary_component(seed + 200, 10);
    const BlowupGraph x = single_component_graph(inst, c);
    const SplittingState st = random_splitting_set(x, seed);
    for (const auto& e : x.edges()) {
      if (contains(st.k, e.id)) {
        EXPECT_EQ(st.witness.at(e.id), EdgeIdSet{e.id});
      } else {
        EXPECT_EQ(st.witness.at(e.id), oracles::witness_by_search(x, st.k, e.id)) << "seed " << seed;
      }
    }
    EXPECT_EQ(st.potential, oracles::potential_by_search(x, st.k));
  }
}

TEST(Witnesses, RecomputedFromK) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const BlowupGraph x = lp_blowup(general_family_instance(seed));
    const SplitChoice c = choose_splitting_set(x, SplitStrategy::dp);
    const SplittingState again = compute_witnesses_and_weights(c.state.graph, c.state.k);
    EXPECT_EQ(again.potential, c.state.potential);
    EXPECT_EQ(again.witness, c.state.witness);
  }
}

TEST(Witnesses, InvalidSplittingSetThrows) {
  const BlowupGraph x = whole_instance_graph(star_instance(3, Rational(1)));
  EXPECT_THROW(compute_witnesses_and_weights(x, {}), InvalidArgument);
  EXPECT_THROW(compute_witnesses_and_weights(x, {x.edges()[0].id}), InvalidArgument);
}

TEST(Splitting, EnumeratedSetsAreValidAndCounted) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto [inst, c] = random_binary_component(seed, 9);
    const BlowupGraph x = single_component_graph(inst, c);
    const auto all = oracles::enumerate_splitting_sets(x);
    EXPECT_EQ(static_cast<long>(all.size()), oracles::count_splitting_sets(x));
    for (const auto& k : all) EXPECT_TRUE(is_splitting_set(x, k));
  }
}
