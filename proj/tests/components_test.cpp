#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include "hypersteiner/components.hpp"
#include "hypersteiner/error.hpp"
#include "support.hpp"

using namespace hypersteiner;
using namespace hypersteiner::testing;

namespace {

// Cheapest edge subset forming a full component on exactly the terminals of `mask`,
// found by enumerating every edge subset.
std::optional<Rational> brute_force_component(const SteinerInstance& inst, TerminalMask mask) {
  const int m = inst.num_edges();
  std::optional<Rational> best;
  for (std::uint32_t sub = 1; sub < (1U << m); ++sub) {
    std::vector<int> deg(static_cast<std::size_t>(inst.num_vertices()), 0);
    std::vector<int> parent(static_cast<std::size_t>(inst.num_vertices()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
      while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
      return v;
    };
    bool acyclic = true;
    Rational cost;
    int edges = 0;
    for (int e = 0; e < m; ++e) {
      if (!((sub >> e) & 1U)) continue;
      const Edge& ed = inst.edge(e);
      ++deg[static_cast<std::size_t>(ed.u)];
      ++deg[static_cast<std::size_t>(ed.v)];
      const int a = find(ed.u);
      const int b = find(ed.v);
      if (a == b) acyclic = false;
      parent[static_cast<std::size_t>(a)] = b;
      cost += ed.cost;
      ++edges;
    }
    if (!acyclic) continue;
    int vertices = 0;
    bool ok = true;
    for (int v = 0; v < inst.num_vertices(); ++v) {
      const int d = deg[static_cast<std::size_t>(v)];
      if (d == 0) {
        if (inst.is_terminal(v) && mask_contains(mask, inst.terminal_index(v))) ok = false;
        continue;
      }
      ++vertices;
      if (inst.is_terminal(v)) {
        ok = ok && d == 1 && mask_contains(mask, inst.terminal_index(v));
      } else {
        ok = ok && d >= 2;
      }
    }
    if (ok && vertices == edges + 1 && (!best || cost < *best)) best = cost;
  }
  return best;
}

}  // namespace

TEST(Components, PathGivesOneComponent) {
  const auto comps = enumerate_components(path_instance(), 2);
  ASSERT_EQ(comps.size(), 1U);
  EXPECT_EQ(comps[0].terminals, (std::vector<int>{0, 2}));
  EXPECT_EQ(comps[0].cost, 2);
  EXPECT_EQ(comps[0].edges, (std::vector<int>{0, 1}));
}

TEST(Components, StarSubsets) {
  const SteinerInstance inst = star_instance(3, Rational(1));
  const auto comps = enumerate_components(inst, 3);
  std::map<TerminalMask, Rational> got;
  for (const auto& c : comps) {
    got[c.terminal_mask] = c.cost;
    EXPECT_TRUE(is_valid_component(inst, c));
  }
  const std::map<TerminalMask, Rational> want = {{0b011, 2}, {0b101, 2}, {0b110, 2}, {0b111, 3}};
  EXPECT_EQ(got, want);
}

TEST(Components, FourTerminalCandidateCount) {
  const SteinerInstance inst = star_instance(4, Rational(1));
  EXPECT_EQ(enumerate_components(inst, 4).size(), 11U);
  EXPECT_EQ(enumerate_components(inst, 2).size(), 6U);
  EXPECT_EQ(enumerate_components(inst, 3).size(), 10U);
}

TEST(Components, SmallKIsRejected) { EXPECT_THROW(enumerate_components(path_instance(), 1), InvalidArgument); }

TEST(Components, MinCostOnTreeAndDisconnected) {
  const SteinerInstance tree(5, {0, 1, 2}, {Edge{0, 3, Rational(2)}, Edge{3, 1, Rational(1)}, Edge{3, 4, Rational(1)},
                                            Edge{4, 2, Rational(3)}});
  EXPECT_EQ(min_component_cost(tree, 0b111), Rational(7));
  const SteinerInstance split(4, {0, 1, 2, 3}, {Edge{0, 1, Rational(1)}, Edge{2, 3, Rational(1)}});
  EXPECT_FALSE(min_component_cost(split, 0b0101).has_value());
  EXPECT_THROW(min_component_cost(split, 0b1), InvalidArgument);
}

TEST(Components, TerminalsAreNeverInterior) {
  // The only route from 0 to 2 runs through terminal 1.
  const SteinerInstance inst(3, {0, 1, 2}, {Edge{0, 1, Rational(1)}, Edge{1, 2, Rational(1)}});
  EXPECT_FALSE(min_component_cost(inst, 0b101).has_value());
  EXPECT_EQ(min_component_cost(inst, 0b011), Rational(1));
}

TEST(Components, MatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const SteinerInstance inst = generate_random(3 + static_cast<int>(seed % 2), 2 + static_cast<int>(seed % 2),
                                                 Rational(2, 5), seed, false);
    if (inst.num_edges() > 16) continue;
    const auto comps = enumerate_components(inst, inst.num_terminals());
    std::map<TerminalMask, Rational> got;
    for (const auto& c : comps) {
      EXPECT_TRUE(is_valid_component(inst, c));
      EXPECT_EQ(c.cost, edge_set_cost(inst, c.edges));
      got[c.terminal_mask] = c.cost;
    }
    for (TerminalMask s = 1; s < (TerminalMask{1} << inst.num_terminals()); ++s) {
      if (mask_size(s) < 2) continue;
      const auto want = brute_force_component(inst, s);
      const auto it = got.find(s);
      ASSERT_EQ(want.has_value(), it != got.end()) << "seed " << seed << " mask " << s;
      if (want) {
        EXPECT_EQ(*want, it->second) << "seed " << seed << " mask " << s;
      }
    }
  }
}
