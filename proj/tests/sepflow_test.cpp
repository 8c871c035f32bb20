#include <gtest/gtest.h>

#include <random>

#include "hypersteiner/error.hpp"
#include "hypersteiner/oracles.hpp"
#include "hypersteiner/removal_matroid.hpp"
#include "hypersteiner/sepflow.hpp"
#include "support.hpp"

using namespace hypersteiner;
using namespace hypersteiner::testing;

namespace {

BlowupGraph star_copies(int k, long n) {
  const SteinerInstance inst = star_instance(k, Rational(1));
  BlowupGraph x(inst, n);
  add_component_copies(x, inst, enumerate_components(inst, k).back(), n);
  return x;
}

std::vector<BlowupGraph> test_graphs(int count) {
  std::vector<BlowupGraph> out;
  for (std::uint64_t seed = 1; static_cast<int>(out.size()) < count; ++seed) {
    const int t = 3 + static_cast<int>(seed % 5);
    out.push_back(lp_blowup(seed % 2 ? generate_random_hubs(t, 3, seed)
                                     : generate_random(t, 2, Rational(2, 5), seed, false)));
  }
  return out;
}

}  // namespace

TEST(SeparationDigraph, StarCopiesHaveZeroSurplus) {
  const BlowupGraph x = star_copies(4, 3);
  const SeparationDigraph d = build_separation_digraph(x);
  EXPECT_EQ(d.n, 3);
  EXPECT_EQ(d.y_total, 0);
  for (long y : d.y) EXPECT_EQ(y, 0);
  EXPECT_FALSE(d.deficient.has_value());
}

TEST(SeparationDigraph, ArcsAndCapacities) {
  for (const auto& x : test_graphs(10)) {
    const SeparationDigraph d = build_separation_digraph(x);
    const int pieces = static_cast<int>(x.pieces().size());
    EXPECT_EQ(d.original_arcs, x.num_edges() + pieces + x.num_active_terminals());
    EXPECT_EQ(d.net.num_arcs(), d.original_arcs);
    for (int a = 0; a < d.net.num_arcs(); ++a) {
      if (d.net.arc_to(a) == d.sink) {
        const int v = d.net.arc_from(a);
        EXPECT_EQ(d.net.capacity(a), d.y[static_cast<std::size_t>(v)]);
      } else {
        EXPECT_EQ(d.net.capacity(a), 1);
      }
    }
    long y_total = 0;
    for (const auto& p : x.pieces()) {
      for (int v = 0; v < x.num_terminals(); ++v) y_total += mask_contains(p.terminals, v) ? 1 : 0;
    }
    EXPECT_EQ(d.y_total, y_total - x.N() * x.num_active_terminals());
  }
}

TEST(SeparationDigraph, StarFlowEqualsN) {
  const BlowupGraph x = star_copies(3, 2);
  const MinSlack m = min_slack_over_supersets(x, 0b011);
  EXPECT_EQ(m.value, 0);
  EXPECT_EQ(m.flow, 2);
  EXPECT_EQ(m.argmin & 0b011, 0b011U);
}

TEST(SeparationDigraph, DeficientTerminalIsReported) {
  // One copy where two are needed leaves every terminal short.
  const SteinerInstance inst = star_instance(3, Rational(1));
  BlowupGraph x(inst, 2);
  add_component_copies(x, inst, enumerate_components(inst, 3).back(), 1);
  const SeparationDigraph d = build_separation_digraph(x);
  ASSERT_TRUE(d.deficient.has_value());
  EXPECT_EQ(*d.deficient, 0);
  EXPECT_THROW(min_slack_over_supersets(x, 0b001), InfeasibleError);
  EXPECT_TRUE(separate(x).deficient.has_value());
}

TEST(SeparationDigraph, FlowIdentityMatchesExhaustiveMinimum) {
  for (const auto& x : test_graphs(12)) {
    const SeparationDigraph d = build_separation_digraph(x);
    for (TerminalMask q = 1; q <= x.active_terminals(); ++q) {
      const MinSlack m = min_slack_over_supersets(x, q);
      EXPECT_EQ(m.flow - d.y_total - x.N(), m.value);
      EXPECT_EQ(m.value, oracles::min_slack_over_supersets(x, {}, q));
      EXPECT_EQ(m.argmin & q, q);
      EXPECT_EQ(slack(x, m.argmin), m.value);
    }
  }
}

TEST(SeparationDigraph, RemovedEdgesMatchOracle) {
  std::mt19937_64 rng(3);
  for (const auto& x : test_graphs(12)) {
    for (int round = 0; round < 10; ++round) {
      EdgeIdSet f;
      for (const auto& e : x.edges()) {
        if (rng() % 5 == 0) f.push_back(e.id);
      }
      const TerminalMask q = (rng() % x.active_terminals()) + 1;
      EXPECT_EQ(min_slack_over_supersets(x, f, q).value, oracles::min_slack_over_supersets(x, f, q));
    }
  }
}

TEST(SeparationDigraph, FlowIsInvariantUnderRerooting) {
  for (const auto& x : test_graphs(8)) {
    const TerminalMask all = x.active_terminals();
    for (int shift = 0; shift < 4; ++shift) {
      std::vector<int> roots;
      for (const auto& p : x.pieces()) roots.push_back(p.vertices[static_cast<std::size_t>(shift) % p.vertices.size()]);
      for (TerminalMask q = 1; q <= all; ++q) {
        SeparationDigraph d = build_separation_digraph(x, &roots);
        EXPECT_EQ(min_slack_in_digraph(d, all, q).value, min_slack_over_supersets(x, q).value);
      }
    }
  }
}

TEST(Separate, FeasibleGraphHasNoViolation) {
  for (const auto& x : test_graphs(10)) {
    const SeparationResult s = separate(x);
    EXPECT_FALSE(s.violated.has_value());
    EXPECT_TRUE(s.equality_holds);
  }
}

TEST(Separate, AddedComponentViolatesSupersets) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const SteinerInstance inst = generate_random_hubs(5, 3, seed);
    const BlowupGraph x = lp_blowup(inst);
    for (const auto& q : enumerate_components(inst, 3)) {
      const SeparationResult s = separate(add_component(x, inst, q));
      ASSERT_TRUE(s.violated.has_value());
      EXPECT_EQ(*s.violated & q.terminal_mask, q.terminal_mask);
      EXPECT_LT(s.value, 0);
    }
  }
}

TEST(Separate, LpSeparationMatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SteinerInstance inst = generate_random_hubs(5, 3, seed);
    const FractionalSolution lp = solve_cuts(inst);
    std::vector<WeightedSet> x = lp.weighted();
    // Perturb so that rows may be violated.
    x.front().weight *= Rational(3, 2);
    const TerminalMask all = 0b11111;
    for (TerminalMask q = 1; q <= all; ++q) {
      Rational best;
      bool first = true;
      for (TerminalMask s = q; s <= all; s = (s + 1) | q) {
        const Rational v = lp_slack(x, s);
        if (first || v < best) best = v;
        first = false;
      }
      EXPECT_EQ(lp_min_slack_over_supersets(x, all, q).value, best);
    }
  }
}

TEST(Gammoid, RankEndpoints) {
  for (const auto& x : small_blowups(10, 12)) {
    for (TerminalMask q = 1; q <= x.active_terminals(); ++q) {
      if (mask_size(q) < 2) continue;
      EXPECT_EQ(gammoid_rank(x, q, {}), 0);
      EXPECT_EQ(gammoid_rank(x, q, all_edge_ids(x)), x.N() * (mask_size(q) - 1));
    }
  }
}

TEST(Gammoid, MatchesSubmodularRankOnAllSubsets) {
  for (const auto& x : small_blowups(6, 10)) {
    const EdgeIdSet ids = all_edge_ids(x);
    const TerminalMask q = x.active_terminals() & 0b11;
    const RemovalMatroid sub(x, q, std::nullopt, RankOracle::submodular);
    const GammoidOracle gam(x, q);
    for (std::uint32_t bits = 0; bits < (1U << ids.size()); ++bits) {
      EdgeIdSet u;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if ((bits >> i) & 1U) u.push_back(ids[i]);
      }
      ASSERT_EQ(gam.rank(u), sub.rank(u));
    }
  }
}
