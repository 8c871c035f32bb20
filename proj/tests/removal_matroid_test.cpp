#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hypersteiner/error.hpp"
#include "hypersteiner/oracles.hpp"
#include "hypersteiner/removal_matroid.hpp"
#include "hypersteiner/splitting.hpp"
#include "support.hpp"

using namespace hypersteiner;
using namespace hypersteiner::testing;

namespace {

EdgeIdSet subset_of(const EdgeIdSet& ids, std::uint32_t bits) {
  EdgeIdSet out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if ((bits >> i) & 1U) out.push_back(ids[i]);
  }
  return out;
}

std::vector<TerminalMask> query_sets(const BlowupGraph& x) {
  std::vector<TerminalMask> out;
  for (TerminalMask q = 1; q <= x.active_terminals(); ++q) {
    if (mask_size(q) >= 2 && mask_size(q) <= 3) out.push_back(q);
  }
  return out;
}

}  // namespace

TEST(RemovalMatroid, RankEndpoints) {
  for (const auto& x : small_blowups(8, 14)) {
    for (TerminalMask q : query_sets(x)) {
      for (RankOracle o : {RankOracle::gammoid, RankOracle::submodular}) {
        const RemovalMatroid m(x, q, std::nullopt, o);
        EXPECT_EQ(m.rank({}), 0);
        EXPECT_EQ(m.full_rank(), x.N() * (mask_size(q) - 1));
        EXPECT_EQ(m.rank(m.ground()), m.full_rank());
        EXPECT_TRUE(m.is_independent({}));
      }
    }
  }
}

TEST(RemovalMatroid, RankIsMinSlackOverSupersets) {
  std::mt19937_64 rng(17);
  for (const auto& x : small_blowups(10, 16)) {
    const EdgeIdSet ids = all_edge_ids(x);
    for (TerminalMask q : query_sets(x)) {
      const RemovalMatroid m(x, q);
      for (int round = 0; round < 6; ++round) {
        const EdgeIdSet f = subset_of(ids, static_cast<std::uint32_t>(rng()));
        EXPECT_EQ(m.rank(f), oracles::min_slack_over_supersets(x, f, q));
      }
    }
  }
}

TEST(RemovalMatroid, OversizedSetsAreDependent) {
  for (const auto& x : small_blowups(5, 14)) {
    for (TerminalMask q : query_sets(x)) {
      const RemovalMatroid m(x, q);
      const auto limit = static_cast<std::size_t>(m.full_rank());
      if (m.ground().size() <= limit) continue;
      const EdgeIdSet f(m.ground().begin(), m.ground().begin() + static_cast<long>(limit) + 1);
      EXPECT_FALSE(m.is_independent(f));
    }
  }
}

TEST(RemovalMatroid, RankAxiomsOnEverySubset) {
  for (const auto& x : small_blowups(4, 8)) {
    const EdgeIdSet ids = all_edge_ids(x);
    const std::uint32_t full = (1U << ids.size()) - 1;
    for (TerminalMask q : query_sets(x)) {
      const RemovalMatroid m(x, q);
      std::vector<long> r(full + 1);
      for (std::uint32_t a = 0; a <= full; ++a) r[a] = m.rank(subset_of(ids, a));
      for (std::uint32_t a = 0; a <= full; ++a) {
        EXPECT_LE(r[a], __builtin_popcount(a));
        for (std::size_t i = 0; i < ids.size(); ++i) {
          const std::uint32_t b = a | (1U << i);
          EXPECT_LE(r[a], r[b]);
          EXPECT_LE(r[b], r[a] + 1);
        }
        for (std::uint32_t b = 0; b <= full; b += 3) EXPECT_LE(r[a | b] + r[a & b], r[a] + r[b]);
      }
    }
  }
}

TEST(RemovalMatroid, GreedyBasisIsHeaviestMinimalRemoval) {
  std::mt19937_64 rng(23);
  for (const auto& x : small_blowups(8, 10)) {
    for (TerminalMask q : query_sets(x)) {
      const RemovalMatroid m(x, q);
      const auto bases = oracles::enumerate_minimal_removals(x, q);
      ASSERT_FALSE(bases.empty());
      const EdgeIdSet uniform = m.greedy_max_weight_basis({});
      EXPECT_EQ(static_cast<long>(uniform.size()), m.full_rank());
      EXPECT_EQ(m.rank(uniform), m.full_rank());
      for (int round = 0; round < 3; ++round) {
        std::map<int, Rational> w;
        for (int id : m.ground()) w[id] = Rational(static_cast<long>(rng() % 7));
        const EdgeIdSet b = m.greedy_max_weight_basis(w);
        Rational got;
        for (int id : b) got += w[id];
        Rational best = -1;
        for (const auto& base : bases) {
          Rational s;
          for (int id : base) s += w[id];
          if (s > best) best = s;
        }
        EXPECT_EQ(got, best);
        EXPECT_NE(std::find(bases.begin(), bases.end(), b), bases.end());
      }
    }
  }
}

TEST(RemovalMatroid, BasesAreExactlyMinimalRemovals) {
  for (const auto& x : small_blowups(5, 9)) {
    const EdgeIdSet ids = all_edge_ids(x);
    for (TerminalMask q : query_sets(x)) {
      const RemovalMatroid m(x, q);
      std::set<EdgeIdSet> bases;
      for (std::uint32_t a = 0; a < (1U << ids.size()); ++a) {
        if (__builtin_popcount(a) != m.full_rank()) continue;
        const EdgeIdSet f = subset_of(ids, a);
        if (m.is_independent(f)) bases.insert(f);
      }
      const auto removals = oracles::enumerate_minimal_removals(x, q);
      EXPECT_EQ(bases, std::set<EdgeIdSet>(removals.begin(), removals.end()));
    }
  }
}

TEST(RemovalMatroid, SplittingSetsContainBases) {
  for (const auto& x : small_blowups(5, 10)) {
    for (const auto& k : oracles::enumerate_splitting_sets(x)) {
      for (TerminalMask q : query_sets(x)) {
        const RemovalMatroid m(x, q, k);
        EXPECT_EQ(m.rank(k), m.full_rank());
        EXPECT_EQ(static_cast<long>(m.greedy_max_weight_basis({}).size()), m.full_rank());
      }
    }
  }
}

TEST(RemovalMatroid, MissingBasisIsAnInvariantViolation) {
  const BlowupGraph x = small_blowups(1, 14).front();
  const RemovalMatroid m(x, x.active_terminals(), EdgeIdSet{});
  EXPECT_THROW(m.greedy_max_weight_basis({}), InvariantViolation);
}

TEST(UniformPoint, HoldsExhaustively) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const BlowupGraph x = lp_blowup(generate_random_hubs(4 + static_cast<int>(seed % 2), 4, seed));
    const SplitChoice c = choose_splitting_set(x, SplitStrategy::dp);
    if (c.state.k.size() > 12) continue;
    const UniformPointReport r = verify_uniform_point(c.state.graph, c.state.k);
    EXPECT_TRUE(r.ok) << (r.failures.empty() ? "" : r.failures.front());
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.sets_checked, 1L << c.state.k.size());
  }
}

TEST(UniformPoint, RejectsNonSplittingSet) {
  const BlowupGraph x = lp_blowup(generate_random_hubs(4, 3, 2));
  EXPECT_THROW(verify_uniform_point(x, {}), InvalidArgument);
}
