#include <gtest/gtest.h>

#include <random>

#include "hypersteiner/error.hpp"
#include "hypersteiner/partition_decomp.hpp"
#include "hypersteiner/splitting.hpp"
#include "hypersteiner/verify.hpp"
#include "support.hpp"

using namespace hypersteiner;
using namespace hypersteiner::testing;

namespace {

SetFunction sum_of_partitions(int n, const std::vector<std::pair<Rational, Partition>>& terms) {
  std::vector<Rational> table(std::size_t{1} << n);
  for (SubsetMask s = 0; s < table.size(); ++s) {
    for (const auto& [lambda, p] : terms) table[s] += lambda * partition_function_eval(p, s);
  }
  return SetFunction(n, table);
}

Partition random_partition(int n, std::mt19937_64& rng) {
  const int blocks = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
  std::vector<SubsetMask> masks(static_cast<std::size_t>(blocks), 0);
  for (int i = 0; i < n; ++i) masks[rng() % static_cast<unsigned>(blocks)] |= SubsetMask{1} << i;
  Partition p;
  for (SubsetMask m : masks) {
    if (m) p.push_back(m);
  }
  std::sort(p.begin(), p.end(), [](SubsetMask a, SubsetMask b) { return __builtin_ctz(a) < __builtin_ctz(b); });
  return p;
}

// Every block of `coarse` is a union of blocks of `fine`.
bool coarsens(const Partition& fine, const Partition& coarse) {
  for (SubsetMask f : fine) {
    bool inside = false;
    for (SubsetMask c : coarse) inside = inside || (f & c) == f;
    if (!inside) return false;
  }
  return true;
}

void expect_valid(const SetFunction& h, const PartitionDecomposition& d) {
  EXPECT_EQ(d(h.ground()), h(h.ground()));
  Rational total;
  for (std::size_t i = 0; i < d.terms.size(); ++i) {
    const auto& [lambda, p] = d.terms[i];
    EXPECT_GT(lambda, 0);
    total += lambda * static_cast<long>(p.size() - 1);
    if (i > 0) {
      EXPECT_LT(p.size(), d.terms[i - 1].second.size());
      EXPECT_TRUE(coarsens(d.terms[i - 1].second, p));
    }
  }
  EXPECT_EQ(total, h(h.ground()));
  EXPECT_LE(static_cast<int>(d.terms.size()), h.ground_size() - 1);
  for (SubsetMask s = 0; s <= h.ground(); ++s) EXPECT_LE(d(s), h(s));
}

}  // namespace

TEST(PartitionFunction, Evaluation) {
  const Partition p = {0b001, 0b010, 0b100};
  EXPECT_EQ(partition_function_eval(p, 0), 0);
  EXPECT_EQ(partition_function_eval(p, 0b111), 2);
  EXPECT_EQ(partition_function_eval(p, 0b101), 1);
  EXPECT_EQ(partition_function_eval(p, 0b010), 0);
  const Partition q = {0b011, 0b100};
  EXPECT_EQ(partition_function_eval(q, 0b011), 0);
  EXPECT_EQ(partition_function_eval(q, 0b110), 1);
}

TEST(Decompose, SinglePartitionIsFixedPoint) {
  const Partition p = {0b0011, 0b0100, 0b1000};
  const SetFunction h = sum_of_partitions(4, {{Rational(5, 2), p}});
  const PartitionDecomposition d = decompose(h);
  ASSERT_EQ(d.terms.size(), 1U);
  EXPECT_EQ(d.terms[0].first, Rational(5, 2));
  EXPECT_EQ(d.terms[0].second, p);
}

TEST(Decompose, ZeroAtGroundSetGivesNothing) {
  const SetFunction h(3, std::vector<Rational>(8, Rational(0)));
  const PartitionDecomposition d = decompose(h);
  EXPECT_TRUE(d.terms.empty());
  for (SubsetMask s = 0; s < 8; ++s) EXPECT_EQ(d(s), 0);
}

TEST(Decompose, UncoveredElementIsRejected) {
  const SetFunction h(2, {Rational(0), Rational(1), Rational(0), Rational(1)});
  try {
    decompose(h);
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    EXPECT_EQ(std::string(e.what()), "tight sets do not cover U");
  }
}

TEST(Decompose, SumsOfNestedPartitions) {
  // A chain of coarsenings is recovered exactly.
  const Partition fine = {0b00001, 0b00010, 0b00100, 0b01000, 0b10000};
  const Partition mid = {0b00011, 0b00100, 0b11000};
  const Partition coarse = {0b00111, 0b11000};
  const SetFunction h = sum_of_partitions(5, {{Rational(1, 3), fine}, {Rational(2), mid}, {Rational(1), coarse}});
  const PartitionDecomposition d = decompose(h);
  expect_valid(h, d);
  ASSERT_EQ(d.terms.size(), 3U);
  for (SubsetMask s = 0; s < 32; ++s) EXPECT_EQ(d(s), h(s));
}

TEST(Decompose, RandomPartitionSums) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 60; ++round) {
    const int n = 2 + round % 5;
    std::vector<std::pair<Rational, Partition>> terms;
    const int count = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < count; ++i) {
      Rational lambda(1 + static_cast<long>(rng() % 5), 1 + static_cast<long>(rng() % 3));
      lambda.canonicalize();
      terms.emplace_back(lambda, random_partition(n, rng));
    }
    const SetFunction h = sum_of_partitions(n, terms);
    ASSERT_TRUE(h.is_intersecting_submodular());
    expect_valid(h, decompose(h));
  }
}

TEST(Decompose, SlackFunctionsOfBlowups) {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const SplitChoice c = choose_splitting_set(lp_blowup(general_family_instance(seed)), SplitStrategy::dp);
    EdgeIdSet f;
    for (int id : c.state.k) {
      if (rng() % 2) f.push_back(id);
    }
    const SetFunction h = slack_function(c.state.graph, f);
    EXPECT_TRUE(h.is_nonnegative());
    EXPECT_TRUE(h.is_intersecting_submodular());
    EXPECT_EQ(h(h.ground()), static_cast<long>(f.size()));
    expect_valid(h, decompose(h));
  }
}

TEST(Claim1, EmptyAndFullRemoval) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const SplitChoice c = choose_splitting_set(lp_blowup(general_family_instance(seed)), SplitStrategy::dp);
    const Claim1Report none = verify_claim1(c.state.graph, c.state.k, {});
    EXPECT_EQ(none.rhs, 0);
    EXPECT_EQ(none.slack_r, 0);
    EXPECT_TRUE(none.holds());
    const Claim1Report all = verify_claim1(c.state.graph, c.state.k, c.state.k);
    EXPECT_EQ(all.slack_r, static_cast<long>(c.state.k.size()));
    EXPECT_TRUE(all.holds());
  }
}

TEST(Claim1, RandomSubsetsOfK) {
  std::mt19937_64 rng(12);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const SplitChoice c = choose_splitting_set(lp_blowup(general_family_instance(seed)), SplitStrategy::random, seed);
    for (int round = 0; round < 10; ++round) {
      EdgeIdSet f;
      for (int id : c.state.k) {
        if (rng() % 3 == 0) f.push_back(id);
      }
      const Claim1Report r = verify_claim1(c.state.graph, c.state.k, f);
      EXPECT_TRUE(r.identity);
      EXPECT_GE(r.lhs, r.rhs);
    }
  }
  const SplitChoice c = choose_splitting_set(lp_blowup(general_family_instance(2)), SplitStrategy::dp);
  const int outside = c.state.graph.next_edge_id() + 5;
  EXPECT_THROW(verify_claim1(c.state.graph, c.state.k, {outside}), InvalidArgument);
}

TEST(SetFunctionTable, Checks) {
  EXPECT_THROW(SetFunction(2, std::vector<Rational>(3)), InvalidArgument);
  EXPECT_THROW(SetFunction(0, std::vector<Rational>(1)), InvalidArgument);
  // h(A) + h(B) < h(A | B) + h(A & B) for A = {0,1}, B = {1,2}.
  std::vector<Rational> t(8, Rational(0));
  t[0b111] = 3;
  const SetFunction bad(3, t);
  EXPECT_FALSE(bad.is_intersecting_submodular());
  EXPECT_TRUE(bad.is_nonnegative());
}
