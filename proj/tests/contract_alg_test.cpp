#include <gtest/gtest.h>

#include "hypersteiner/contract_alg.hpp"
#include "hypersteiner/error.hpp"
#include "hypersteiner/oracles.hpp"
#include "hypersteiner/verify.hpp"
#include "support.hpp"

using namespace hypersteiner;
using namespace hypersteiner::testing;

namespace {

AlgorithmState initial_state(const SteinerInstance& inst, SplitStrategy strategy = SplitStrategy::dp) {
  AlgorithmState s;
  s.instance = &inst;
  s.split = choose_splitting_set(lp_blowup(inst), strategy).state;
  return s;
}

}  // namespace

TEST(ContractAlg, IntegralLpGivesRatioOne) {
  const SteinerInstance inst = path_instance();
  const RunResult r = run(inst);
  EXPECT_EQ(r.lp.objective, 2);
  EXPECT_EQ(r.tree.cost, 2);
  EXPECT_EQ(r.tree.edges, (std::vector<int>{0, 1}));
  ASSERT_EQ(r.certificate.iterations.size(), 1U);

  const SteinerInstance star = star_instance(5, Rational(3));
  const RunResult s = run(star);
  EXPECT_EQ(s.tree.cost, s.lp.objective);
}

TEST(ContractAlg, SingleComponentSelection) {
  const SteinerInstance inst = star_instance(4, Rational(1));
  const AlgorithmState st = initial_state(inst);
  const Selection sel = select_component(st);
  EXPECT_EQ(sel.q, 0b1111U);
  EXPECT_EQ(static_cast<long>(sel.basis.size()), st.split.graph.N() * 3);
  EXPECT_EQ(sel.basis, st.split.k);
  const AlgorithmState next = contract_step(st, sel, true);
  EXPECT_TRUE(next.split.k.empty());
  EXPECT_EQ(next.split.graph.num_active_terminals(), 1);
}

TEST(ContractAlg, SelectionMaximizesMargin) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const SteinerInstance inst = general_family_instance(seed);
    const AlgorithmState st = initial_state(inst);
    const BlowupGraph& x = st.split.graph;
    const Selection sel = select_component(st);
    Rational best;
    bool first = true;
    for (const auto& p : x.pieces()) {
      if (mask_size(p.terminals) < 2) continue;
      const RemovalMatroid m(x, p.terminals, st.split.k, RankOracle::submodular);
      Rational w;
      for (int id : m.greedy_max_weight_basis(st.split.weight)) w += st.split.weight.at(id);
      const Rational margin = w / x.N() - p.cost;
      if (first || margin > best) best = margin;
      first = false;
    }
    EXPECT_EQ(sel.weight / x.N() - x.pieces()[static_cast<std::size_t>(sel.piece)].cost, best) << "seed " << seed;
    EXPECT_GE(sel.weight, x.pieces()[static_cast<std::size_t>(sel.piece)].cost * x.N());
  }
}

TEST(ContractAlg, StepInvariants) {
  bool saw_cleanup = false;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SteinerInstance inst = general_family_instance(seed);
    AlgorithmState st = initial_state(inst);
    const long n = st.split.graph.N();
    while (st.split.graph.num_active_terminals() > 1) {
      const Selection sel = select_component(st);
      const std::size_t k_before = st.split.k.size();
      const int labels_before = st.split.graph.num_active_terminals();
      const Rational phi = st.split.potential;
      st = contract_step(st, sel, true);
      const IterationRecord& rec = st.log.back();
      EXPECT_EQ(k_before - st.split.k.size(), static_cast<std::size_t>(n * (mask_size(sel.q) - 1)));
      EXPECT_EQ(st.split.graph.num_active_terminals(), labels_before - mask_size(sel.q) + 1);
      EXPECT_LE(rec.q_cost * n, rec.removed_weight);
      EXPECT_GE(phi - st.split.potential, rec.removed_weight);
      EXPECT_TRUE(is_feasible(st.split.graph));
      saw_cleanup = saw_cleanup || !rec.cleaned.empty();
    }
    EXPECT_TRUE(st.split.k.empty());
  }
  EXPECT_TRUE(saw_cleanup);
}

TEST(ContractAlg, TripleStars) {
  const SteinerInstance inst = triple_star_instance();
  const RunResult r = run(inst, RunOptions{0, SplitStrategy::dp, 1, {LpMode::cuts, 12}, RankOracle::gammoid, true});
  EXPECT_EQ(r.lp.objective, Rational(9, 2));
  EXPECT_EQ(r.certificate.n, 2);
  EXPECT_EQ(r.tree.cost, 5);
  EXPECT_EQ(oracles::exact_steiner_tree(inst).cost, 5);
  EXPECT_LE(r.tree.cost * r.certificate.n, r.certificate.potential);
}

TEST(ContractAlg, CertificateChain) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const SteinerInstance inst = general_family_instance(seed);
    for (SplitStrategy s : {SplitStrategy::dp, SplitStrategy::random}) {
      RunOptions o;
      o.strategy = s;
      o.seed = seed;
      const RunResult r = run(inst, o);
      const Certificate& c = r.certificate;
      EXPECT_TRUE(is_steiner_tree(inst, r.tree.edges));
      EXPECT_LE(r.tree.cost, c.contracted_cost);
      EXPECT_LE(c.contracted_cost * c.n, c.potential);
      EXPECT_TRUE(c.tree_within_potential());
      EXPECT_TRUE(c.potential_drops_cover_weights());
      Rational removed;
      for (const auto& it : c.iterations) removed += it.removed_weight;
      EXPECT_LE(removed, c.potential);
      if (s == SplitStrategy::dp) {
        EXPECT_LE(c.potential, ln4_bound() * c.n * c.lp_value);
      }
    }
  }
}

TEST(ContractAlg, OraclesGiveSameRun) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const SteinerInstance inst = general_family_instance(seed);
    RunOptions a;
    RunOptions b;
    b.oracle = RankOracle::submodular;
    const RunResult ra = run(inst, a);
    const RunResult rb = run(inst, b);
    EXPECT_EQ(ra.tree.edges, rb.tree.edges);
    EXPECT_EQ(ra.certificate.iterations.size(), rb.certificate.iterations.size());
  }
}

TEST(ContractAlg, QuasiStrategyBound) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SteinerInstance inst = quasi_family_instance(seed);
    RunOptions o;
    o.strategy = SplitStrategy::quasi;
    const RunResult r = run(inst, o);
    EXPECT_LE(r.tree.cost * 60, r.lp.objective * 73);
  }
  RunOptions o;
  o.strategy = SplitStrategy::quasi;
  const SteinerInstance path(4, {0, 3}, {Edge{0, 1, Rational(1)}, Edge{1, 2, Rational(1)}, Edge{2, 3, Rational(1)}});
  EXPECT_THROW(run(path, o), InvalidArgument);
}

TEST(ContractAlg, RestrictedComponentSize) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SteinerInstance inst = general_family_instance(seed);
    RunOptions o;
    o.k = 3;
    const RunResult r = run(inst, o);
    EXPECT_TRUE(is_steiner_tree(inst, r.tree.edges));
    for (const auto& c : r.lp.components) EXPECT_LE(c.size(), 3);
  }
}

TEST(PruneToSteinerTree, DropsCyclesAndSteinerLeaves) {
  // Terminals 0, 1; Steiner 2 (on the path), 3 (dangling), 4 (closing a cycle).
  const SteinerInstance inst(5, {0, 1}, {Edge{0, 2, Rational(1)}, Edge{2, 1, Rational(1)}, Edge{2, 3, Rational(1)},
                                         Edge{0, 4, Rational(2)}, Edge{4, 1, Rational(2)}});
  const SteinerTree t = prune_to_steiner_tree(inst, {0, 1, 2, 3, 4});
  EXPECT_EQ(t.edges, (std::vector<int>{0, 1}));
  EXPECT_EQ(t.cost, 2);
}
