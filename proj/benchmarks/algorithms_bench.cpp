#include <benchmark/benchmark.h>

#include "hypersteiner/bcr_quasi.hpp"
#include "hypersteiner/contract_alg.hpp"
#include "hypersteiner/removal_matroid.hpp"
#include "hypersteiner/verify.hpp"

using namespace hypersteiner;

namespace {

FractionalSolution solve(const SteinerInstance& inst, LpMode mode) {
  return solve_lp_exact(inst, enumerate_components(inst, inst.num_terminals()), LpOptions{mode, 12});
}

// Seeds whose terminal count is 3 + range(0) in the general family.
std::uint64_t seed_for(int extra) { return static_cast<std::uint64_t>(3 * extra + 2); }

void BM_EnumerateComponents(benchmark::State& state) {
  const SteinerInstance inst = general_family_instance(seed_for(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_components(inst, inst.num_terminals()));
  state.counters["terminals"] = inst.num_terminals();
}
BENCHMARK(BM_EnumerateComponents)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_SolveLp(benchmark::State& state) {
  const SteinerInstance inst = general_family_instance(seed_for(static_cast<int>(state.range(0))));
  const auto mode = state.range(1) ? LpMode::cuts : LpMode::full;
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst, mode));
  state.SetLabel(to_string(mode));
}
BENCHMARK(BM_SolveLp)->ArgsProduct({{0, 2, 4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Run(benchmark::State& state) {
  const SteinerInstance inst = general_family_instance(seed_for(static_cast<int>(state.range(0))));
  RunOptions o;
  o.strategy = static_cast<SplitStrategy>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run(inst, o));
  state.SetLabel(to_string(o.strategy));
}
BENCHMARK(BM_Run)->ArgsProduct({{0, 2, 4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_RemovalRank(benchmark::State& state) {
  const SteinerInstance inst = general_family_instance(seed_for(4));
  const BlowupGraph x = build_blowup(inst, solve(inst, LpMode::cuts));
  const auto oracle = static_cast<RankOracle>(state.range(0));
  const RemovalMatroid m(x, 0b111, std::nullopt, oracle);
  EdgeIdSet half;
  for (const auto& e : x.edges()) {
    if (e.id % 2 == 0) half.push_back(e.id);
  }
  for (auto _ : state) benchmark::DoNotOptimize(m.rank(half));
  state.SetLabel(oracle == RankOracle::gammoid ? "gammoid" : "submodular");
  state.counters["edges"] = x.num_edges();
}
BENCHMARK(BM_RemovalRank)->Arg(0)->Arg(1);

void BM_GreedyBasis(benchmark::State& state) {
  const SteinerInstance inst = general_family_instance(seed_for(4));
  const BlowupGraph x = build_blowup(inst, solve(inst, LpMode::cuts));
  const SplitChoice c = choose_splitting_set(x, SplitStrategy::dp);
  const RemovalMatroid m(c.state.graph, 0b111, c.state.k);
  for (auto _ : state) benchmark::DoNotOptimize(m.greedy_max_weight_basis(c.state.weight));
}
BENCHMARK(BM_GreedyBasis);

void BM_OptimalSplitting(benchmark::State& state) {
  const auto [inst, comp] = random_binary_component(static_cast<std::uint64_t>(state.range(0)), 40);
  const BlowupGraph x = single_component_graph(inst, comp);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_splitting_set(x));
  state.counters["edges"] = x.num_edges();
}
BENCHMARK(BM_OptimalSplitting)->Arg(1)->Arg(2)->Arg(3);

void BM_SolveBcr(benchmark::State& state) {
  const SteinerInstance inst = preprocess_quasi(quasi_family_instance(static_cast<std::uint64_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_bcr(inst, inst.terminals().front()));
  state.counters["terminals"] = inst.num_terminals();
}
BENCHMARK(BM_SolveBcr)->Arg(2)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_NaturalDecomposition(benchmark::State& state) {
  const SteinerInstance inst = preprocess_quasi(quasi_family_instance(static_cast<std::uint64_t>(state.range(0))));
  const BcrSolution sol = solve_bcr(inst, inst.terminals().front());
  for (auto _ : state) benchmark::DoNotOptimize(natural_decomposition(inst, sol));
}
BENCHMARK(BM_NaturalDecomposition)->Arg(2)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
