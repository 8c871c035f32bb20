#include "hypersteiner/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "hypersteiner/error.hpp"
#include "hypersteiner/oracles.hpp"
#include "hypersteiner/removal_matroid.hpp"

namespace hypersteiner {

Rational ln4_bound() { return Rational(277259, 200000); }
Rational quasi_bipartite_bound() { return Rational(73, 60); }

void SuiteResult::fail(const std::string& what) {
  ++failures;
  if (messages.size() < 10) messages.push_back(what);
}

namespace {

using Clock = std::chrono::steady_clock;

class Timer {
 public:
  explicit Timer(SuiteResult& r) : r_(r), start_(Clock::now()) {}
  ~Timer() { r_.seconds = std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  SuiteResult& r_;
  Clock::time_point start_;
};

long count_or(const SuiteOptions& o, long fallback) { return o.count > 0 ? o.count : fallback; }

std::string tag(std::uint64_t seed) { return "seed " + std::to_string(seed) + ": "; }

FractionalSolution solve_lp(const SteinerInstance& inst) {
  return solve_lp_exact(inst, enumerate_components(inst, inst.num_terminals()), LpOptions{LpMode::cuts, 12});
}

EdgeIdSet random_subset(const BlowupGraph& x, std::mt19937_64& rng, double p) {
  std::bernoulli_distribution keep(p);
  EdgeIdSet f;
  for (const auto& e : x.edges()) {
    if (keep(rng)) f.push_back(e.id);
  }
  std::sort(f.begin(), f.end());
  return f;
}

TerminalMask random_mask(TerminalMask active, std::mt19937_64& rng, int min_size) {
  std::vector<int> labels;
  for (int i = 0; i < 64; ++i) {
    if (mask_contains(active, i)) labels.push_back(i);
  }
  while (true) {
    TerminalMask m = 0;
    for (int i : labels) {
      if (rng() & 1) m |= TerminalMask{1} << i;
    }
    if (mask_size(m) >= min_size) return m;
  }
}

// Splits a tree at its terminals into full components.
std::vector<Component> tree_components(const SteinerInstance& inst, const std::vector<int>& edges) {
  std::map<int, int> group;  // Steiner vertex -> group id
  std::vector<int> parent;
  std::function<int(int)> find = [&](int a) { return parent[static_cast<std::size_t>(a)] == a ? a : parent[static_cast<std::size_t>(a)] = find(parent[static_cast<std::size_t>(a)]); };
  auto id_of = [&](int v) {
    auto it = group.find(v);
    if (it != group.end()) return it->second;
    const int g = static_cast<int>(parent.size());
    parent.push_back(g);
    group.emplace(v, g);
    return g;
  };
  for (int e : edges) {
    const Edge& ed = inst.edge(e);
    if (!inst.is_terminal(ed.u) && !inst.is_terminal(ed.v)) {
      const int a = find(id_of(ed.u));
      const int b = find(id_of(ed.v));
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  std::map<int, Component> by_group;
  std::vector<Component> out;
  for (int e : edges) {
    const Edge& ed = inst.edge(e);
    Component* c = nullptr;
    if (inst.is_terminal(ed.u) && inst.is_terminal(ed.v)) {
      out.emplace_back();
      c = &out.back();
    } else {
      const int steiner = inst.is_terminal(ed.u) ? ed.v : ed.u;
      c = &by_group[find(id_of(steiner))];
    }
    c->edges.push_back(e);
    c->cost += ed.cost;
    for (int v : {ed.u, ed.v}) {
      if (inst.is_terminal(v) && !mask_contains(c->terminal_mask, inst.terminal_index(v))) {
        c->terminal_mask |= TerminalMask{1} << inst.terminal_index(v);
        c->terminals.push_back(v);
      }
    }
  }
  for (auto& [g, c] : by_group) out.push_back(std::move(c));
  for (auto& c : out) {
    std::sort(c.terminals.begin(), c.terminals.end());
    std::sort(c.edges.begin(), c.edges.end());
  }
  return out;
}

}  // namespace

SteinerInstance general_family_instance(std::uint64_t seed) {
  const int t = 3 + static_cast<int>((seed / 3) % 6);
  if (seed % 3 != 1) return generate_random_hubs(t, std::min(2 + static_cast<int>(seed % 5), 14 - t), seed);
  return generate_random(t, std::min(2 + static_cast<int>(seed % 5), 14 - t), Rational(1, 3), seed, false);
}

SteinerInstance quasi_family_instance(std::uint64_t seed) {
  const int t = 3 + static_cast<int>((seed / 2) % 5);
  if (seed % 2 == 0) return generate_random_hubs(t, 2 + static_cast<int>(seed % 6), seed);
  return generate_random(t, 2 + static_cast<int>(seed % 5), Rational(1, 2), seed, true);
}

std::pair<SteinerInstance, Component> random_binary_component(std::uint64_t seed, int max_edges) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  // Each Steiner vertex gets degree 2 or 3; leaves are the terminals.
  const int max_steiner = std::max(0, (max_edges - 1) / 2);
  const int m = pick(0, max_steiner);
  std::vector<std::pair<int, int>> links;  // between Steiner vertices, numbered 0..m-1
  std::vector<int> degree(static_cast<std::size_t>(m), 0);
  for (int i = 1; i < m; ++i) {
    int j;
    do {
      j = pick(0, i - 1);
    } while (degree[static_cast<std::size_t>(j)] >= 3);
    links.emplace_back(j, i);
    ++degree[static_cast<std::size_t>(j)];
    ++degree[static_cast<std::size_t>(i)];
  }
  std::vector<int> leaves(static_cast<std::size_t>(m), 0);
  int edges = m - 1;
  for (int i = 0; i < m; ++i) {
    const int need = std::max(0, 2 - degree[static_cast<std::size_t>(i)]);
    leaves[static_cast<std::size_t>(i)] = need;
    edges += need;
  }
  for (int i = 0; i < m && edges < max_edges; ++i) {
    if (degree[static_cast<std::size_t>(i)] + leaves[static_cast<std::size_t>(i)] < 3 && (rng() & 1)) {
      ++leaves[static_cast<std::size_t>(i)];
      ++edges;
    }
  }
  int t = 0;
  for (int l : leaves) t += l;
  std::vector<Edge> list;
  auto cost = [&]() { return Rational(pick(1, 9)); };
  if (m == 0) {
    t = 2;
    list.push_back(Edge{0, 1, cost()});
  } else {
    for (auto [a, b] : links) list.push_back(Edge{t + a, t + b, cost()});
    int next = 0;
    for (int i = 0; i < m; ++i) {
      for (int l = 0; l < leaves[static_cast<std::size_t>(i)]; ++l) list.push_back(Edge{next++, t + i, cost()});
    }
  }
  std::vector<int> terms(static_cast<std::size_t>(t));
  std::iota(terms.begin(), terms.end(), 0);
  SteinerInstance inst(t + m, terms, list);
  Component c;
  c.terminals = terms;
  c.terminal_mask = (TerminalMask{1} << t) - 1;
  for (int e = 0; e < inst.num_edges(); ++e) {
    c.edges.push_back(e);
    c.cost += inst.edge(e).cost;
  }
  return {inst, c};
}

BlowupGraph single_component_graph(const SteinerInstance& inst, const Component& c) {
  BlowupGraph x(inst, 1);
  add_component_copies(x, inst, c, 1);
  return x;
}

namespace {

std::pair<SuiteResult, SuiteResult> run_batch(const SuiteOptions& options, bool quasi) {
  SuiteResult bound;
  SuiteResult potential;
  bound.name = quasi ? "quasi" : "ln4";
  potential.name = "potential";
  const Rational q = quasi ? quasi_bipartite_bound() : ln4_bound();
  const long count = count_or(options, 200);
  long iterations = 0;
  long fractional = 0;
  Rational worst_ratio;
  Rational worst_potential_ratio;
  {
    Timer timer(bound);
    for (long i = 0; i < count; ++i) {
      const std::uint64_t seed = options.first_seed + static_cast<std::uint64_t>(i);
      ++bound.cases;
      try {
        const SteinerInstance inst = quasi ? quasi_family_instance(seed) : general_family_instance(seed);
        RunOptions ro;
        ro.strategy = quasi ? SplitStrategy::quasi : SplitStrategy::dp;
        ro.seed = seed;
        ro.check = options.check;
        const RunResult r = run(inst, ro);
        const Certificate& c = r.certificate;
        if (c.n > 1) ++fractional;
        const Rational blowup_cost = c.lp_value * c.n;
        if (!(r.tree.cost * c.n <= c.potential)) {
          bound.fail(tag(seed) + "tree " + to_string(r.tree.cost) + " exceeds potential/N " + to_string(c.potential / c.n));
        }
        if (!(c.potential <= q * blowup_cost)) {
          bound.fail(tag(seed) + "potential " + to_string(c.potential) + " exceeds bound times N LP " +
                     to_string(q * blowup_cost));
        }
        if (!(r.tree.cost <= q * c.lp_value)) {
          bound.fail(tag(seed) + "tree " + to_string(r.tree.cost) + " exceeds bound times LP");
        }
        if (sgn(c.lp_value) > 0) {
          worst_ratio = std::max(worst_ratio, Rational(r.tree.cost / c.lp_value));
          worst_potential_ratio = std::max(worst_potential_ratio, Rational(c.potential / blowup_cost));
        }
        for (const auto& it : c.iterations) {
          ++potential.cases;
          ++iterations;
          if (!(it.potential_before - it.potential_after >= it.removed_weight)) {
            potential.fail(tag(seed) + "potential dropped by " + to_string(it.potential_before - it.potential_after) +
                           " < w(B) = " + to_string(it.removed_weight));
          }
        }
        if (!c.potential_drops_cover_weights()) potential.fail(tag(seed) + "certificate flags a potential shortfall");
      } catch (const Error& e) {
        bound.fail(tag(seed) + e.what());
      }
    }
  }
  bound.stats["fractional_instances"] = fractional;
  bound.stats["max_tree_over_lp"] = rational_json(worst_ratio);
  bound.stats["max_potential_over_blowup_cost"] = rational_json(worst_potential_ratio);
  bound.stats["bound"] = rational_json(q);
  bound.stats["check"] = options.check;
  potential.stats["iterations"] = iterations;
  potential.stats["check"] = options.check;
  potential.seconds = bound.seconds;
  return {bound, potential};
}

}  // namespace

std::pair<SuiteResult, SuiteResult> certificate_suite(const SuiteOptions& options) { return run_batch(options, false); }
std::pair<SuiteResult, SuiteResult> quasi_certificate_suite(const SuiteOptions& options) { return run_batch(options, true); }

namespace {

// Small feasible blowup graphs: the LP optimum, the LP optimum doubled, or half of
// each of two Steiner trees.
std::optional<BlowupGraph> small_blowup(std::uint64_t seed, int max_edges) {
  const int t = 3 + static_cast<int>(seed % 2);
  const SteinerInstance inst = generate_random(t, 1 + static_cast<int>(seed % 3), Rational(1, 2), seed, false);
  const FractionalSolution lp = solve_lp(inst);
  switch (seed % 3) {
    case 0: {
      BlowupGraph x = build_blowup(inst, lp);
      if (x.num_edges() <= max_edges) return x;
      return std::nullopt;
    }
    case 1: {
      if (lp.blowup_factor() != 1) return std::nullopt;
      BlowupGraph x(inst, 2);
      for (const auto& c : lp.components) add_component_copies(x, inst, c, 2);
      if (x.num_edges() <= max_edges) return x;
      return std::nullopt;
    }
    default: {
      const SteinerTree a = oracles::exact_steiner_tree(inst);
      const SteinerTree b = oracles::mst_two_approx(inst);
      BlowupGraph x(inst, 2);
      for (const auto& c : tree_components(inst, a.edges)) add_component_copies(x, inst, c, 1);
      for (const auto& c : tree_components(inst, b.edges)) add_component_copies(x, inst, c, 1);
      if (x.num_edges() <= max_edges) return x;
      return std::nullopt;
    }
  }
}

}  // namespace

SuiteResult matroid_suite(const SuiteOptions& options) {
  SuiteResult r;
  r.name = "matroid";
  const long want = count_or(options, 50);
  long queries = 0;
  long bases_total = 0;
  Timer timer(r);
  for (std::uint64_t seed = options.first_seed; r.cases < want && seed < options.first_seed + 50 * static_cast<std::uint64_t>(want); ++seed) {
    std::optional<BlowupGraph> maybe;
    try {
      maybe = small_blowup(seed, 10);
    } catch (const Error& e) {
      r.fail(tag(seed) + "building blowup: " + e.what());
      continue;
    }
    if (!maybe) continue;
    const BlowupGraph& x = *maybe;
    ++r.cases;
    try {
      const int m = x.num_edges();
      std::set<TerminalMask> qs{x.active_terminals()};
      for (const auto& p : x.pieces()) {
        if (mask_size(p.terminals) >= 2) qs.insert(p.terminals);
      }
      const SplitChoice split = choose_splitting_set(x, SplitStrategy::dp);
      for (TerminalMask q : qs) {
        ++queries;
        RemovalMatroid mat(x, q, std::nullopt, RankOracle::submodular);
        std::vector<long> rank(std::size_t{1} << m);
        std::vector<EdgeIdSet> subsets(rank.size());
        for (std::uint32_t f = 0; f < rank.size(); ++f) {
          for (int i = 0; i < m; ++i) {
            if ((f >> i) & 1U) subsets[f].push_back(x.edges()[static_cast<std::size_t>(i)].id);
          }
          std::sort(subsets[f].begin(), subsets[f].end());
          rank[f] = mat.rank(subsets[f]);
        }
        const std::string where = tag(seed) + "Q=" + std::to_string(q) + ": ";
        if (rank[0] != 0) r.fail(where + "rank of the empty set is " + std::to_string(rank[0]));
        for (std::uint32_t f = 0; f < rank.size(); ++f) {
          if (rank[f] < 0 || rank[f] > __builtin_popcount(f)) r.fail(where + "rank outside [0, |F|]");
          for (int i = 0; i < m; ++i) {
            const std::uint32_t fi = f | (1U << i);
            if (fi == f) continue;
            if (rank[fi] < rank[f] || rank[fi] > rank[f] + 1) r.fail(where + "rank not unit-increasing");
            for (int j = i + 1; j < m; ++j) {
              const std::uint32_t fj = f | (1U << j);
              if (fj == f) continue;
              if (rank[fi] + rank[fj] < rank[fi | fj] + rank[f]) r.fail(where + "rank not submodular");
            }
          }
        }
        const long full = x.N() * (mask_size(q) - 1);
        if (rank.back() != full) r.fail(where + "rank of E is " + std::to_string(rank.back()) + ", expected " + std::to_string(full));
        std::vector<EdgeIdSet> bases;
        for (std::uint32_t f = 0; f < rank.size(); ++f) {
          if (__builtin_popcount(f) == full && rank[f] == full) bases.push_back(subsets[f]);
        }
        std::sort(bases.begin(), bases.end());
        const auto removals = oracles::enumerate_minimal_removals(x, q);
        bases_total += static_cast<long>(removals.size());
        if (removals != bases) {
          r.fail(where + std::to_string(removals.size()) + " minimal removals vs " + std::to_string(bases.size()) + " bases");
        }
        for (const auto& b : removals) {
          if (static_cast<long>(b.size()) != full) r.fail(where + "minimal removal of size " + std::to_string(b.size()));
        }
        const EdgeIdSet& k = split.state.k;
        if (!split.state.binarized &&
            std::none_of(removals.begin(), removals.end(), [&](const EdgeIdSet& b) {
              return std::includes(k.begin(), k.end(), b.begin(), b.end());
            })) {
          r.fail(where + "no minimal removal inside the splitting set");
        }
      }
    } catch (const Error& e) {
      r.fail(tag(seed) + e.what());
    }
  }
  r.stats["queries"] = queries;
  r.stats["bases"] = bases_total;
  if (r.cases < want) r.fail("only " + std::to_string(r.cases) + " small blowup graphs found");
  return r;
}

SuiteResult gammoid_suite(const SuiteOptions& options) {
  SuiteResult r;
  r.name = "gammoid";
  const long want = count_or(options, 10000);
  const long per_graph = 100;
  long brute = 0;
  Timer timer(r);
  for (std::uint64_t seed = options.first_seed; r.cases < want; ++seed) {
    try {
      const SteinerInstance inst = seed % 2 ? generate_random(3 + static_cast<int>(seed % 5), 3, Rational(1, 3), seed, false)
                                            : generate_random_hubs(3 + static_cast<int>(seed % 4), 4, seed);
      const BlowupGraph x = build_blowup(inst, solve_lp(inst));
      std::mt19937_64 rng(seed);
      for (long i = 0; i < per_graph && r.cases < want; ++i) {
        const TerminalMask q = random_mask(x.active_terminals(), rng, 2);
        const EdgeIdSet f = random_subset(x, rng, std::uniform_real_distribution<double>(0.05, 0.6)(rng));
        RemovalMatroid by_flow(x, q, std::nullopt, RankOracle::gammoid);
        RemovalMatroid by_slack(x, q, std::nullopt, RankOracle::submodular);
        ++r.cases;
        const long a = by_flow.rank(f);
        const long b = by_slack.rank(f);
        if (a != b) r.fail(tag(seed) + "gammoid rank " + std::to_string(a) + " vs submodular rank " + std::to_string(b));
        if (i % 10 == 0) {
          ++brute;
          const long c = oracles::min_slack_over_supersets(x, f, q);
          if (c != b) r.fail(tag(seed) + "submodular rank " + std::to_string(b) + " vs brute force " + std::to_string(c));
        }
      }
    } catch (const Error& e) {
      ++r.cases;
      r.fail(tag(seed) + e.what());
    }
  }
  r.stats["brute_force_checks"] = brute;
  return r;
}

SuiteResult separation_suite(const SuiteOptions& options) {
  SuiteResult r;
  r.name = "separation";
  const long want = count_or(options, 1000);
  long skipped = 0;
  int max_terminals = 0;
  Timer timer(r);
  for (std::uint64_t seed = options.first_seed; r.cases < want; ++seed) {
    try {
      const int t = 3 + static_cast<int>(seed % 8);
      const SteinerInstance inst = seed % 3 == 0 ? generate_random_hubs(t, 3, seed)
                                                 : generate_random(t, 3, Rational(1, 3), seed, false);
      const BlowupGraph x = build_blowup(inst, solve_lp(inst));
      max_terminals = std::max(max_terminals, x.num_active_terminals());
      std::mt19937_64 rng(seed);
      for (int i = 0; i < 10 && r.cases < want; ++i) {
        const EdgeIdSet f = i == 0 ? EdgeIdSet{} : random_subset(x, rng, 0.15);
        SeparationDigraph d = build_separation_digraph(x, f);
        if (d.deficient) {
          ++skipped;
          continue;
        }
        const TerminalMask q = random_mask(x.active_terminals(), rng, 1);
        ++r.cases;
        const MinSlack ms = min_slack_in_digraph(d, x.active_terminals(), q);
        const long expected = oracles::min_slack_over_supersets(x, f, q);
        const long identity = ms.flow - d.y_total - d.n;
        if (identity != expected || ms.value != expected) {
          r.fail(tag(seed) + "flow - y(R) - N = " + std::to_string(identity) + ", reported " + std::to_string(ms.value) +
                 ", brute force " + std::to_string(expected));
        }
        if ((ms.argmin & q) != q || oracles::slack(x, f, ms.argmin) != expected) {
          r.fail(tag(seed) + "reported minimizer does not attain the minimum");
        }
      }
    } catch (const Error& e) {
      ++r.cases;
      r.fail(tag(seed) + e.what());
    }
  }
  r.stats["deficient_skipped"] = skipped;
  r.stats["max_terminals"] = max_terminals;
  return r;
}

SuiteResult uniform_point_suite(const SuiteOptions& options) {
  SuiteResult r;
  r.name = "uniform";
  const long want = count_or(options, 20);
  long sets = 0;
  std::size_t largest_k = 0;
  Timer timer(r);
  for (std::uint64_t seed = options.first_seed; r.cases < want && seed < options.first_seed + 40 * static_cast<std::uint64_t>(want); ++seed) {
    try {
      const int t = 5 + static_cast<int>(seed % 3);
      const SteinerInstance inst = seed % 2 ? generate_random_hubs(t, t, seed)
                                            : generate_random(t, 4, Rational(1, 3), seed, false);
      const BlowupGraph x0 = build_blowup(inst, solve_lp(inst));
      const SplitChoice choice = choose_splitting_set(x0, SplitStrategy::dp);
      const BlowupGraph& x = choice.state.graph;
      const EdgeIdSet& k = choice.state.k;
      if (k.empty() || k.size() > 14) continue;
      ++r.cases;
      largest_k = std::max(largest_k, k.size());
      UniformPointOptions uo;
      uo.max_exhaustive = 14;
      const UniformPointReport rep = verify_uniform_point(x, k, uo);
      if (!rep.ok || !rep.exhaustive) {
        r.fail(tag(seed) + (rep.failures.empty() ? std::string("uniform point not verified exhaustively") : rep.failures.front()));
      }
      const std::uint32_t subsets = std::uint32_t{1} << k.size();
      for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        EdgeIdSet f;
        for (std::size_t i = 0; i < k.size(); ++i) {
          if ((mask >> i) & 1U) f.push_back(k[i]);
        }
        ++sets;
        const Claim1Report c = verify_claim1(x, k, f);
        if (!c.holds()) {
          r.fail(tag(seed) + "covering inequality fails on |F| = " + std::to_string(f.size()) + " (" +
                 std::to_string(c.lhs) + " < " + std::to_string(c.rhs) + ")");
        }
        if (oracles::slack(x, f, x.active_terminals()) != static_cast<long>(f.size())) {
          r.fail(tag(seed) + "h(R) differs from |F| after removing F");
        }
      }
    } catch (const Error& e) {
      ++r.cases;
      r.fail(tag(seed) + e.what());
    }
  }
  r.stats["sets_checked"] = sets;
  r.stats["largest_k"] = largest_k;
  if (r.cases < want) r.fail("only " + std::to_string(r.cases) + " instances had |K| <= 14");
  return r;
}

SuiteResult dp_suite(const SuiteOptions& options) {
  SuiteResult r;
  r.name = "dp";
  const long want = count_or(options, 100);
  long splitting_sets = 0;
  Timer timer(r);
  for (long i = 0; i < want; ++i) {
    const std::uint64_t seed = options.first_seed + static_cast<std::uint64_t>(i);
    ++r.cases;
    try {
      const auto [inst, comp] = random_binary_component(seed, 8);
      const BlowupGraph x = single_component_graph(inst, comp);
      const SplittingState dp = optimal_splitting_set(x);
      const Rational best = oracles::min_potential_exhaustive(x);
      if (dp.potential != best) {
        r.fail(tag(seed) + "dp potential " + to_string(dp.potential) + " vs exhaustive minimum " + to_string(best));
      }
      const auto all = oracles::enumerate_splitting_sets(x);
      splitting_sets += static_cast<long>(all.size());
      if (static_cast<long>(all.size()) != oracles::count_splitting_sets(x)) {
        r.fail(tag(seed) + "splitting set count differs from the matrix-tree count");
      }
      for (const auto& k : all) {
        if (!is_splitting_set(x, k)) r.fail(tag(seed) + "enumerated set rejected as splitting set");
        const SplittingState s = compute_witnesses_and_weights(x, k);
        const Rational phi = oracles::potential_by_search(x, k);
        if (s.potential != phi) {
          r.fail(tag(seed) + "witness potential " + to_string(s.potential) + " vs search " + to_string(phi));
        }
        Rational total;
        for (const auto& [id, w] : s.weight) total += w;
        if (total != x.cost()) r.fail(tag(seed) + "core weights do not sum to the cost");
      }
    } catch (const Error& e) {
      r.fail(tag(seed) + e.what());
    }
  }
  r.stats["splitting_sets"] = splitting_sets;
  return r;
}

SuiteResult random_splitting_suite(const SuiteOptions& options) {
  SuiteResult r;
  r.name = "random-k";
  const long samples = count_or(options, 100000);
  const double ln4 = std::log(4.0);
  Json rows = Json::array();
  Timer timer(r);
  for (std::uint64_t c = 0; c < 5; ++c) {
    const std::uint64_t seed = 1000 + options.first_seed + c;
    ++r.cases;
    try {
      std::pair<SteinerInstance, Component> pc = random_binary_component(seed, 12);
      for (std::uint64_t extra = 1; pc.second.edges.size() < 9; ++extra) pc = random_binary_component(seed + 7919 * extra, 12);
      const BlowupGraph x = single_component_graph(pc.first, pc.second);
      const double cost = to_double(x.cost());
      double sum = 0;
      double sum_sq = 0;
      for (long s = 0; s < samples; ++s) {
        const double phi = to_double(random_splitting_set(x, static_cast<std::uint64_t>(s) + 1).potential) / cost;
        sum += phi;
        sum_sq += phi * phi;
      }
      const double mean = sum / static_cast<double>(samples);
      const double var = std::max(0.0, sum_sq / static_cast<double>(samples) - mean * mean);
      const double se = std::sqrt(var / static_cast<double>(samples));
      Json row;
      row["edges"] = x.num_edges();
      row["mean_potential_over_cost"] = mean;
      row["standard_error"] = se;
      rows.push_back(row);
      if (mean > ln4 + 3 * se) {
        r.fail("component " + std::to_string(c) + ": mean potential/cost " + std::to_string(mean) +
               " exceeds ln 4 by more than three standard errors");
      }
    } catch (const Error& e) {
      r.fail("component " + std::to_string(c) + ": " + e.what());
    }
  }
  r.stats["samples"] = samples;
  r.stats["components"] = rows;
  r.stats["statistical"] = true;
  return r;
}

namespace {

Partition random_partition(int n, std::mt19937_64& rng) {
  std::vector<SubsetMask> blocks;
  for (int u = 0; u < n; ++u) {
    const std::size_t b = std::uniform_int_distribution<std::size_t>(0, blocks.size())(rng);
    if (b == blocks.size()) {
      blocks.push_back(SubsetMask{1} << u);
    } else {
      blocks[b] |= SubsetMask{1} << u;
    }
  }
  return blocks;
}

bool coarsens(const Partition& fine, const Partition& coarse) {
  if (coarse.size() >= fine.size()) return false;
  return std::all_of(fine.begin(), fine.end(), [&](SubsetMask b) {
    return std::any_of(coarse.begin(), coarse.end(), [&](SubsetMask c) { return (b & ~c) == 0; });
  });
}

}  // namespace

SuiteResult partition_suite(const SuiteOptions& options) {
  SuiteResult r;
  r.name = "partition";
  const long want = count_or(options, 100);
  long slack_based = 0;
  Timer timer(r);
  for (std::uint64_t seed = options.first_seed; r.cases < want; ++seed) {
    std::mt19937_64 rng(seed);
    const int n = 2 + static_cast<int>(seed % 5);
    std::vector<Rational> table(std::size_t{1} << n);
    try {
      if (seed % 2 == 0) {
        const SteinerInstance inst = generate_random(n, 3, Rational(1, 3), seed, false);
        const BlowupGraph x = build_blowup(inst, solve_lp(inst));
        const SetFunction h = slack_function(x, random_subset(x, rng, 0.2));
        table = h.table();
        ++slack_based;
      }
      const int terms = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int i = 0; i < terms; ++i) {
        const Partition p = random_partition(n, rng);
        const Rational a(std::uniform_int_distribution<int>(1, 6)(rng), std::uniform_int_distribution<int>(1, 3)(rng));
        for (SubsetMask s = 0; s < table.size(); ++s) table[s] += a * partition_function_eval(p, s);
      }
      for (auto& v : table) v.canonicalize();
      const SetFunction h(n, table);
      if (!h.is_nonnegative() || !h.is_intersecting_submodular()) continue;
      ++r.cases;
      const PartitionDecomposition f = decompose(h);
      for (SubsetMask s = 1; s < table.size(); ++s) {
        if (f(s) > h(s)) {
          r.fail(tag(seed) + "f exceeds h on " + std::to_string(s));
          break;
        }
      }
      if (f(h.ground()) != h(h.ground())) r.fail(tag(seed) + "f(U) differs from h(U)");
      if (static_cast<int>(f.terms.size()) > n - 1) r.fail(tag(seed) + std::to_string(f.terms.size()) + " terms for |U| = " + std::to_string(n));
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (sgn(f.terms[i].first) <= 0) r.fail(tag(seed) + "nonpositive multiplier");
        if (i + 1 < f.terms.size() && !coarsens(f.terms[i].second, f.terms[i + 1].second)) {
          r.fail(tag(seed) + "partition " + std::to_string(i + 1) + " does not strictly coarsen partition " + std::to_string(i));
        }
      }
    } catch (const Error& e) {
      ++r.cases;
      r.fail(tag(seed) + e.what());
    }
  }
  r.stats["slack_based"] = slack_based;
  return r;
}

SuiteResult bcr_suite(const SuiteOptions& options) {
  SuiteResult r;
  r.name = "bcr";
  const long want = count_or(options, 100);
  long fractional = 0;
  Timer timer(r);
  for (long i = 0; i < want; ++i) {
    const std::uint64_t seed = options.first_seed + static_cast<std::uint64_t>(i);
    ++r.cases;
    try {
      const SteinerInstance original = quasi_family_instance(seed);
      const SteinerInstance inst = preprocess_quasi(original);
      const FractionalSolution lp = solve_lp(inst);
      if (lp.blowup_factor() > 1) ++fractional;
      if (solve_lp(original).objective != lp.objective) r.fail(tag(seed) + "preprocessing changed the LP value");
      const int t = inst.num_terminals();
      const int root = inst.terminals()[static_cast<std::size_t>(seed % static_cast<std::uint64_t>(t))];
      const BcrSolution sol = solve_bcr(inst, root);
      if (sol.objective != lp.objective) {
        r.fail(tag(seed) + "BCR " + to_string(sol.objective) + " vs LP " + to_string(lp.objective));
      }
      const FractionalSolution dec = natural_decomposition(inst, sol, options.check);
      if (dec.objective != lp.objective || !is_lp_feasible(dec.weighted(), t)) {
        r.fail(tag(seed) + "decomposition is not an LP optimum");
      }
      const int other = inst.terminals()[static_cast<std::size_t>((seed + 1) % static_cast<std::uint64_t>(t))];
      if (solve_bcr(inst, other).objective != sol.objective) r.fail(tag(seed) + "BCR value depends on the root");
      const BcrSolution moved = relocate_root(inst, sol, other);
      Rational moved_cost;
      for (std::size_t a = 0; a < moved.x.size(); ++a) {
        moved_cost += inst.edge(static_cast<int>(a / 2)).cost * moved.x[a];
        if (a % 2 == 0 && moved.x[a] + moved.x[a + 1] != sol.x[a] + sol.x[a + 1]) {
          r.fail(tag(seed) + "relocation changed an undirected load");
          break;
        }
      }
      if (moved_cost != sol.objective || !is_bcr_feasible(inst, moved)) r.fail(tag(seed) + "relocated solution is not a BCR optimum");
    } catch (const Error& e) {
      r.fail(tag(seed) + e.what());
    }
  }
  r.stats["fractional_instances"] = fractional;
  return r;
}

SuiteResult bounds_suite(const SuiteOptions& options) {
  SuiteResult r;
  r.name = "bounds";
  const long want = count_or(options, 100);
  Rational max_gap;
  long exhaustive_checks = 0;
  Timer timer(r);
  for (long i = 0; i < want; ++i) {
    const std::uint64_t seed = options.first_seed + static_cast<std::uint64_t>(i);
    const bool quasi = i % 2 == 1;
    ++r.cases;
    try {
      const SteinerInstance inst = quasi ? quasi_family_instance(seed) : general_family_instance(seed);
      RunOptions ro;
      ro.strategy = quasi ? SplitStrategy::quasi : SplitStrategy::dp;
      ro.seed = seed;
      const RunResult run_result = run(inst, ro);
      const Rational bound = quasi ? quasi_bipartite_bound() : ln4_bound();
      const Rational& lp = run_result.lp.objective;
      const SteinerTree exact = oracles::exact_steiner_tree(inst);
      const Rational& tree = run_result.tree.cost;
      if (!(lp <= exact.cost && exact.cost <= tree && tree <= bound * lp)) {
        r.fail(tag(seed) + "chain lp <= exact <= tree <= bound lp fails: " + to_string(lp) + ", " + to_string(exact.cost) +
               ", " + to_string(tree));
      }
      if (!is_steiner_tree(inst, run_result.tree.edges) || !is_steiner_tree(inst, exact.edges)) {
        r.fail(tag(seed) + "returned edge set is not a Steiner tree");
      }
      if (sgn(lp) > 0) {
        const Rational gap = exact.cost / lp;
        if (gap < 1) r.fail(tag(seed) + "integrality gap below one");
        max_gap = std::max(max_gap, gap);
      }
      const SteinerTree mst = oracles::mst_two_approx(inst);
      if (mst.cost > 2 * exact.cost) r.fail(tag(seed) + "terminal MST exceeds twice the optimum");
      if (inst.num_edges() <= 16) {
        ++exhaustive_checks;
        if (oracles::exhaustive_steiner_tree(inst).cost != exact.cost) r.fail(tag(seed) + "Dreyfus-Wagner disagrees with enumeration");
      }
    } catch (const Error& e) {
      r.fail(tag(seed) + e.what());
    }
  }
  r.stats["max_integrality_gap"] = rational_json(max_gap);
  r.stats["exhaustive_checks"] = exhaustive_checks;
  return r;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"ln4",        "quasi",   "potential", "matroid",   "gammoid", "separation",
                                              "uniform",    "dp",      "random-k",  "partition", "bcr",     "bounds"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
  if (name == "ln4") return certificate_suite(options).first;
  if (name == "quasi") return quasi_certificate_suite(options).first;
  if (name == "potential") {
    auto a = certificate_suite(options).second;
    auto b = quasi_certificate_suite(options).second;
    a.cases += b.cases;
    a.failures += b.failures;
    for (auto& m : b.messages) {
      if (a.messages.size() < 10) a.messages.push_back(m);
    }
    a.seconds += b.seconds;
    a.stats["iterations"] = a.cases;
    return a;
  }
  if (name == "matroid") return matroid_suite(options);
  if (name == "gammoid") return gammoid_suite(options);
  if (name == "separation") return separation_suite(options);
  if (name == "uniform") return uniform_point_suite(options);
  if (name == "dp") return dp_suite(options);
  if (name == "random-k") return random_splitting_suite(options);
  if (name == "partition") return partition_suite(options);
  if (name == "bcr") return bcr_suite(options);
  if (name == "bounds") return bounds_suite(options);
  throw InvalidArgument("unknown suite '" + name + "'");
}

Json suite_json(const SuiteResult& r) {
  Json j;
  j["suite"] = r.name;
  j["passed"] = r.passed();
  j["cases"] = r.cases;
  j["failures"] = r.failures;
  j["messages"] = r.messages;
  j["stats"] = r.stats;
  return j;
}

}  // namespace hypersteiner
