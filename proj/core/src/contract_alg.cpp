#include "hypersteiner/contract_alg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "hypersteiner/error.hpp"

namespace hypersteiner {

Selection select_component(const AlgorithmState& state, RankOracle oracle) {
  const BlowupGraph& x = state.split.graph;
  const auto& pieces = x.pieces();
  // Cheapest piece per terminal set; pieces are ordered by mask, so ties keep the first.
  std::map<TerminalMask, int> cheapest;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (mask_size(pieces[i].terminals) < 2) continue;
    auto it = cheapest.find(pieces[i].terminals);
    if (it == cheapest.end()) {
      cheapest.emplace(pieces[i].terminals, static_cast<int>(i));
    } else if (pieces[i].cost < pieces[static_cast<std::size_t>(it->second)].cost) {
      it->second = static_cast<int>(i);
    }
  }
  std::optional<Selection> best;
  Rational best_score;
  for (const auto& [mask, index] : cheapest) {
    RemovalMatroid m(x, mask, state.split.k, oracle);
    Selection s;
    s.piece = index;
    s.q = mask;
    s.basis = m.greedy_max_weight_basis(state.split.weight);
    for (int id : s.basis) s.weight += state.split.weight.at(id);
    Rational score = s.weight / x.N() - pieces[static_cast<std::size_t>(index)].cost;
    if (!best || score > best_score) {
      best = s;
      best_score = score;
    }
  }
  if (!best) throw InvariantViolation("no component left to contract");
  if (sgn(best_score) < 0) {
    throw InvariantViolation("no component satisfies N cost(Q) <= w(B); best margin " + to_string(best_score));
  }
  return *best;
}

AlgorithmState contract_step(const AlgorithmState& state, const Selection& sel, bool check) {
  const SplittingState& cur = state.split;
  const BlowupGraph& x = cur.graph;
  const Piece& q = x.pieces().at(static_cast<std::size_t>(sel.piece));
  if (q.terminals != sel.q) throw InvalidArgument("selection does not match its piece");
  const std::set<int> b(sel.basis.begin(), sel.basis.end());
  if (static_cast<long>(b.size()) != x.N() * (mask_size(sel.q) - 1)) {
    throw InvariantViolation("removal set has the wrong size");
  }
  for (int id : b) {
    if (!std::binary_search(cur.k.begin(), cur.k.end(), id)) throw InvariantViolation("removal set leaves K");
  }

  IterationRecord rec;
  rec.q = sel.q;
  for (int i = 0; i < state.instance->num_terminals(); ++i) {
    if (mask_contains(sel.q, x.terminal_representative(i))) rec.q_vertices.push_back(state.instance->terminals()[static_cast<std::size_t>(i)]);
  }
  rec.q_cost = q.cost;
  rec.removed = sel.basis;
  rec.removed_weight = sel.weight;
  rec.potential_before = cur.potential;
  for (const auto& [id, w] : cur.witness) {
    if (b.count(id) || w.empty()) continue;
    if (std::all_of(w.begin(), w.end(), [&](int f) { return b.count(f) > 0; })) rec.cleaned.push_back(id);
  }

  if (check) {
    BlowupGraph with_q = add_piece_copies(x, sel.piece);
    if (is_feasible(with_q)) throw InvariantViolation("adding N copies of Q kept the graph feasible");
    if (!is_feasible(with_q.without(sel.basis))) throw InvariantViolation("removal set does not restore feasibility");
  }

  EdgeIdSet gone = rec.removed;
  gone.insert(gone.end(), rec.cleaned.begin(), rec.cleaned.end());
  std::sort(gone.begin(), gone.end());
  BlowupGraph reduced = x.without(gone);
  for (const auto& p : reduced.pieces()) {
    if (mask_size(p.terminals) < 2) throw InvariantViolation("pendant edges survived the cleanup");
  }
  BlowupGraph next = reduced.contracted(sel.q);

  EdgeIdSet k;
  std::set_difference(cur.k.begin(), cur.k.end(), b.begin(), b.end(), std::back_inserter(k));
  AlgorithmState out;
  out.instance = state.instance;
  out.split = compute_witnesses_and_weights(next, k);
  rec.potential_after = out.split.potential;
  if (rec.potential_before - rec.potential_after < rec.removed_weight) {
    throw InvariantViolation("potential dropped by less than the removed weight");
  }

  if (check) {
    if (!is_feasible(next)) throw InvariantViolation("contracted blowup graph is infeasible");
    for (const auto& [id, w] : out.split.witness) {
      EdgeIdSet expect;
      const auto& old = cur.witness.at(id);
      std::set_difference(old.begin(), old.end(), b.begin(), b.end(), std::back_inserter(expect));
      if (expect != w) throw InvariantViolation("witness set of edge " + std::to_string(id) + " changed beyond B");
    }
  }

  std::set<int> tree(state.tree_edges.begin(), state.tree_edges.end());
  for (int i : q.edges) {
    const int orig = x.edges()[static_cast<std::size_t>(i)].original_edge;
    if (orig >= 0) tree.insert(orig);
  }
  out.tree_edges.assign(tree.begin(), tree.end());
  out.log = state.log;
  out.log.push_back(std::move(rec));
  return out;
}

SteinerTree prune_to_steiner_tree(const SteinerInstance& inst, const std::vector<int>& edge_ids) {
  std::vector<int> order = edge_ids;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return inst.edge(a).cost < inst.edge(b).cost; });
  std::vector<int> parent(static_cast<std::size_t>(inst.num_vertices()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    return parent[static_cast<std::size_t>(v)] == v ? v : parent[static_cast<std::size_t>(v)] = find(parent[static_cast<std::size_t>(v)]);
  };
  std::vector<int> kept;
  for (int id : order) {
    int a = find(inst.edge(id).u);
    int b = find(inst.edge(id).v);
    if (a == b) continue;
    parent[static_cast<std::size_t>(a)] = b;
    kept.push_back(id);
  }
  // Strip Steiner leaves until none is left.
  std::vector<int> degree(static_cast<std::size_t>(inst.num_vertices()), 0);
  for (int id : kept) {
    ++degree[static_cast<std::size_t>(inst.edge(id).u)];
    ++degree[static_cast<std::size_t>(inst.edge(id).v)];
  }
  std::vector<char> alive(kept.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (!alive[i]) continue;
      const Edge& e = inst.edge(kept[i]);
      for (int v : {e.u, e.v}) {
        if (alive[i] && !inst.is_terminal(v) && degree[static_cast<std::size_t>(v)] == 1) {
          alive[i] = 0;
          --degree[static_cast<std::size_t>(e.u)];
          --degree[static_cast<std::size_t>(e.v)];
          changed = true;
        }
      }
    }
  }
  SteinerTree tree;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (alive[i]) tree.edges.push_back(kept[i]);
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  tree.cost = edge_set_cost(inst, tree.edges);
  return tree;
}

bool Certificate::potential_drops_cover_weights() const {
  return std::all_of(iterations.begin(), iterations.end(), [](const IterationRecord& r) {
    return r.potential_before - r.potential_after >= r.removed_weight;
  });
}

RunResult run_from_state(const SteinerInstance& inst, const FractionalSolution& lp, const SplitChoice& choice,
                         const RunOptions& options) {
  RunResult res;
  res.lp = lp;
  Certificate& cert = res.certificate;
  cert.lp_value = lp.objective;
  cert.support = static_cast<int>(lp.components.size());
  cert.strategy = options.strategy;
  cert.n = choice.state.graph.N();
  cert.potential = choice.state.potential;
  cert.binarized_potential = choice.binarized_potential;
  cert.fell_back = choice.fell_back;
  if (options.check && !is_feasible(choice.state.graph)) throw InvariantViolation("initial blowup graph is infeasible");

  AlgorithmState state;
  state.instance = &inst;
  state.split = choice.state;
  while (state.split.graph.num_active_terminals() > 1) {
    Selection sel = select_component(state, options.oracle);
    state = contract_step(state, sel, options.check);
  }
  if (!state.split.k.empty()) throw InvariantViolation("core edges left after the last contraction");
  cert.iterations = state.log;
  for (const auto& r : cert.iterations) cert.contracted_cost += r.q_cost;

  res.tree = prune_to_steiner_tree(inst, state.tree_edges);
  if (!is_steiner_tree(inst, res.tree.edges)) throw InvariantViolation("contracted components do not form a Steiner tree");
  cert.tree_cost = res.tree.cost;
  if (cert.tree_cost > cert.contracted_cost) throw InvariantViolation("pruning increased the cost");
  if (cert.contracted_cost * cert.n > cert.potential) {
    throw InvariantViolation("contracted cost exceeds the potential bound");
  }
  return res;
}

RunResult run(const SteinerInstance& inst, const RunOptions& options) {
  if (inst.num_terminals() < 2) {
    RunResult res;
    res.certificate.strategy = options.strategy;
    return res;
  }
  if (!inst.is_connected()) throw InvalidArgument("terminals are not connected");
  if (options.strategy == SplitStrategy::quasi && !inst.is_quasi_bipartite()) {
    throw InvalidArgument("the quasi strategy needs a quasi-bipartite instance");
  }
  const int k = options.k == 0 ? inst.num_terminals() : options.k;
  if (k < 2) throw InvalidArgument("component size bound must be at least 2");
  auto columns = enumerate_components(inst, std::min(k, inst.num_terminals()));
  FractionalSolution lp = solve_lp_exact(inst, columns, options.lp);
  BlowupGraph x = build_blowup(inst, lp);
  SplitChoice choice = choose_splitting_set(x, options.strategy, options.seed);
  return run_from_state(inst, lp, choice, options);
}

}  // namespace hypersteiner
