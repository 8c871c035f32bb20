#include "hypersteiner/splitting.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <tuple>

#include "hypersteiner/error.hpp"

namespace hypersteiner {

SplitStrategy parse_split_strategy(const std::string& text) {
  if (text == "random") return SplitStrategy::random;
  if (text == "dp") return SplitStrategy::dp;
  if (text == "quasi") return SplitStrategy::quasi;
  throw InvalidArgument("unknown strategy '" + text + "' (expected random, dp or quasi)");
}

std::string to_string(SplitStrategy strategy) {
  switch (strategy) {
    case SplitStrategy::random: return "random";
    case SplitStrategy::dp: return "dp";
    case SplitStrategy::quasi: return "quasi";
  }
  return "?";
}

namespace {

// Incident (edge index, neighbour) pairs per vertex, restricted to one piece.
struct LocalTree {
  std::map<int, std::vector<std::pair<int, int>>> adj;
};

LocalTree local_tree(const BlowupGraph& x, const Piece& p) {
  LocalTree t;
  for (int i : p.edges) {
    const auto& e = x.edges()[static_cast<std::size_t>(i)];
    t.adj[e.u].emplace_back(i, e.v);
    t.adj[e.v].emplace_back(i, e.u);
  }
  return t;
}

EdgeIdSet complement_ids(const BlowupGraph& x, const std::vector<char>& cleanup) {
  EdgeIdSet k;
  for (std::size_t i = 0; i < x.edges().size(); ++i) {
    if (!cleanup[i]) k.push_back(x.edges()[i].id);
  }
  std::sort(k.begin(), k.end());
  return k;
}

void require_binary(const BlowupGraph& x, const LocalTree& t) {
  for (const auto& [v, nbrs] : t.adj) {
    if (!x.is_terminal_vertex(v) && nbrs.size() > 3) {
      throw InvalidArgument("Steiner vertex " + std::to_string(v) + " has degree " + std::to_string(nbrs.size()) +
                            "; binarize the graph first");
    }
  }
}

}  // namespace

BlowupGraph binarize(const BlowupGraph& x) {
  BlowupGraph out = x;
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(x.num_vertices()));
  for (const auto& e : x.edges()) {
    incident[static_cast<std::size_t>(e.u)].push_back(e.id);
    incident[static_cast<std::size_t>(e.v)].push_back(e.id);
  }
  for (int v = 0; v < x.num_vertices(); ++v) {
    auto ids = incident[static_cast<std::size_t>(v)];
    const int d = static_cast<int>(ids.size());
    if (x.is_terminal_vertex(v) || d <= 3) continue;
    std::sort(ids.begin(), ids.end());
    const int copy = x.edge_by_id(ids[0]).copy;
    int prev = v;
    for (int i = 1; i <= d - 3; ++i) {
      const int w = out.add_vertex(x.vertex_origin(v));
      out.add_edge(prev, w, Rational(0), -1, copy);
      out.rewire_edge(ids[static_cast<std::size_t>(i + 1)], v, w);
      if (i == d - 3) out.rewire_edge(ids[static_cast<std::size_t>(d - 1)], v, w);
      prev = w;
    }
  }
  return out;
}

SplittingState compute_witnesses_and_weights(const BlowupGraph& x, const EdgeIdSet& k) {
  if (!is_splitting_set(x, k)) throw InvalidArgument("K is not a splitting set of the blowup graph");
  const std::size_t m = x.edges().size();
  std::vector<char> in_k(m, 0);
  for (int id : k) in_k[static_cast<std::size_t>(x.index_of(id))] = 1;

  std::vector<std::vector<int>> inc(static_cast<std::size_t>(x.num_vertices()));
  for (std::size_t i = 0; i < m; ++i) {
    inc[static_cast<std::size_t>(x.edges()[i].u)].push_back(static_cast<int>(i));
    inc[static_cast<std::size_t>(x.edges()[i].v)].push_back(static_cast<int>(i));
  }
  // Orient the cleanup forest towards its terminals.
  std::vector<int> parent_edge(static_cast<std::size_t>(x.num_vertices()), -1);
  std::vector<int> order;
  std::vector<char> seen(static_cast<std::size_t>(x.num_vertices()), 0);
  std::queue<int> queue;
  for (int t = 0; t < x.num_terminals(); ++t) {
    seen[static_cast<std::size_t>(t)] = 1;
    queue.push(t);
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop();
    order.push_back(u);
    for (int i : inc[static_cast<std::size_t>(u)]) {
      if (in_k[static_cast<std::size_t>(i)]) continue;
      int w = x.edges()[static_cast<std::size_t>(i)].other(u);
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      parent_edge[static_cast<std::size_t>(w)] = i;
      queue.push(w);
    }
  }

  SplittingState st;
  st.graph = x;
  st.k = k;
  std::sort(st.k.begin(), st.k.end());
  std::vector<EdgeIdSet> below(static_cast<std::size_t>(x.num_vertices()));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (x.is_terminal_vertex(v)) continue;
    auto& set = below[static_cast<std::size_t>(v)];
    for (int i : inc[static_cast<std::size_t>(v)]) {
      if (in_k[static_cast<std::size_t>(i)]) set.push_back(x.edges()[static_cast<std::size_t>(i)].id);
    }
    const int pe = parent_edge[static_cast<std::size_t>(v)];
    const int up = x.edges()[static_cast<std::size_t>(pe)].other(v);
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    st.witness[x.edges()[static_cast<std::size_t>(pe)].id] = set;
    if (!x.is_terminal_vertex(up)) {
      auto& target = below[static_cast<std::size_t>(up)];
      target.insert(target.end(), set.begin(), set.end());
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& e = x.edges()[i];
    if (in_k[i]) {
      st.witness[e.id] = {e.id};
      st.weight[e.id] += e.cost;
    } else if (!st.witness.count(e.id)) {
      throw InvariantViolation("cleanup edge " + std::to_string(e.id) + " is not on a cleanup path");
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& e = x.edges()[i];
    const auto& w = st.witness[e.id];
    if (w.empty()) throw InvariantViolation("edge " + std::to_string(e.id) + " is pendant");
    st.potential += e.cost * harmonic(static_cast<int>(w.size()));
    if (in_k[i]) continue;
    const Rational share = e.cost / static_cast<long>(w.size());
    for (int f : w) st.weight[f] += share;
  }
  Rational total;
  for (const auto& [id, w] : st.weight) total += w;
  if (total != x.cost()) throw InvariantViolation("core weights do not add up to the cost of the blowup graph");
  st.binarized = std::any_of(x.edges().begin(), x.edges().end(), [](const BlowupEdge& e) { return e.original_edge < 0; });
  return st;
}

SplittingState random_splitting_set(const BlowupGraph& x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<char> cleanup(x.edges().size(), 0);
  for (const auto& p : x.pieces()) {
    auto t = local_tree(x, p);
    require_binary(x, t);
    const int root_edge = x.index_of(p.min_edge_id);
    std::set<int> used{root_edge};
    std::queue<int> queue;
    queue.push(x.edges()[static_cast<std::size_t>(root_edge)].u);
    queue.push(x.edges()[static_cast<std::size_t>(root_edge)].v);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      if (x.is_terminal_vertex(u)) continue;
      std::vector<std::pair<int, int>> out;
      for (const auto& [i, w] : t.adj[u]) {
        if (!used.count(i)) out.emplace_back(i, w);
      }
      std::sort(out.begin(), out.end());
      if (out.empty()) throw InvalidArgument("piece has a Steiner leaf");
      const std::size_t pick = out.size() == 1 ? 0 : static_cast<std::size_t>(rng() & 1);
      cleanup[static_cast<std::size_t>(out[pick].first)] = 1;
      for (const auto& [i, w] : out) {
        used.insert(i);
        queue.push(w);
      }
    }
  }
  return compute_witnesses_and_weights(x, complement_ids(x, cleanup));
}

namespace {

using Slot = std::optional<Rational>;

void relax(Slot& slot, const Rational& v) {
  if (!slot || v < *slot) slot = v;
}

struct Tables {
  std::vector<Slot> a;  // terminal of the top cluster lies below; index alpha
  std::vector<Slot> b;  // terminal lies above; index beta
  explicit Tables(std::size_t m = 0) : a(m + 1), b(m + 1) {}
};

class PieceDp {
 public:
  PieceDp(const BlowupGraph& x, const Piece& p) : x_(x), m_(p.edges.size()), tree_(local_tree(x, p)) {
    require_binary(x, tree_);
    root_ = p.root;
    if (!x.is_terminal_vertex(root_) || tree_.adj[root_].size() != 1) {
      throw InvalidArgument("piece root must be a terminal leaf");
    }
    // Children in increasing edge index.
    std::vector<int> stack{root_};
    std::map<int, int> parent{{root_, -1}};
    std::vector<int> preorder;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      preorder.push_back(u);
      for (const auto& [i, w] : tree_.adj[u]) {
        if (i == parent[u]) continue;
        if (parent.count(w)) throw InvalidArgument("piece is not a tree");
        parent[w] = i;
        children_[u].emplace_back(i, w);
        stack.push_back(w);
      }
      std::sort(children_[u].begin(), children_[u].end());
    }
    for (auto it = preorder.rbegin(); it != preorder.rend(); ++it) solve_node(*it);
  }

  Rational value() const { return root_value_; }

  void mark_cleanup(std::vector<char>& cleanup) const {
    const auto [i, v] = children_.at(root_).front();
    const Rational c = cost(i);
    const Tables& tv = node_.at(v);
    if (tv.a[1] && c + *tv.a[1] == root_value_) {
      assign(v, true, 1, cleanup);
      return;
    }
    for (std::size_t beta = 1; beta <= m_; ++beta) {
      if (tv.b[beta] && c * harmonic(static_cast<int>(beta)) + *tv.b[beta] == root_value_) {
        cleanup[static_cast<std::size_t>(i)] = 1;
        assign(v, false, beta, cleanup);
        return;
      }
    }
    throw InvariantViolation("splitting set reconstruction failed at the root");
  }

 private:
  Rational cost(int i) const { return x_.edges()[static_cast<std::size_t>(i)].cost; }

  Tables branch(int i, int v) const {
    const Rational c = cost(i);
    const Tables& tv = node_.at(v);
    Tables out(m_);
    for (std::size_t k = 1; k <= m_; ++k) {
      const Rational h = c * harmonic(static_cast<int>(k));
      if (tv.a[k]) out.a[k] = h + *tv.a[k];
      if (tv.b[k]) out.b[k] = h + *tv.b[k];
    }
    if (tv.a[1]) relax(out.b[1], c + *tv.a[1]);
    return out;
  }

  Tables merge(const Tables& p, const Tables& br) const {
    Tables out(m_);
    for (std::size_t b1 = 1; b1 <= m_; ++b1) {
      for (std::size_t b2 = 1; b1 + b2 <= m_; ++b2) {
        if (p.b[b1] && br.b[b2]) relax(out.b[b1 + b2], *p.b[b1] + *br.b[b2]);
      }
    }
    for (std::size_t alpha = 1; alpha <= m_; ++alpha) {
      for (std::size_t beta = 1; alpha + beta <= m_; ++beta) {
        if (p.a[alpha + beta] && br.b[beta]) relax(out.a[alpha], *p.a[alpha + beta] + *br.b[beta]);
        if (p.b[beta] && br.a[alpha + beta]) relax(out.a[alpha], *p.b[beta] + *br.a[alpha + beta]);
      }
    }
    return out;
  }

  void solve_node(int v) {
    if (v == root_) {
      const auto [i, child] = children_.at(root_).front();
      const Rational c = cost(i);
      const Tables& tv = node_.at(child);
      Slot best;
      if (tv.a[1]) relax(best, c + *tv.a[1]);
      for (std::size_t beta = 1; beta <= m_; ++beta) {
        if (tv.b[beta]) relax(best, c * harmonic(static_cast<int>(beta)) + *tv.b[beta]);
      }
      if (!best) throw InvariantViolation("piece admits no splitting set");
      root_value_ = *best;
      return;
    }
    if (x_.is_terminal_vertex(v)) {
      Tables leaf(m_);
      for (std::size_t k = 1; k <= m_; ++k) leaf.a[k] = Rational(0);
      node_[v] = leaf;
      return;
    }
    const auto& kids = children_[v];
    if (kids.empty()) throw InvalidArgument("piece has a Steiner leaf");
    auto& pre = prefix_[v];
    auto& brs = branch_[v];
    for (const auto& [i, w] : kids) {
      brs.push_back(branch(i, w));
      pre.push_back(pre.empty() ? brs.back() : merge(pre.back(), brs.back()));
    }
    node_[v] = pre.back();
  }

  // Fixes the configuration below v for the given table entry.
  void assign(int v, bool type_a, std::size_t idx, std::vector<char>& cleanup) const {
    if (x_.is_terminal_vertex(v)) {
      if (!type_a) throw InvariantViolation("terminal leaf reached with its terminal above");
      return;
    }
    const auto& kids = children_.at(v);
    const auto& pre = prefix_.at(v);
    const auto& brs = branch_.at(v);
    for (std::size_t j = kids.size(); j-- > 0;) {
      const Tables& here = pre[j];
      const Rational target = *(type_a ? here.a[idx] : here.b[idx]);
      if (j == 0) {
        assign_branch(kids[0], brs[0], type_a, idx, target, cleanup);
        return;
      }
      const Tables& before = pre[j - 1];
      const Tables& br = brs[j];
      bool done = false;
      if (!type_a) {
        for (std::size_t b1 = 1; b1 < idx && !done; ++b1) {
          const std::size_t b2 = idx - b1;
          if (before.b[b1] && br.b[b2] && *before.b[b1] + *br.b[b2] == target) {
            assign_branch(kids[j], br, false, b2, *br.b[b2], cleanup);
            idx = b1;
            done = true;
          }
        }
      } else {
        for (std::size_t beta = 1; idx + beta <= m_ && !done; ++beta) {
          if (before.a[idx + beta] && br.b[beta] && *before.a[idx + beta] + *br.b[beta] == target) {
            assign_branch(kids[j], br, false, beta, *br.b[beta], cleanup);
            idx += beta;
            done = true;
          } else if (before.b[beta] && br.a[idx + beta] && *before.b[beta] + *br.a[idx + beta] == target) {
            assign_branch(kids[j], br, true, idx + beta, *br.a[idx + beta], cleanup);
            type_a = false;
            idx = beta;
            done = true;
          }
        }
      }
      if (!done) throw InvariantViolation("splitting set reconstruction failed");
    }
  }

  void assign_branch(const std::pair<int, int>& kid, const Tables& br, bool type_a, std::size_t idx,
                     const Rational& target, std::vector<char>& cleanup) const {
    (void)br;
    const auto [i, v] = kid;
    const Rational c = cost(i);
    const Tables& tv = node_.at(v);
    if (type_a) {
      cleanup[static_cast<std::size_t>(i)] = 1;
      assign(v, true, idx, cleanup);
      return;
    }
    if (idx == 1 && tv.a[1] && c + *tv.a[1] == target) {
      assign(v, true, 1, cleanup);
      return;
    }
    if (!tv.b[idx] || c * harmonic(static_cast<int>(idx)) + *tv.b[idx] != target) {
      throw InvariantViolation("splitting set reconstruction failed on a branch");
    }
    cleanup[static_cast<std::size_t>(i)] = 1;
    assign(v, false, idx, cleanup);
  }

  const BlowupGraph& x_;
  std::size_t m_;
  LocalTree tree_;
  int root_ = -1;
  Rational root_value_;
  std::map<int, std::vector<std::pair<int, int>>> children_;
  std::map<int, Tables> node_;
  std::map<int, std::vector<Tables>> prefix_;
  std::map<int, std::vector<Tables>> branch_;
};

}  // namespace

SplittingState optimal_splitting_set(const BlowupGraph& x) {
  std::vector<char> cleanup(x.edges().size(), 0);
  Rational expected;
  for (const auto& p : x.pieces()) {
    PieceDp dp(x, p);
    expected += dp.value();
    dp.mark_cleanup(cleanup);
  }
  SplittingState st = compute_witnesses_and_weights(x, complement_ids(x, cleanup));
  if (st.potential != expected) throw InvariantViolation("reconstructed splitting set misses the optimum");
  return st;
}

SplittingState quasi_bipartite_splitting_set(const BlowupGraph& x) {
  std::vector<char> cleanup(x.edges().size(), 0);
  for (const auto& p : x.pieces()) {
    if (p.edges.size() == 1) continue;
    int center = -1;
    for (int v : p.vertices) {
      if (x.is_terminal_vertex(v)) continue;
      if (center >= 0) throw InvalidArgument("piece is not a star");
      center = v;
    }
    if (center < 0) throw InvalidArgument("piece is not a star");
    int best = -1;
    for (int i : p.edges) {
      const auto& e = x.edges()[static_cast<std::size_t>(i)];
      if (e.u != center && e.v != center) throw InvalidArgument("piece is not a star");
      const auto& b = best < 0 ? e : x.edges()[static_cast<std::size_t>(best)];
      if (best < 0 || std::tie(e.cost, e.id) < std::tie(b.cost, b.id)) best = i;
    }
    cleanup[static_cast<std::size_t>(best)] = 1;
  }
  return compute_witnesses_and_weights(x, complement_ids(x, cleanup));
}

EdgeIdSet map_back(const BlowupGraph& x, const BlowupGraph& binarized, const EdgeIdSet& k_binarized) {
  std::vector<char> core(x.edges().size(), 0);
  for (int id : k_binarized) {
    if (x.has_edge(id)) core[static_cast<std::size_t>(x.index_of(id))] = 1;
    else if (!binarized.has_edge(id)) throw InvalidArgument("unknown edge in the binarized splitting set");
  }
  for (const auto& p : x.pieces()) {
    // Cleanup trees of this piece, via union-find on its vertices.
    std::map<int, int> parent;
    for (int v : p.vertices) parent[v] = v;
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    auto t = local_tree(x, p);
    for (int i : p.edges) {
      if (core[static_cast<std::size_t>(i)]) continue;
      const auto& e = x.edges()[static_cast<std::size_t>(i)];
      parent[find(e.u)] = find(e.v);
    }
    std::map<int, std::vector<int>> cluster_terminals;
    for (int v : p.vertices) {
      if (x.is_terminal_vertex(v)) cluster_terminals[find(v)].push_back(v);
    }
    for (const auto& [cluster, terms] : cluster_terminals) {
      if (terms.size() < 2) continue;
      // Multi-source shortest paths over cleanup edges; ties go to the smaller terminal.
      using Item = std::tuple<Rational, int, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
      std::map<int, int> via;
      std::set<int> done;
      for (int s : terms) {
        heap.emplace(Rational(0), s, s);
        via[s] = -1;
      }
      std::set<int> keep;
      while (!heap.empty()) {
        auto [d, label, u] = heap.top();
        heap.pop();
        if (done.count(u)) continue;
        done.insert(u);
        if (via[u] >= 0) keep.insert(via[u]);
        if (x.is_terminal_vertex(u) && u != label) continue;
        for (const auto& [i, w] : t.adj[u]) {
          if (core[static_cast<std::size_t>(i)] || done.count(w)) continue;
          if (x.is_terminal_vertex(w)) continue;
          via[w] = i;
          heap.emplace(d + x.edges()[static_cast<std::size_t>(i)].cost, label, w);
        }
      }
      for (int i : p.edges) {
        if (core[static_cast<std::size_t>(i)]) continue;
        const auto& e = x.edges()[static_cast<std::size_t>(i)];
        if (find(e.u) == cluster && !keep.count(i)) core[static_cast<std::size_t>(i)] = 1;
      }
    }
  }
  EdgeIdSet k;
  for (std::size_t i = 0; i < x.edges().size(); ++i) {
    if (core[i]) k.push_back(x.edges()[i].id);
  }
  std::sort(k.begin(), k.end());
  return k;
}

SplitChoice choose_splitting_set(const BlowupGraph& x, SplitStrategy strategy, std::uint64_t seed) {
  SplitChoice out;
  auto pick = [&](const BlowupGraph& g) {
    return strategy == SplitStrategy::dp ? optimal_splitting_set(g) : random_splitting_set(g, seed);
  };
  if (strategy == SplitStrategy::quasi) {
    out.state = quasi_bipartite_splitting_set(x);
    out.binarized_potential = out.state.potential;
    return out;
  }
  BlowupGraph b = binarize(x);
  if (b.num_edges() == x.num_edges()) {
    out.state = pick(x);
    out.binarized_potential = out.state.potential;
    return out;
  }
  SplittingState sb = pick(b);
  out.binarized_potential = sb.potential;
  SplittingState mapped = compute_witnesses_and_weights(x, map_back(x, b, sb.k));
  if (mapped.potential <= sb.potential) {
    out.state = std::move(mapped);
  } else {
    out.state = std::move(sb);
    out.fell_back = true;
  }
  return out;
}

}  // namespace hypersteiner
