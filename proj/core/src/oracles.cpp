#include "hypersteiner/oracles.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "hypersteiner/error.hpp"

namespace hypersteiner::oracles {

namespace {

struct Dsu {
  explicit Dsu(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    return true;
  }
  std::vector<int> parent;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("oracle size limit: " + what);
}

struct Metric {
  std::vector<std::vector<std::optional<Rational>>> dist;
  std::vector<std::vector<int>> via;  // first edge on a shortest path u -> v
};

Metric floyd_warshall(const SteinerInstance& inst) {
  const auto n = static_cast<std::size_t>(inst.num_vertices());
  Metric m;
  m.dist.assign(n, std::vector<std::optional<Rational>>(n));
  m.via.assign(n, std::vector<int>(n, -1));
  for (std::size_t v = 0; v < n; ++v) m.dist[v][v] = Rational(0);
  for (int e = 0; e < inst.num_edges(); ++e) {
    const Edge& ed = inst.edge(e);
    const auto u = static_cast<std::size_t>(ed.u);
    const auto v = static_cast<std::size_t>(ed.v);
    if (!m.dist[u][v] || ed.cost < *m.dist[u][v]) {
      m.dist[u][v] = ed.cost;
      m.dist[v][u] = ed.cost;
      m.via[u][v] = e;
      m.via[v][u] = e;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!m.dist[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!m.dist[k][j]) continue;
        Rational through = *m.dist[i][k] + *m.dist[k][j];
        if (!m.dist[i][j] || through < *m.dist[i][j]) {
          m.dist[i][j] = through;
          m.via[i][j] = m.via[i][k];
        }
      }
    }
  }
  return m;
}

void add_path(const SteinerInstance& inst, const Metric& m, int from, int to, std::set<int>& out) {
  while (from != to) {
    const int e = m.via[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
    out.insert(e);
    from = inst.edge(e).other(from);
  }
}

// Spanning forest of the chosen edges by (cost, id), then Steiner leaves stripped.
SteinerTree prune(const SteinerInstance& inst, const std::set<int>& chosen) {
  std::vector<int> order(chosen.begin(), chosen.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Rational& ca = inst.edge(a).cost;
    const Rational& cb = inst.edge(b).cost;
    return ca < cb || (ca == cb && a < b);
  });
  Dsu dsu(inst.num_vertices());
  std::set<int> kept;
  for (int e : order) {
    if (dsu.unite(inst.edge(e).u, inst.edge(e).v)) kept.insert(e);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> degree(static_cast<std::size_t>(inst.num_vertices()), 0);
    for (int e : kept) {
      ++degree[static_cast<std::size_t>(inst.edge(e).u)];
      ++degree[static_cast<std::size_t>(inst.edge(e).v)];
    }
    for (auto it = kept.begin(); it != kept.end();) {
      const Edge& ed = inst.edge(*it);
      const bool leaf_u = !inst.is_terminal(ed.u) && degree[static_cast<std::size_t>(ed.u)] == 1;
      const bool leaf_v = !inst.is_terminal(ed.v) && degree[static_cast<std::size_t>(ed.v)] == 1;
      if (leaf_u || leaf_v) {
        it = kept.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  SteinerTree t;
  t.edges.assign(kept.begin(), kept.end());
  for (int e : t.edges) t.cost += inst.edge(e).cost;
  return t;
}

}  // namespace

SteinerTree exact_steiner_tree(const SteinerInstance& inst) {
  const int k = inst.num_terminals();
  require(k <= 12, "exact Steiner tree needs at most 12 terminals");
  if (k <= 1) return {};
  const auto n = static_cast<std::size_t>(inst.num_vertices());
  const Metric m = floyd_warshall(inst);
  const int last = inst.terminals().back();
  for (int t : inst.terminals()) {
    if (!m.dist[static_cast<std::size_t>(t)][static_cast<std::size_t>(last)]) {
      throw InfeasibleError("terminals are disconnected");
    }
  }
  // Subsets of the first k-1 terminals; the last one is the final meeting point.
  const int free = k - 1;
  const std::size_t subsets = std::size_t{1} << free;
  std::vector<std::vector<std::optional<Rational>>> dp(subsets, std::vector<std::optional<Rational>>(n));
  std::vector<std::vector<int>> meet(subsets, std::vector<int>(n, -1));   // vertex where the split happens
  std::vector<std::vector<std::size_t>> split(subsets, std::vector<std::size_t>(n, 0));
  for (int i = 0; i < free; ++i) {
    const std::size_t s = std::size_t{1} << i;
    const auto t = static_cast<std::size_t>(inst.terminals()[static_cast<std::size_t>(i)]);
    for (std::size_t v = 0; v < n; ++v) {
      dp[s][v] = m.dist[t][v];
      meet[s][v] = static_cast<int>(t);
    }
  }
  for (std::size_t s = 1; s < subsets; ++s) {
    if ((s & (s - 1)) == 0) continue;
    std::vector<std::optional<Rational>> g(n);
    std::vector<std::size_t> g_split(n, 0);
    const std::size_t low = s & (~s + 1);
    for (std::size_t u = 0; u < n; ++u) {
      // Each unordered split once: the part containing the lowest bit.
      for (std::size_t a = (s - 1) & s; a > 0; a = (a - 1) & s) {
        if ((a & low) == 0) continue;
        const auto& left = dp[a][u];
        const auto& right = dp[s ^ a][u];
        if (!left || !right) continue;
        Rational total = *left + *right;
        if (!g[u] || total < *g[u]) {
          g[u] = total;
          g_split[u] = a;
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t u = 0; u < n; ++u) {
        if (!g[u] || !m.dist[u][v]) continue;
        Rational total = *g[u] + *m.dist[u][v];
        if (!dp[s][v] || total < *dp[s][v]) {
          dp[s][v] = total;
          meet[s][v] = static_cast<int>(u);
          split[s][v] = g_split[u];
        }
      }
    }
  }
  std::set<int> chosen;
  std::vector<std::pair<std::size_t, int>> stack{{subsets - 1, last}};
  while (!stack.empty()) {
    auto [s, v] = stack.back();
    stack.pop_back();
    const int u = meet[s][static_cast<std::size_t>(v)];
    add_path(inst, m, v, u, chosen);
    if ((s & (s - 1)) == 0) continue;
    const std::size_t a = split[s][static_cast<std::size_t>(v)];
    stack.emplace_back(a, u);
    stack.emplace_back(s ^ a, u);
  }
  SteinerTree t = prune(inst, chosen);
  const Rational& best = *dp[subsets - 1][static_cast<std::size_t>(last)];
  if (t.cost != best) {
    throw InvariantViolation("Dreyfus-Wagner reconstruction cost " + to_string(t.cost) + " differs from " +
                             to_string(best));
  }
  return t;
}

SteinerTree exhaustive_steiner_tree(const SteinerInstance& inst) {
  const int m = inst.num_edges();
  require(m <= 20, "exhaustive Steiner tree needs at most 20 edges");
  if (inst.num_terminals() <= 1) return {};
  std::optional<SteinerTree> best;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m); ++mask) {
    std::vector<int> edges;
    Rational cost;
    for (int e = 0; e < m; ++e) {
      if ((mask >> e) & 1U) {
        edges.push_back(e);
        cost += inst.edge(e).cost;
      }
    }
    if (best && cost >= best->cost) continue;
    if (is_steiner_tree(inst, edges)) best = SteinerTree{edges, cost};
  }
  if (!best) throw InfeasibleError("terminals are disconnected");
  return *best;
}

SteinerTree mst_two_approx(const SteinerInstance& inst) {
  const int k = inst.num_terminals();
  if (k <= 1) return {};
  const Metric m = floyd_warshall(inst);
  const auto& terms = inst.terminals();
  std::vector<char> in_tree(static_cast<std::size_t>(k), 0);
  std::vector<std::optional<Rational>> best(static_cast<std::size_t>(k));
  std::vector<int> from(static_cast<std::size_t>(k), -1);
  std::set<int> chosen;
  best[0] = Rational(0);
  for (int step = 0; step < k; ++step) {
    int pick = -1;
    for (int i = 0; i < k; ++i) {
      if (in_tree[static_cast<std::size_t>(i)] || !best[static_cast<std::size_t>(i)]) continue;
      if (pick < 0 || *best[static_cast<std::size_t>(i)] < *best[static_cast<std::size_t>(pick)]) pick = i;
    }
    if (pick < 0) throw InfeasibleError("terminals are disconnected");
    in_tree[static_cast<std::size_t>(pick)] = 1;
    const int tp = terms[static_cast<std::size_t>(pick)];
    if (from[static_cast<std::size_t>(pick)] >= 0) {
      add_path(inst, m, terms[static_cast<std::size_t>(from[static_cast<std::size_t>(pick)])], tp, chosen);
    }
    for (int i = 0; i < k; ++i) {
      if (in_tree[static_cast<std::size_t>(i)]) continue;
      const auto& d = m.dist[static_cast<std::size_t>(tp)][static_cast<std::size_t>(terms[static_cast<std::size_t>(i)])];
      if (d && (!best[static_cast<std::size_t>(i)] || *d < *best[static_cast<std::size_t>(i)])) {
        best[static_cast<std::size_t>(i)] = *d;
        from[static_cast<std::size_t>(i)] = pick;
      }
    }
  }
  return prune(inst, chosen);
}

namespace {

// Terminal label masks of the pieces of x - removed, plus `extra` copies of q.
std::vector<TerminalMask> piece_masks(const BlowupGraph& x, const EdgeIdSet& removed) {
  const std::set<int> gone(removed.begin(), removed.end());
  Dsu dsu(x.num_vertices());
  for (const auto& e : x.edges()) {
    if (gone.count(e.id)) continue;
    if (!x.is_terminal_vertex(e.u) && !x.is_terminal_vertex(e.v)) dsu.unite(e.u, e.v);
  }
  std::vector<TerminalMask> by_root(static_cast<std::size_t>(x.num_vertices()), 0);
  std::vector<TerminalMask> masks;
  for (const auto& e : x.edges()) {
    if (gone.count(e.id)) continue;
    const bool tu = x.is_terminal_vertex(e.u);
    const bool tv = x.is_terminal_vertex(e.v);
    if (tu && tv) {
      masks.push_back((TerminalMask{1} << e.u) | (TerminalMask{1} << e.v));
    } else if (tu) {
      by_root[static_cast<std::size_t>(dsu.find(e.v))] |= TerminalMask{1} << e.u;
    } else if (tv) {
      by_root[static_cast<std::size_t>(dsu.find(e.u))] |= TerminalMask{1} << e.v;
    }
  }
  for (TerminalMask m : by_root) {
    if (m != 0) masks.push_back(m);
  }
  return masks;
}

long slack_of(const std::vector<TerminalMask>& masks, long n, TerminalMask s) {
  long h = n * (mask_size(s) - 1);
  for (TerminalMask m : masks) h -= std::max(0, mask_size(m & s) - 1);
  return h;
}

bool feasible_masks(const std::vector<TerminalMask>& masks, long n, TerminalMask active) {
  if (slack_of(masks, n, active) != 0) return false;
  for (TerminalMask s = active; s != 0; s = (s - 1) & active) {
    if (slack_of(masks, n, s) < 0) return false;
  }
  return true;
}

}  // namespace

long slack(const BlowupGraph& x, const EdgeIdSet& removed, TerminalMask s) {
  if (s == 0) throw InvalidArgument("slack of the empty set");
  return slack_of(piece_masks(x, removed), x.N(), s);
}

long min_slack_over_supersets(const BlowupGraph& x, const EdgeIdSet& removed, TerminalMask q) {
  const TerminalMask active = x.active_terminals();
  require(x.num_active_terminals() <= 20, "superset search needs at most 20 active terminals");
  if ((q & ~active) != 0 || q == 0) throw InvalidArgument("q must be a nonempty set of active terminals");
  const auto masks = piece_masks(x, removed);
  const TerminalMask rest = active & ~q;
  long best = slack_of(masks, x.N(), q);
  for (TerminalMask a = rest; a != 0; a = (a - 1) & rest) best = std::min(best, slack_of(masks, x.N(), q | a));
  return best;
}

bool feasible_after_adding(const BlowupGraph& x, TerminalMask q, const EdgeIdSet& removed) {
  auto masks = piece_masks(x, removed);
  for (long i = 0; i < x.N(); ++i) masks.push_back(q);
  return feasible_masks(masks, x.N(), x.active_terminals());
}

std::vector<EdgeIdSet> enumerate_minimal_removals(const BlowupGraph& x, TerminalMask q) {
  const int m = x.num_edges();
  require(m <= 12, "minimal removal enumeration needs at most 12 edges");
  std::vector<std::uint32_t> feasible;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
    EdgeIdSet removed;
    for (int i = 0; i < m; ++i) {
      if ((mask >> i) & 1U) removed.push_back(x.edges()[static_cast<std::size_t>(i)].id);
    }
    if (feasible_after_adding(x, q, removed)) feasible.push_back(mask);
  }
  std::vector<EdgeIdSet> out;
  for (std::uint32_t b : feasible) {
    bool minimal = true;
    for (std::uint32_t other : feasible) {
      if (other != b && (other & b) == other) {
        minimal = false;
        break;
      }
    }
    if (!minimal) continue;
    EdgeIdSet set;
    for (int i = 0; i < m; ++i) {
      if ((b >> i) & 1U) set.push_back(x.edges()[static_cast<std::size_t>(i)].id);
    }
    std::sort(set.begin(), set.end());
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Vertex index in the terminal-identified multigraph; terminals all map to 0.
struct Contracted {
  std::vector<int> node;  // per blowup vertex, -1 when isolated
  int nodes = 1;
};

Contracted contract_terminals(const BlowupGraph& x) {
  Contracted c;
  c.node.assign(static_cast<std::size_t>(x.num_vertices()), -1);
  for (int v = 0; v < x.num_vertices(); ++v) {
    if (x.is_terminal_vertex(v)) c.node[static_cast<std::size_t>(v)] = 0;
  }
  for (const auto& e : x.edges()) {
    for (int v : {e.u, e.v}) {
      if (c.node[static_cast<std::size_t>(v)] < 0) c.node[static_cast<std::size_t>(v)] = c.nodes++;
    }
  }
  return c;
}

}  // namespace

std::vector<EdgeIdSet> enumerate_splitting_sets(const BlowupGraph& x) {
  const int m = x.num_edges();
  require(m <= 20, "splitting set enumeration needs at most 20 edges");
  const Contracted c = contract_terminals(x);
  const int tree_size = c.nodes - 1;
  std::vector<EdgeIdSet> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
    if (__builtin_popcount(mask) != tree_size) continue;
    Dsu dsu(c.nodes);
    bool forest = true;
    EdgeIdSet k;
    for (int i = 0; i < m; ++i) {
      const auto& e = x.edges()[static_cast<std::size_t>(i)];
      if ((mask >> i) & 1U) {
        if (!dsu.unite(c.node[static_cast<std::size_t>(e.u)], c.node[static_cast<std::size_t>(e.v)])) {
          forest = false;
          break;
        }
      } else {
        k.push_back(e.id);
      }
    }
    if (!forest) continue;
    std::sort(k.begin(), k.end());
    out.push_back(std::move(k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

long count_splitting_sets(const BlowupGraph& x) {
  const Contracted c = contract_terminals(x);
  const int dim = c.nodes - 1;
  if (dim == 0) return 1;
  // Reduced Laplacian with the terminal node removed.
  std::vector<std::vector<Rational>> lap(static_cast<std::size_t>(dim), std::vector<Rational>(static_cast<std::size_t>(dim)));
  for (const auto& e : x.edges()) {
    const int a = c.node[static_cast<std::size_t>(e.u)];
    const int b = c.node[static_cast<std::size_t>(e.v)];
    if (a == b) continue;
    if (a > 0) lap[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(a - 1)] += 1;
    if (b > 0) lap[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(b - 1)] += 1;
    if (a > 0 && b > 0) {
      lap[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] -= 1;
      lap[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)] -= 1;
    }
  }
  Rational det = 1;
  const auto d = static_cast<std::size_t>(dim);
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    while (pivot < d && sgn(lap[pivot][col]) == 0) ++pivot;
    if (pivot == d) return 0;
    if (pivot != col) {
      std::swap(lap[pivot], lap[col]);
      det = -det;
    }
    det *= lap[col][col];
    for (std::size_t r = col + 1; r < d; ++r) {
      if (sgn(lap[r][col]) == 0) continue;
      const Rational f = lap[r][col] / lap[col][col];
      for (std::size_t j = col; j < d; ++j) lap[r][j] -= f * lap[col][j];
    }
  }
  return to_int64(det);
}

namespace {

// Sum over pieces of (terminals - 1)^+; removing an edge lowers it exactly when the
// edge separates two terminals of its piece.
int coverage(const BlowupGraph& x, const EdgeIdSet& removed) {
  int total = 0;
  for (TerminalMask m : piece_masks(x, removed)) total += std::max(0, mask_size(m) - 1);
  return total;
}

}  // namespace

EdgeIdSet witness_by_search(const BlowupGraph& x, const EdgeIdSet& k, int e) {
  const int size = static_cast<int>(k.size());
  require(size <= 16, "witness search needs at most 16 core edges");
  if (std::binary_search(k.begin(), k.end(), e)) throw InvalidArgument("witness search is for cleanup edges");
  for (int want = 0; want <= size; ++want) {
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << size); ++mask) {
      if (__builtin_popcount(mask) != want) continue;
      EdgeIdSet gone;
      for (int i = 0; i < size; ++i) {
        if ((mask >> i) & 1U) gone.push_back(k[static_cast<std::size_t>(i)]);
      }
      const int before = coverage(x, gone);
      gone.push_back(e);
      if (coverage(x, gone) == before) {
        gone.pop_back();
        return gone;
      }
    }
  }
  throw InvariantViolation("edge " + std::to_string(e) + " never becomes pendant");
}

Rational potential_by_search(const BlowupGraph& x, const EdgeIdSet& k) {
  Rational phi;
  for (const auto& e : x.edges()) {
    if (std::binary_search(k.begin(), k.end(), e.id)) {
      phi += e.cost;
    } else {
      phi += e.cost * harmonic(static_cast<int>(witness_by_search(x, k, e.id).size()));
    }
  }
  return phi;
}

Rational min_potential_exhaustive(const BlowupGraph& x) {
  std::optional<Rational> best;
  for (const auto& k : enumerate_splitting_sets(x)) {
    Rational phi = potential_by_search(x, k);
    if (!best || phi < *best) best = phi;
  }
  if (!best) throw InvalidArgument("graph has no splitting set");
  return *best;
}

}  // namespace hypersteiner::oracles
