#include "hypersteiner/components.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "hypersteiner/error.hpp"

namespace hypersteiner {

namespace {

struct Cell {
  bool finite = false;
  Rational value;
  int arg = -1;

  void offer(const Rational& candidate, int how) {
    if (!finite || candidate < value) {
      finite = true;
      value = candidate;
      arg = how;
    }
  }
};

// Dreyfus-Wagner over Steiner-only interiors. Terminals enter only as leaves, attached
// to a Steiner vertex through a single edge.
class ComponentDp {
 public:
  ComponentDp(const SteinerInstance& inst, std::vector<int> terminal_indices, int k)
      : inst_(inst), term_(std::move(terminal_indices)), k_(k) {
    pos_.assign(static_cast<std::size_t>(inst.num_vertices()), -1);
    for (int v = 0; v < inst.num_vertices(); ++v) {
      if (!inst.is_terminal(v)) {
        pos_[static_cast<std::size_t>(v)] = static_cast<int>(steiner_.size());
        steiner_.push_back(v);
      }
    }
    shortest_paths();
    fill_tables();
  }

  int num_local() const { return static_cast<int>(term_.size()); }

  std::optional<Component> build(std::uint32_t local) const {
    const int sz = std::popcount(local);
    if (sz < 2 || sz > k_) throw InvalidArgument("component subset size out of range");
    std::vector<int> terminals;
    TerminalMask global = 0;
    for (int i = 0; i < num_local(); ++i) {
      if ((local >> i) & 1U) {
        int ti = term_[static_cast<std::size_t>(i)];
        global |= TerminalMask{1} << ti;
        terminals.push_back(inst_.terminals()[static_cast<std::size_t>(ti)]);
      }
    }
    std::sort(terminals.begin(), terminals.end());

    Cell best;
    int best_root = -1;
    for (int v = 0; v < s(); ++v) {
      const Cell& c = g(local, v);
      if (c.finite && (!best.finite || c.value < best.value)) {
        best = c;
        best_root = v;
      }
    }
    int direct = -1;
    if (sz == 2) {
      direct = inst_.find_edge(terminals[0], terminals[1]);
      if (direct >= 0 && (!best.finite || inst_.edge(direct).cost <= best.value)) {
        Component comp{global, terminals, {direct}, inst_.edge(direct).cost};
        return comp;
      }
    }
    if (!best.finite) return std::nullopt;

    std::vector<int> multiset;
    add_g(local, best_root, multiset);
    Component comp{global, terminals, tidy(multiset, terminals), 0};
    comp.cost = edge_set_cost(inst_, comp.edges);
    if (comp.cost != best.value) {
      throw InvariantViolation("component reconstruction cost " + to_string(comp.cost) +
                               " differs from table value " + to_string(best.value));
    }
    return comp;
  }

 private:
  int s() const { return static_cast<int>(steiner_.size()); }
  std::size_t idx(std::uint32_t mask, int v) const {
    return static_cast<std::size_t>(mask) * static_cast<std::size_t>(s()) + static_cast<std::size_t>(v);
  }
  const Cell& f(std::uint32_t mask, int v) const { return f_[idx(mask, v)]; }
  const Cell& g(std::uint32_t mask, int v) const { return g_[idx(mask, v)]; }
  const Cell& d(int a, int b) const {
    return dist_[static_cast<std::size_t>(a) * static_cast<std::size_t>(s()) + static_cast<std::size_t>(b)];
  }
  Cell& d(int a, int b) {
    return dist_[static_cast<std::size_t>(a) * static_cast<std::size_t>(s()) + static_cast<std::size_t>(b)];
  }

  void shortest_paths() {
    const int n = s();
    dist_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Cell{});
    // arg holds the next hop on a shortest a->b path.
    for (int a = 0; a < n; ++a) d(a, a).offer(Rational(0), a);
    for (const auto& e : inst_.edges()) {
      int a = pos_[static_cast<std::size_t>(e.u)], b = pos_[static_cast<std::size_t>(e.v)];
      if (a < 0 || b < 0) continue;
      d(a, b).offer(e.cost, b);
      d(b, a).offer(e.cost, a);
    }
    for (int m = 0; m < n; ++m) {
      for (int a = 0; a < n; ++a) {
        if (!d(a, m).finite) continue;
        for (int b = 0; b < n; ++b) {
          if (!d(m, b).finite) continue;
          Rational via = d(a, m).value + d(m, b).value;
          if (!d(a, b).finite || via < d(a, b).value) {
            d(a, b).finite = true;
            d(a, b).value = via;
            d(a, b).arg = d(a, m).arg;
          }
        }
      }
    }
  }

  void fill_tables() {
    const int m = num_local();
    const std::uint32_t full = (std::uint32_t{1} << m) - 1;
    const int n = s();
    f_.assign((static_cast<std::size_t>(full) + 1) * static_cast<std::size_t>(std::max(n, 1)), Cell{});
    g_ = f_;
    if (n == 0) return;
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      if (std::popcount(mask) <= k_) masks.push_back(mask);
    }
    std::stable_sort(masks.begin(), masks.end(),
                     [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
    for (std::uint32_t mask : masks) {
      if (std::popcount(mask) == 1) {
        int t = inst_.terminals()[static_cast<std::size_t>(term_[static_cast<std::size_t>(std::countr_zero(mask))])];
        for (auto [w, id] : inst_.adjacency()[static_cast<std::size_t>(t)]) {
          int wp = pos_[static_cast<std::size_t>(w)];
          if (wp < 0) continue;
          const Rational& c = inst_.edge(id).cost;
          for (int v = 0; v < n; ++v) {
            if (d(wp, v).finite) f_[idx(mask, v)].offer(c + d(wp, v).value, wp);
          }
        }
        continue;
      }
      const std::uint32_t low = mask & (~mask + 1);
      for (std::uint32_t sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
        if (!(sub & low)) continue;
        const std::uint32_t rest = mask ^ sub;
        for (int v = 0; v < n; ++v) {
          const Cell& a = f(sub, v);
          const Cell& b = f(rest, v);
          if (a.finite && b.finite) g_[idx(mask, v)].offer(a.value + b.value, static_cast<int>(sub));
        }
      }
      for (int w = 0; w < n; ++w) {
        const Cell& gw = g(mask, w);
        if (!gw.finite) continue;
        for (int v = 0; v < n; ++v) {
          if (d(w, v).finite) f_[idx(mask, v)].offer(gw.value + d(w, v).value, w);
        }
      }
    }
  }

  void add_path(int from, int to, std::vector<int>& out) const {
    while (from != to) {
      int next = d(from, to).arg;
      out.push_back(inst_.find_edge(steiner_[static_cast<std::size_t>(from)], steiner_[static_cast<std::size_t>(next)]));
      from = next;
    }
  }

  void add_f(std::uint32_t mask, int v, std::vector<int>& out) const {
    const Cell& c = f(mask, v);
    if (std::popcount(mask) == 1) {
      int t = inst_.terminals()[static_cast<std::size_t>(term_[static_cast<std::size_t>(std::countr_zero(mask))])];
      out.push_back(inst_.find_edge(t, steiner_[static_cast<std::size_t>(c.arg)]));
    } else {
      add_g(mask, c.arg, out);
    }
    add_path(c.arg, v, out);
  }

  void add_g(std::uint32_t mask, int v, std::vector<int>& out) const {
    auto sub = static_cast<std::uint32_t>(g(mask, v).arg);
    add_f(sub, v, out);
    add_f(mask ^ sub, v, out);
  }

  // Deduplicate, keep a cheapest spanning forest and strip Steiner leaves.
  std::vector<int> tidy(std::vector<int> ids, const std::vector<int>& terminals) const {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::stable_sort(ids.begin(), ids.end(),
                     [&](int a, int b) { return inst_.edge(a).cost < inst_.edge(b).cost; });
    std::vector<int> parent(static_cast<std::size_t>(inst_.num_vertices()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
      return x;
    };
    std::vector<int> kept;
    for (int id : ids) {
      int a = find(inst_.edge(id).u), b = find(inst_.edge(id).v);
      if (a == b) continue;
      parent[static_cast<std::size_t>(a)] = b;
      kept.push_back(id);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<int> degree(static_cast<std::size_t>(inst_.num_vertices()), 0);
      for (int id : kept) {
        ++degree[static_cast<std::size_t>(inst_.edge(id).u)];
        ++degree[static_cast<std::size_t>(inst_.edge(id).v)];
      }
      auto dangling = [&](int id) {
        const Edge& e = inst_.edge(id);
        return (degree[static_cast<std::size_t>(e.u)] == 1 && !inst_.is_terminal(e.u)) ||
               (degree[static_cast<std::size_t>(e.v)] == 1 && !inst_.is_terminal(e.v));
      };
      auto it = std::remove_if(kept.begin(), kept.end(), dangling);
      if (it != kept.end()) {
        kept.erase(it, kept.end());
        changed = true;
      }
    }
    int root = find(terminals.front());
    for (int t : terminals) {
      if (find(t) != root) throw InvariantViolation("component reconstruction is disconnected");
    }
    std::sort(kept.begin(), kept.end());
    return kept;
  }

  const SteinerInstance& inst_;
  std::vector<int> term_;
  int k_;
  std::vector<int> steiner_;
  std::vector<int> pos_;
  std::vector<Cell> dist_;
  std::vector<Cell> f_, g_;
};

}  // namespace

std::vector<Component> enumerate_components(const SteinerInstance& inst, int k) {
  if (k < 2) throw InvalidArgument("k must be at least 2");
  const int r = inst.num_terminals();
  if (r > kMaxEnumerationTerminals) {
    throw InvalidArgument("component enumeration supports at most " +
                          std::to_string(kMaxEnumerationTerminals) + " terminals, instance has " +
                          std::to_string(r));
  }
  k = std::min(k, r);
  std::vector<int> all(static_cast<std::size_t>(r));
  std::iota(all.begin(), all.end(), 0);
  std::vector<Component> out;
  if (r < 2) return out;
  ComponentDp dp(inst, all, k);
  const std::uint32_t full = (std::uint32_t{1} << r) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    int sz = std::popcount(mask);
    if (sz < 2 || sz > k) continue;
    if (auto c = dp.build(mask)) out.push_back(std::move(*c));
  }
  return out;
}

std::optional<Component> cheapest_component(const SteinerInstance& inst, TerminalMask mask) {
  std::vector<int> local;
  for (int i = 0; i < inst.num_terminals(); ++i) {
    if (mask_contains(mask, i)) local.push_back(i);
  }
  if (mask >> inst.num_terminals()) throw InvalidArgument("mask names a non-existent terminal");
  if (local.size() < 2) throw InvalidArgument("a component needs at least two terminals");
  if (static_cast<int>(local.size()) > kMaxEnumerationTerminals) {
    throw InvalidArgument("too many terminals for the component table");
  }
  const int sz = static_cast<int>(local.size());
  ComponentDp dp(inst, local, sz);
  return dp.build((std::uint32_t{1} << sz) - 1);
}

std::optional<Rational> min_component_cost(const SteinerInstance& inst, TerminalMask mask) {
  auto c = cheapest_component(inst, mask);
  if (!c) return std::nullopt;
  return c->cost;
}

bool is_valid_component(const SteinerInstance& inst, const Component& c) {
  if (c.terminals.size() < 2 || c.edges.empty()) return false;
  TerminalMask mask = 0;
  for (int t : c.terminals) {
    if (t < 0 || t >= inst.num_vertices() || !inst.is_terminal(t)) return false;
    mask |= TerminalMask{1} << inst.terminal_index(t);
  }
  if (mask != c.terminal_mask) return false;
  if (!is_steiner_tree(SteinerInstance(inst.num_vertices(), c.terminals, inst.edges()), c.edges)) {
    return false;
  }
  std::vector<int> degree(static_cast<std::size_t>(inst.num_vertices()), 0);
  for (int id : c.edges) {
    ++degree[static_cast<std::size_t>(inst.edge(id).u)];
    ++degree[static_cast<std::size_t>(inst.edge(id).v)];
  }
  for (int v = 0; v < inst.num_vertices(); ++v) {
    int deg = degree[static_cast<std::size_t>(v)];
    if (inst.is_terminal(v)) {
      bool member = std::binary_search(c.terminals.begin(), c.terminals.end(), v);
      if (deg != (member ? 1 : 0)) return false;
    }
  }
  return edge_set_cost(inst, c.edges) == c.cost;
}

}  // namespace hypersteiner
