#include "hypersteiner/sepflow.hpp"

#include <algorithm>
#include <bit>
#include <queue>

#include "hypersteiner/error.hpp"

namespace hypersteiner {

namespace {

std::vector<std::vector<int>> incidence(const BlowupGraph& g) {
  std::vector<std::vector<int>> inc(static_cast<std::size_t>(g.num_vertices()));
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    inc[static_cast<std::size_t>(g.edges()[i].u)].push_back(static_cast<int>(i));
    inc[static_cast<std::size_t>(g.edges()[i].v)].push_back(static_cast<int>(i));
  }
  return inc;
}

// Orients the edges of piece p away from `root`; calls emit(edge index, tail, head).
template <class Emit>
void orient_piece(const BlowupGraph& g, const std::vector<std::vector<int>>& inc, const Piece& p,
                  int root, Emit emit) {
  if (!std::binary_search(p.vertices.begin(), p.vertices.end(), root)) {
    throw InvalidArgument("root override is not a vertex of its piece");
  }
  std::vector<char> in_piece(g.edges().size(), 0);
  for (int i : p.edges) in_piece[static_cast<std::size_t>(i)] = 1;
  std::vector<char> used(g.edges().size(), 0);
  std::queue<int> queue;
  queue.push(root);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop();
    for (int i : inc[static_cast<std::size_t>(u)]) {
      if (!in_piece[static_cast<std::size_t>(i)] || used[static_cast<std::size_t>(i)]) continue;
      used[static_cast<std::size_t>(i)] = 1;
      int w = g.edges()[static_cast<std::size_t>(i)].other(u);
      emit(i, u, w);
      // Terminals are leaves of pieces, so the search never passes through one.
      if (!g.is_terminal_vertex(w)) queue.push(w);
    }
  }
}

SeparationDigraph build_impl(const BlowupGraph& g, const std::vector<long>& extra_roots,
                             const std::vector<int>* roots) {
  SeparationDigraph d;
  const int nv = g.num_vertices();
  d.net = FlowNetwork<long>(nv + 2);
  d.source = nv;
  d.sink = nv + 1;
  d.n = g.N();
  const auto& pieces = g.pieces();
  if (roots && roots->size() != pieces.size()) throw InvalidArgument("one root per piece expected");
  d.y.assign(static_cast<std::size_t>(g.num_terminals()), 0);
  for (int v = 0; v < g.num_terminals(); ++v) {
    if (!mask_contains(g.active_terminals(), v)) continue;
    long count = extra_roots.empty() ? 0 : extra_roots[static_cast<std::size_t>(v)];
    for (const auto& p : pieces) count += mask_contains(p.terminals, v) ? 1 : 0;
    d.y[static_cast<std::size_t>(v)] = count - g.N();
    if (count < g.N() && !d.deficient) d.deficient = v;
  }
  auto inc = incidence(g);
  d.edge_arc.assign(g.edges().size(), -1);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    int root = roots ? (*roots)[i] : pieces[i].root;
    d.root.push_back(root);
    d.net.add_arc(d.source, root, 1);
    orient_piece(g, inc, pieces[i], root, [&](int e, int tail, int head) {
      d.edge_arc[static_cast<std::size_t>(e)] = d.net.add_arc(tail, head, 1);
    });
  }
  for (std::size_t v = 0; v < extra_roots.size(); ++v) {
    for (long k = 0; k < extra_roots[v]; ++k) d.net.add_arc(d.source, static_cast<int>(v), 1);
  }
  for (int v = 0; v < g.num_terminals(); ++v) {
    if (!mask_contains(g.active_terminals(), v)) continue;
    d.net.add_arc(v, d.sink, std::max(0L, d.y[static_cast<std::size_t>(v)]));
    d.y_total += d.y[static_cast<std::size_t>(v)];
  }
  d.original_arcs = d.net.num_arcs();
  return d;
}

void check_query(const BlowupGraph& x, TerminalMask q) {
  if (q == 0) throw InvalidArgument("query set must be nonempty");
  if ((q & ~x.active_terminals()) != 0) throw InvalidArgument("query set contains inactive terminals");
}

}  // namespace

SeparationDigraph build_separation_digraph(const BlowupGraph& x, const std::vector<int>* roots) {
  return build_impl(x, {}, roots);
}

SeparationDigraph build_separation_digraph(const BlowupGraph& x, const EdgeIdSet& removed) {
  BlowupGraph g = x.without(removed);
  std::vector<long> extra(static_cast<std::size_t>(x.num_terminals()), 0);
  for (const auto& p : x.pieces()) {
    for (int v = 0; v < x.num_terminals(); ++v) extra[static_cast<std::size_t>(v)] += mask_contains(p.terminals, v);
  }
  for (const auto& p : g.pieces()) {
    for (int v = 0; v < x.num_terminals(); ++v) extra[static_cast<std::size_t>(v)] -= mask_contains(p.terminals, v);
  }
  return build_impl(g, extra, nullptr);
}

MinSlack min_slack_in_digraph(SeparationDigraph& d, TerminalMask active, TerminalMask q) {
  if (d.deficient) {
    throw InfeasibleError("infeasible: x(delta(v)) < 1 at terminal label " + std::to_string(*d.deficient));
  }
  std::vector<int> sinks{d.sink};
  for (int v = 0; v < static_cast<int>(d.y.size()); ++v) {
    if (mask_contains(q, v)) sinks.push_back(v);
  }
  MinSlack out;
  out.flow = d.net.max_flow(d.source, sinks);
  out.value = out.flow - d.y_total - d.n;
  auto side = d.net.sink_side(sinks);
  for (int v = 0; v < static_cast<int>(d.y.size()); ++v) {
    if (mask_contains(active, v) && side[static_cast<std::size_t>(v)]) out.argmin |= TerminalMask{1} << v;
  }
  return out;
}

MinSlack min_slack_over_supersets(const BlowupGraph& x, TerminalMask q) {
  check_query(x, q);
  auto d = build_separation_digraph(x);
  return min_slack_in_digraph(d, x.active_terminals(), q);
}

MinSlack min_slack_over_supersets(const BlowupGraph& x, const EdgeIdSet& removed, TerminalMask q) {
  check_query(x, q);
  auto d = build_separation_digraph(x, removed);
  return min_slack_in_digraph(d, x.active_terminals(), q);
}

SeparationResult separate(const BlowupGraph& x) {
  SeparationResult res;
  const TerminalMask active = x.active_terminals();
  if (active == 0) return res;
  res.equality_holds = slack(x, active) == 0;
  const auto base = build_separation_digraph(x);
  if (base.deficient) {
    res.deficient = base.deficient;
    TerminalMask s = active & ~(TerminalMask{1} << *base.deficient);
    if (s != 0) {
      res.violated = s;
      res.value = slack(x, s);
    }
    return res;
  }
  for (int v = 0; v < x.num_terminals(); ++v) {
    if (!mask_contains(active, v)) continue;
    auto d = base;
    MinSlack m = min_slack_in_digraph(d, active, TerminalMask{1} << v);
    if (m.value < 0 && (!res.violated || m.value < res.value ||
                        (m.value == res.value && m.argmin < *res.violated))) {
      res.violated = m.argmin;
      res.value = m.value;
    }
  }
  return res;
}

Rational lp_slack(const std::vector<WeightedSet>& x, TerminalMask s) {
  if (s == 0) throw InvalidArgument("slack is undefined on the empty set");
  Rational h = mask_size(s) - 1;
  for (const auto& c : x) {
    int k = mask_size(s & c.terminals);
    if (k > 1) h -= c.weight * (k - 1);
  }
  return h;
}

namespace {

struct LpNetwork {
  FlowNetwork<Rational> net;
  int source = 0;
  int sink = 1;
  std::vector<int> node;  // per label
  Rational y_total;
  std::optional<int> deficient;
  Rational deficient_value;
};

LpNetwork build_lp_network(const std::vector<WeightedSet>& x, TerminalMask active) {
  LpNetwork n;
  n.net = FlowNetwork<Rational>(2);
  n.node.assign(64, -1);
  std::vector<Rational> cover(64, Rational(0));
  for (int v = 0; v < 64; ++v) {
    if (mask_contains(active, v)) n.node[static_cast<std::size_t>(v)] = n.net.add_node();
  }
  for (const auto& c : x) {
    if (sgn(c.weight) <= 0) continue;
    if ((c.terminals & ~active) != 0) throw InvalidArgument("column uses an inactive terminal");
    const int root = std::countr_zero(c.terminals);
    const int hub = n.net.add_node();
    n.net.add_arc(n.source, n.node[static_cast<std::size_t>(root)], c.weight);
    n.net.add_arc(n.node[static_cast<std::size_t>(root)], hub, c.weight);
    for (int v = 0; v < 64; ++v) {
      if (!mask_contains(c.terminals, v)) continue;
      cover[static_cast<std::size_t>(v)] += c.weight;
      if (v != root) n.net.add_arc(hub, n.node[static_cast<std::size_t>(v)], c.weight);
    }
  }
  for (int v = 0; v < 64; ++v) {
    if (!mask_contains(active, v)) continue;
    Rational y = cover[static_cast<std::size_t>(v)] - 1;
    if (sgn(y) < 0 && (!n.deficient || y < n.deficient_value)) {
      n.deficient = v;
      n.deficient_value = y;
    }
    n.net.add_arc(n.node[static_cast<std::size_t>(v)], n.sink, sgn(y) < 0 ? Rational(0) : y);
    n.y_total += y;
  }
  return n;
}

LpMinSlack run_lp_query(LpNetwork n, TerminalMask active, TerminalMask q) {
  std::vector<int> sinks{n.sink};
  for (int v = 0; v < 64; ++v) {
    if (mask_contains(q, v)) sinks.push_back(n.node[static_cast<std::size_t>(v)]);
  }
  LpMinSlack out;
  Rational flow = n.net.max_flow(n.source, sinks);
  out.value = flow - n.y_total - 1;
  auto side = n.net.sink_side(sinks);
  for (int v = 0; v < 64; ++v) {
    if (mask_contains(active, v) && side[static_cast<std::size_t>(n.node[static_cast<std::size_t>(v)])]) {
      out.argmin |= TerminalMask{1} << v;
    }
  }
  return out;
}

}  // namespace

LpMinSlack lp_min_slack_over_supersets(const std::vector<WeightedSet>& x, TerminalMask active,
                                       TerminalMask q) {
  if (q == 0 || (q & ~active) != 0) throw InvalidArgument("query set must be a nonempty subset of the terminals");
  auto n = build_lp_network(x, active);
  if (n.deficient) {
    throw InfeasibleError("infeasible: x(delta(v)) < 1 at terminal " + std::to_string(*n.deficient));
  }
  return run_lp_query(std::move(n), active, q);
}

std::optional<LpMinSlack> separate_lp(const std::vector<WeightedSet>& x, TerminalMask active) {
  auto base = build_lp_network(x, active);
  std::optional<LpMinSlack> best;
  auto offer = [&](const LpMinSlack& m) {
    if (sgn(m.value) >= 0) return;
    if (!best || m.value < best->value || (m.value == best->value && m.argmin < best->argmin)) best = m;
  };
  if (base.deficient) {
    // h(R - v) equals the coverage deficit of v once the equality row holds.
    for (int v = 0; v < 64; ++v) {
      if (!mask_contains(active, v)) continue;
      TerminalMask s = active & ~(TerminalMask{1} << v);
      if (s != 0) offer(LpMinSlack{lp_slack(x, s), s});
    }
    return best;
  }
  for (int v = 0; v < 64; ++v) {
    if (mask_contains(active, v)) offer(run_lp_query(base, active, TerminalMask{1} << v));
  }
  return best;
}

GammoidOracle::GammoidOracle(const BlowupGraph& x, TerminalMask q) : x_(x) {
  check_query(x, q);
  const int nv = x.num_vertices();
  const int m = x.num_edges();
  net_ = FlowNetwork<long>(nv + m + 2);
  source_ = nv + m;
  const int sink = nv + m + 1;
  const auto& pieces = x.pieces();
  auto inc = incidence(x);
  feed_arc_.assign(static_cast<std::size_t>(m), -1);
  for (const auto& p : pieces) {
    // One unit arc per piece, so roots shared by several pieces get parallel arcs.
    net_.add_arc(source_, p.root, 1);
    orient_piece(x, inc, p, p.root, [&](int e, int tail, int head) {
      const int mid = nv + e;
      net_.add_arc(tail, mid, 1);  // back arc
      net_.add_arc(mid, head, 1);  // front arc
    });
  }
  for (int e = 0; e < m; ++e) feed_arc_[static_cast<std::size_t>(e)] = net_.add_arc(source_, nv + e, 0);
  sinks_.push_back(sink);
  for (int v = 0; v < x.num_terminals(); ++v) {
    if (!mask_contains(x.active_terminals(), v)) continue;
    long count = 0;
    for (const auto& p : pieces) count += mask_contains(p.terminals, v);
    if (count < x.N()) {
      throw InfeasibleError("infeasible: x(delta(v)) < 1 at terminal label " + std::to_string(v));
    }
    net_.add_arc(v, sink, count - x.N());
    if (mask_contains(q, v)) sinks_.push_back(v);
  }
  baseline_ = net_.max_flow(source_, sinks_);
}

long GammoidOracle::rank(const EdgeIdSet& u) const {
  FlowNetwork<long> net = net_;
  for (int id : u) net.set_capacity(feed_arc_[static_cast<std::size_t>(x_.index_of(id))], 1);
  return net.max_flow(source_, sinks_);
}

bool GammoidOracle::Session::try_add(int edge_id) {
  const int arc = oracle_.feed_arc_[static_cast<std::size_t>(oracle_.x_.index_of(edge_id))];
  if (net_.capacity(arc) != 0) throw InvalidArgument("edge already added to the session");
  net_.set_capacity(arc, 1);
  if (net_.max_flow(oracle_.source_, oracle_.sinks_, 1L) == 1) {
    ++rank_;
    return true;
  }
  net_.set_capacity(arc, 0);
  return false;
}

long gammoid_rank(const BlowupGraph& x, TerminalMask q, const EdgeIdSet& u) {
  return GammoidOracle(x, q).rank(u);
}

}  // namespace hypersteiner
