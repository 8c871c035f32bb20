#include "hypersteiner/bcr_quasi.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "hypersteiner/error.hpp"
#include "hypersteiner/maxflow.hpp"
#include "hypersteiner/simplex.hpp"

namespace hypersteiner {

SteinerInstance preprocess_quasi(const SteinerInstance& inst) {
  if (!inst.is_quasi_bipartite()) throw InvalidArgument("instance is not quasi-bipartite");
  int n = inst.num_vertices();
  std::vector<Edge> edges;
  for (const auto& e : inst.edges()) {
    if (inst.is_terminal(e.u) && inst.is_terminal(e.v)) {
      const int d = n++;
      const Rational half = e.cost / 2;
      edges.push_back(Edge{e.u, d, half});
      edges.push_back(Edge{d, e.v, e.cost - half});
    } else {
      edges.push_back(e);
    }
  }
  return SteinerInstance(n, inst.terminals(), std::move(edges));
}

namespace {

int arc_tail(const SteinerInstance& inst, int arc) {
  const Edge& e = inst.edge(arc / 2);
  return arc % 2 == 0 ? e.u : e.v;
}

int arc_head(const SteinerInstance& inst, int arc) {
  const Edge& e = inst.edge(arc / 2);
  return arc % 2 == 0 ? e.v : e.u;
}

struct ArcNetwork {
  FlowNetwork<Rational> net;
  std::vector<int> handle;  // per arc, -1 when capacity is zero
};

ArcNetwork arc_network(const SteinerInstance& inst, const std::vector<Rational>& x) {
  ArcNetwork a;
  a.net = FlowNetwork<Rational>(inst.num_vertices());
  a.handle.assign(x.size(), -1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) > 0) a.handle[i] = a.net.add_arc(arc_tail(inst, static_cast<int>(i)), arc_head(inst, static_cast<int>(i)), x[i]);
  }
  return a;
}

// Violated cut rows x(out(S)) >= 1, one per terminal that cannot ship a unit.
std::vector<LinearRow> separate_bcr(const SteinerInstance& inst, int root, const std::vector<Rational>& x) {
  std::vector<LinearRow> rows;
  std::set<std::vector<char>> seen;
  for (int t : inst.terminals()) {
    if (t == root) continue;
    ArcNetwork a = arc_network(inst, x);
    Rational flow = a.net.max_flow(t, {root}, Rational(1));
    if (flow >= 1) continue;
    auto side = a.net.source_side(t);
    side.resize(static_cast<std::size_t>(inst.num_vertices()));
    if (!seen.insert(side).second) continue;
    LinearRow row;
    row.sense = Sense::ge;
    row.rhs = 1;
    for (int arc = 0; arc < 2 * inst.num_edges(); ++arc) {
      if (side[static_cast<std::size_t>(arc_tail(inst, arc))] && !side[static_cast<std::size_t>(arc_head(inst, arc))]) {
        row.coeffs.emplace_back(arc, Rational(1));
      }
    }
    if (row.coeffs.empty()) throw InfeasibleError("terminal " + std::to_string(t) + " cannot reach the root");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Rational> solve_with_cuts(const SteinerInstance& inst, int root, const std::vector<Rational>& cost,
                                      std::vector<LinearRow>& rows, const LinearRow* extra, Rational& objective) {
  SimplexSolver lp(2 * inst.num_edges(), cost);
  for (const auto& r : rows) lp.add_row(r);
  if (extra) lp.add_row(*extra);
  while (true) {
    LpResult res = lp.solve();
    if (res.status == LpStatus::infeasible) throw InfeasibleError("bidirected cut relaxation is infeasible");
    if (res.status == LpStatus::unbounded) throw InvariantViolation("bidirected cut relaxation reported unbounded");
    auto cuts = separate_bcr(inst, root, res.x);
    if (cuts.empty()) {
      objective = res.objective;
      return res.x;
    }
    for (auto& c : cuts) {
      lp.add_row(c);
      rows.push_back(std::move(c));
    }
  }
}

}  // namespace

BcrSolution solve_bcr(const SteinerInstance& inst, int root) {
  if (root < 0 || root >= inst.num_vertices() || !inst.is_terminal(root)) {
    throw InvalidArgument("BCR root must be a terminal");
  }
  const int arcs = 2 * inst.num_edges();
  std::vector<Rational> cost(static_cast<std::size_t>(arcs)), rank(static_cast<std::size_t>(arcs));
  for (int a = 0; a < arcs; ++a) {
    cost[static_cast<std::size_t>(a)] = inst.edge(a / 2).cost;
    rank[static_cast<std::size_t>(a)] = a / 2 + 1;
  }
  std::vector<LinearRow> rows;
  for (int t : inst.terminals()) {
    if (t == root) continue;
    LinearRow row;
    row.sense = Sense::ge;
    row.rhs = 1;
    for (int a = 0; a < arcs; ++a) {
      if (arc_tail(inst, a) == t) row.coeffs.emplace_back(a, Rational(1));
    }
    if (row.coeffs.empty()) throw InfeasibleError("terminal " + std::to_string(t) + " is isolated");
    rows.push_back(std::move(row));
  }
  BcrSolution sol;
  sol.root = root;
  Rational opt;
  solve_with_cuts(inst, root, cost, rows, nullptr, opt);
  // Second stage: lexicographic tie-breaking over the optimal face.
  LinearRow cap;
  cap.sense = Sense::le;
  cap.rhs = opt;
  for (int a = 0; a < arcs; ++a) {
    if (sgn(cost[static_cast<std::size_t>(a)]) != 0) cap.coeffs.emplace_back(a, cost[static_cast<std::size_t>(a)]);
  }
  Rational secondary;
  sol.x = solve_with_cuts(inst, root, rank, rows, cap.coeffs.empty() ? nullptr : &cap, secondary);
  for (int a = 0; a < arcs; ++a) sol.objective += cost[static_cast<std::size_t>(a)] * sol.x[static_cast<std::size_t>(a)];
  if (sol.objective != opt) throw InvariantViolation("lexicographic stage changed the BCR objective");
  sol.cut_rows = static_cast<int>(rows.size());
  return sol;
}

bool is_bcr_feasible(const SteinerInstance& inst, const BcrSolution& sol) {
  if (sol.x.size() != static_cast<std::size_t>(2 * inst.num_edges())) return false;
  for (const auto& v : sol.x) {
    if (sgn(v) < 0) return false;
  }
  for (int t : inst.terminals()) {
    if (t == sol.root) continue;
    ArcNetwork a = arc_network(inst, sol.x);
    if (a.net.max_flow(t, {sol.root}, Rational(1)) < 1) return false;
  }
  return true;
}

namespace {

// Reverses a unit flow from `from` to `to` on the given arc capacities. Arcs are
// (tail, head) pairs so that frozen star copies can take part.
void reverse_unit_flow(int num_nodes, const std::vector<std::pair<int, int>>& arcs, std::vector<Rational>& x,
                       int from, int to) {
  FlowNetwork<Rational> net(num_nodes);
  std::vector<int> handle(arcs.size(), -1);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (sgn(x[i]) > 0) handle[i] = net.add_arc(arcs[i].first, arcs[i].second, x[i]);
  }
  if (net.max_flow(from, {to}, Rational(1)) != 1) throw InvariantViolation("no unit flow towards the old root");
  std::vector<Rational> f(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (handle[i] >= 0) f[i] = net.flow(handle[i]);
  }
  // Arcs come in opposite pairs (2j, 2j + 1); only the net flow is reversed.
  for (std::size_t i = 0; i + 1 < arcs.size(); i += 2) {
    Rational net_flow = f[i] - f[i + 1];
    if (sgn(net_flow) > 0) {
      x[i] -= net_flow;
      x[i + 1] += net_flow;
    } else if (sgn(net_flow) < 0) {
      x[i + 1] += net_flow;
      x[i] -= net_flow;
    }
  }
}

}  // namespace

BcrSolution relocate_root(const SteinerInstance& inst, const BcrSolution& sol, int new_root) {
  if (new_root < 0 || new_root >= inst.num_vertices() || !inst.is_terminal(new_root)) {
    throw InvalidArgument("new root must be a terminal");
  }
  if (new_root == sol.root) return sol;
  std::vector<std::pair<int, int>> arcs;
  for (int a = 0; a < 2 * inst.num_edges(); ++a) arcs.emplace_back(arc_tail(inst, a), arc_head(inst, a));
  BcrSolution out = sol;
  reverse_unit_flow(inst.num_vertices(), arcs, out.x, new_root, sol.root);
  out.root = new_root;
  return out;
}

FractionalSolution natural_decomposition(const SteinerInstance& inst, const BcrSolution& sol, bool check) {
  for (const auto& e : inst.edges()) {
    if (inst.is_terminal(e.u) == inst.is_terminal(e.v)) {
      throw InvalidArgument("natural decomposition needs every edge to join a terminal and a Steiner vertex");
    }
  }
  const int base_arcs = 2 * inst.num_edges();
  std::vector<std::pair<int, int>> arcs;
  std::vector<Rational> order_cost;  // (cost, rank) order for star arcs
  for (int a = 0; a < base_arcs; ++a) arcs.emplace_back(arc_tail(inst, a), arc_head(inst, a));
  std::vector<Rational> x = sol.x;
  int root = sol.root;
  int num_nodes = inst.num_vertices();

  auto feasible_now = [&]() {
    for (int t : inst.terminals()) {
      if (t == root) continue;
      FlowNetwork<Rational> net(num_nodes);
      for (std::size_t i = 0; i < arcs.size(); ++i) {
        if (sgn(x[i]) > 0) net.add_arc(arcs[i].first, arcs[i].second, x[i]);
      }
      if (net.max_flow(t, {root}, Rational(1)) < 1) return false;
    }
    return true;
  };

  // Star arcs per centre: (arc out of u, arc into u, neighbour, edge id).
  struct Spoke {
    int out;
    int in;
    int terminal;
    int edge;
  };
  std::map<int, std::vector<Spoke>> stars;
  for (int e = 0; e < inst.num_edges(); ++e) {
    const Edge& ed = inst.edge(e);
    const bool u_center = !inst.is_terminal(ed.u);
    const int center = u_center ? ed.u : ed.v;
    const int term = u_center ? ed.v : ed.u;
    stars[center].push_back(Spoke{u_center ? 2 * e : 2 * e + 1, u_center ? 2 * e + 1 : 2 * e, term, e});
  }

  std::map<std::pair<int, TerminalMask>, Rational> weight;  // (centre, terminal mask)
  std::map<std::pair<int, TerminalMask>, Component> shape;
  for (auto& [center, spokes] : stars) {
    while (true) {
      std::optional<std::size_t> pick;
      for (std::size_t i = 0; i < spokes.size(); ++i) {
        const Spoke& s = spokes[i];
        if (sgn(x[static_cast<std::size_t>(s.out)]) == 0 && sgn(x[static_cast<std::size_t>(s.in)]) == 0) continue;
        if (!pick) {
          pick = i;
          continue;
        }
        const Spoke& b = spokes[*pick];
        const Rational& cs = inst.edge(s.edge).cost;
        const Rational& cb = inst.edge(b.edge).cost;
        if (cs < cb || (cs == cb && s.edge < b.edge)) pick = i;
      }
      if (!pick) break;
      const Spoke r = spokes[*pick];
      if (root != r.terminal) {
        reverse_unit_flow(num_nodes, arcs, x, r.terminal, root);
        root = r.terminal;
      }
      if (sgn(x[static_cast<std::size_t>(r.in)]) != 0) {
        throw InvariantViolation("flow enters star " + std::to_string(center) + " from its root terminal");
      }
      std::vector<int> h{r.out};
      for (const Spoke& s : spokes) {
        if (s.edge == r.edge) continue;
        if (sgn(x[static_cast<std::size_t>(s.out)]) != 0) {
          throw InvariantViolation("star " + std::to_string(center) + " ships flow past its cheapest spoke");
        }
        if (sgn(x[static_cast<std::size_t>(s.in)]) > 0) h.push_back(s.in);
      }
      if (h.size() < 2 || sgn(x[static_cast<std::size_t>(r.out)]) == 0) {
        throw InvariantViolation("star " + std::to_string(center) + " has capacity that no component can absorb");
      }
      Rational eps = x[static_cast<std::size_t>(h[0])];
      for (int a : h) eps = std::min(eps, x[static_cast<std::size_t>(a)]);

      // Freeze a private copy of the star with capacity eps; it stays in the network.
      const int copy = num_nodes++;
      Component comp;
      comp.cost = 0;
      for (int a : h) {
        x[static_cast<std::size_t>(a)] -= eps;
        const int edge = a / 2;
        const int term = inst.edge(edge).other(center);
        comp.terminals.push_back(term);
        comp.edges.push_back(edge);
        comp.cost += inst.edge(edge).cost;
        comp.terminal_mask |= TerminalMask{1} << inst.terminal_index(term);
        if (a == r.out) {
          arcs.emplace_back(copy, term);
          x.push_back(eps);
          arcs.emplace_back(term, copy);
          x.push_back(Rational(0));
        } else {
          arcs.emplace_back(term, copy);
          x.push_back(eps);
          arcs.emplace_back(copy, term);
          x.push_back(Rational(0));
        }
      }
      std::sort(comp.terminals.begin(), comp.terminals.end());
      std::sort(comp.edges.begin(), comp.edges.end());
      const auto key = std::make_pair(center, comp.terminal_mask);
      weight[key] += eps;
      shape.emplace(key, comp);
      if (check && !feasible_now()) throw InvariantViolation("capacity transfer broke BCR feasibility");
    }
  }

  FractionalSolution out;
  std::vector<std::pair<Component, Rational>> items;
  for (const auto& [key, w] : weight) items.emplace_back(shape.at(key), w);
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.first.terminal_mask < b.first.terminal_mask;
  });
  for (auto& [c, w] : items) {
    out.objective += c.cost * w;
    out.components.push_back(c);
    out.values.push_back(w);
  }
  if (out.objective != sol.objective) {
    throw InvariantViolation("decomposition objective " + to_string(out.objective) + " differs from BCR objective " +
                             to_string(sol.objective));
  }
  if (!is_lp_feasible(out.weighted(), inst.num_terminals())) {
    throw InvariantViolation("decomposition is not feasible for the component LP");
  }
  return out;
}

}  // namespace hypersteiner
