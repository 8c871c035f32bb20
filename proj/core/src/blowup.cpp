#include "hypersteiner/blowup.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "hypersteiner/error.hpp"
#include "hypersteiner/sepflow.hpp"

namespace hypersteiner {

BlowupGraph::BlowupGraph(const SteinerInstance& inst, long n)
    : n_(n), num_terminals_(inst.num_terminals()) {
  if (n < 1) throw InvalidArgument("blowup factor must be positive");
  if (num_terminals_ > 63) throw InvalidArgument("at most 63 terminals are supported");
  active_ = num_terminals_ == 0 ? 0 : (TerminalMask{1} << num_terminals_) - 1;
  origin_ = inst.terminals();
  rep_.resize(static_cast<std::size_t>(num_terminals_));
  std::iota(rep_.begin(), rep_.end(), 0);
}

bool BlowupGraph::has_edge(int id) const {
  return id >= 0 && id < static_cast<int>(index_of_.size()) && index_of_[static_cast<std::size_t>(id)] >= 0;
}

int BlowupGraph::index_of(int id) const {
  if (!has_edge(id)) throw InvalidArgument("unknown blowup edge id " + std::to_string(id));
  return index_of_[static_cast<std::size_t>(id)];
}

const BlowupEdge& BlowupGraph::edge_by_id(int id) const {
  return edges_[static_cast<std::size_t>(index_of(id))];
}

int BlowupGraph::add_vertex(int origin) {
  origin_.push_back(origin);
  return static_cast<int>(origin_.size()) - 1;
}

int BlowupGraph::add_edge(int u, int v, const Rational& cost, int original_edge, int copy) {
  if (u < 0 || v < 0 || u >= num_vertices() || v >= num_vertices()) {
    throw InvalidArgument("blowup edge endpoint out of range");
  }
  if (u == v) throw InvalidArgument("blowup edges cannot be loops");
  for (int w : {u, v}) {
    if (is_terminal_vertex(w) && !mask_contains(active_, w)) {
      throw InvalidArgument("edge attached to a contracted terminal label");
    }
  }
  const int id = next_id_++;
  index_of_.resize(static_cast<std::size_t>(next_id_), -1);
  index_of_[static_cast<std::size_t>(id)] = static_cast<int>(edges_.size());
  edges_.push_back(BlowupEdge{id, u, v, cost, original_edge, copy});
  pieces_valid_ = false;
  return id;
}

void BlowupGraph::rewire_edge(int id, int from, int to) {
  BlowupEdge& e = edges_[static_cast<std::size_t>(index_of(id))];
  if (to < 0 || to >= num_vertices() || is_terminal_vertex(to)) {
    throw InvalidArgument("edges can only be moved onto Steiner vertices");
  }
  if (e.u == from) {
    e.u = to;
  } else if (e.v == from) {
    e.v = to;
  } else {
    throw InvalidArgument("edge " + std::to_string(id) + " is not incident to vertex " + std::to_string(from));
  }
  if (e.u == e.v) throw InvalidArgument("blowup edges cannot be loops");
  pieces_valid_ = false;
}

void BlowupGraph::compute_pieces() const {
  const std::size_t m = edges_.size();
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  std::vector<int> first_at(origin_.size(), -1);
  for (std::size_t i = 0; i < m; ++i) {
    for (int w : {edges_[i].u, edges_[i].v}) {
      if (is_terminal_vertex(w)) continue;
      int& f = first_at[static_cast<std::size_t>(w)];
      if (f < 0) {
        f = static_cast<int>(i);
      } else {
        int a = find(f), b = find(static_cast<int>(i));
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
      }
    }
  }
  std::map<int, std::size_t> slot;
  std::vector<Piece> out;
  for (std::size_t i = 0; i < m; ++i) {
    int r = find(static_cast<int>(i));
    auto [it, fresh] = slot.emplace(r, out.size());
    if (fresh) out.emplace_back();
    Piece& p = out[it->second];
    const BlowupEdge& e = edges_[i];
    p.edges.push_back(static_cast<int>(i));
    p.cost += e.cost;
    if (p.min_edge_id < 0 || e.id < p.min_edge_id) p.min_edge_id = e.id;
    for (int w : {e.u, e.v}) {
      p.vertices.push_back(w);
      if (is_terminal_vertex(w)) {
        p.terminals |= TerminalMask{1} << w;
        ++p.terminal_incidences;
      }
    }
  }
  for (auto& p : out) {
    std::sort(p.vertices.begin(), p.vertices.end());
    p.vertices.erase(std::unique(p.vertices.begin(), p.vertices.end()), p.vertices.end());
    p.root = p.vertices.front();
  }
  std::sort(out.begin(), out.end(), [](const Piece& a, const Piece& b) {
    return a.terminals != b.terminals ? a.terminals < b.terminals : a.min_edge_id < b.min_edge_id;
  });
  pieces_ = std::move(out);
  pieces_valid_ = true;
}

const std::vector<Piece>& BlowupGraph::pieces() const {
  if (!pieces_valid_) compute_pieces();
  return pieces_;
}

Rational BlowupGraph::cost() const {
  Rational sum = 0;
  for (const auto& e : edges_) sum += e.cost;
  return sum;
}

BlowupGraph BlowupGraph::without(const std::vector<int>& edge_ids) const {
  BlowupGraph out = *this;
  std::vector<char> drop(edges_.size(), 0);
  for (int id : edge_ids) drop[static_cast<std::size_t>(index_of(id))] = 1;
  out.edges_.clear();
  std::fill(out.index_of_.begin(), out.index_of_.end(), -1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (drop[i]) continue;
    out.index_of_[static_cast<std::size_t>(edges_[i].id)] = static_cast<int>(out.edges_.size());
    out.edges_.push_back(edges_[i]);
  }
  out.pieces_valid_ = false;
  return out;
}

BlowupGraph BlowupGraph::contracted(TerminalMask q) const {
  if ((q & ~active_) != 0) throw InvalidArgument("contraction names an inactive terminal");
  if (q == 0) throw InvalidArgument("empty contraction");
  const int target = std::countr_zero(q);
  BlowupGraph out = *this;
  for (auto& e : out.edges_) {
    if (is_terminal_vertex(e.u) && mask_contains(q, e.u)) e.u = target;
    if (is_terminal_vertex(e.v) && mask_contains(q, e.v)) e.v = target;
    if (e.u == e.v) throw InvalidArgument("contraction would turn edge " + std::to_string(e.id) + " into a loop");
  }
  for (auto& r : out.rep_) {
    if (mask_contains(q, r)) r = target;
  }
  out.active_ = (active_ & ~q) | (TerminalMask{1} << target);
  out.pieces_valid_ = false;
  return out;
}

std::optional<std::string> BlowupGraph::structural_problem() const {
  std::vector<int> degree(origin_.size(), 0);
  for (const auto& e : edges_) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  for (const auto& p : pieces()) {
    if (p.vertices.size() != p.edges.size() + 1) {
      return "piece with min edge " + std::to_string(p.min_edge_id) + " is not a tree";
    }
    if (p.terminal_incidences != mask_size(p.terminals)) {
      return "piece with min edge " + std::to_string(p.min_edge_id) + " touches a terminal twice";
    }
    for (int v : p.vertices) {
      if (!is_terminal_vertex(v) && degree[static_cast<std::size_t>(v)] < 2) {
        return "Steiner vertex " + std::to_string(v) + " is a leaf";
      }
    }
  }
  return std::nullopt;
}

namespace {

inline long excess(TerminalMask s, TerminalMask piece) {
  int k = mask_size(s & piece);
  return k > 1 ? k - 1 : 0;
}

}  // namespace

long slack(const BlowupGraph& x, TerminalMask s) {
  if (s == 0) throw InvalidArgument("slack is undefined on the empty set");
  if ((s & ~x.active_terminals()) != 0) throw InvalidArgument("slack set contains inactive terminals");
  long h = x.N() * (mask_size(s) - 1);
  for (const auto& p : x.pieces()) h -= excess(s, p.terminals);
  return h;
}

long slack(const BlowupGraph& x, const EdgeIdSet& removed, TerminalMask s) {
  return slack(x.without(removed), s);
}

std::vector<long> slack_table(const BlowupGraph& x) {
  const TerminalMask active = x.active_terminals();
  const int bits = 64 - std::countl_zero(active);
  if (bits > kMaxEnumerationTerminals) throw InvalidArgument("slack table too large");
  std::vector<long> table(std::size_t{1} << bits, 0);
  std::vector<TerminalMask> piece_masks;
  for (const auto& p : x.pieces()) {
    if (mask_size(p.terminals) > 1) piece_masks.push_back(p.terminals);
  }
  for (TerminalMask s = active; s != 0; s = (s - 1) & active) {
    long h = x.N() * (mask_size(s) - 1);
    for (TerminalMask p : piece_masks) h -= excess(s, p);
    table[static_cast<std::size_t>(s)] = h;
  }
  return table;
}

bool is_feasible(const BlowupGraph& x) {
  const TerminalMask active = x.active_terminals();
  if (active == 0) return true;
  if (mask_size(active) <= kMaxEnumerationTerminals && 64 - std::countl_zero(active) <= kMaxEnumerationTerminals) {
    auto table = slack_table(x);
    if (table[static_cast<std::size_t>(active)] != 0) return false;
    for (TerminalMask s = active; s != 0; s = (s - 1) & active) {
      if (table[static_cast<std::size_t>(s)] < 0) return false;
    }
    return true;
  }
  return !separate(x).violated.has_value() && slack(x, active) == 0;
}

bool is_splitting_set(const BlowupGraph& x, const EdgeIdSet& k) {
  std::vector<char> in_k(x.edges().size(), 0);
  for (int id : k) {
    if (!x.has_edge(id)) return false;
    in_k[static_cast<std::size_t>(x.index_of(id))] = 1;
  }
  // Node 0 stands for all terminals.
  auto node = [&](int v) { return x.is_terminal_vertex(v) ? 0 : v; };
  std::vector<int> parent(static_cast<std::size_t>(x.num_vertices()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  std::vector<char> touched(static_cast<std::size_t>(x.num_vertices()), 0);
  for (std::size_t i = 0; i < x.edges().size(); ++i) {
    const auto& e = x.edges()[i];
    touched[static_cast<std::size_t>(node(e.u))] = 1;
    touched[static_cast<std::size_t>(node(e.v))] = 1;
    if (in_k[i]) continue;
    int a = find(node(e.u));
    int b = find(node(e.v));
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
  }
  if (x.num_vertices() == 0) return true;
  const int hub = find(0);
  for (int v = 0; v < x.num_vertices(); ++v) {
    if (touched[static_cast<std::size_t>(v)] && find(v) != hub) return false;
  }
  return true;
}

void add_component_copies(BlowupGraph& x, const SteinerInstance& inst, const Component& q, long count) {
  TerminalMask seen = 0;
  for (int t : q.terminals) {
    int label = x.terminal_representative(inst.terminal_index(t));
    if (mask_contains(seen, label)) throw InvalidArgument("component terminals were merged together");
    seen |= TerminalMask{1} << label;
  }
  for (long c = 0; c < count; ++c) {
    const int copy = x.claim_copy();
    std::map<int, int> local;
    auto map_vertex = [&](int v) {
      if (inst.is_terminal(v)) return x.terminal_representative(inst.terminal_index(v));
      auto it = local.find(v);
      if (it != local.end()) return it->second;
      int fresh = x.add_vertex(v);
      local.emplace(v, fresh);
      return fresh;
    };
    for (int id : q.edges) {
      const Edge& e = inst.edge(id);
      x.add_edge(map_vertex(e.u), map_vertex(e.v), e.cost, id, copy);
    }
  }
}

BlowupGraph add_component(const BlowupGraph& x, const SteinerInstance& inst, const Component& q) {
  BlowupGraph out = x;
  add_component_copies(out, inst, q, x.N());
  return out;
}

BlowupGraph add_piece_copies(const BlowupGraph& x, int piece_index) {
  const auto& pieces = x.pieces();
  if (piece_index < 0 || piece_index >= static_cast<int>(pieces.size())) {
    throw InvalidArgument("piece index out of range");
  }
  const Piece p = pieces[static_cast<std::size_t>(piece_index)];
  BlowupGraph out = x;
  for (long c = 0; c < x.N(); ++c) {
    const int copy = out.claim_copy();
    std::map<int, int> local;
    auto map_vertex = [&](int v) {
      if (x.is_terminal_vertex(v)) return v;
      auto it = local.find(v);
      if (it != local.end()) return it->second;
      int fresh = out.add_vertex(x.vertex_origin(v));
      local.emplace(v, fresh);
      return fresh;
    };
    for (int i : p.edges) {
      const BlowupEdge& e = x.edges()[static_cast<std::size_t>(i)];
      out.add_edge(map_vertex(e.u), map_vertex(e.v), e.cost, e.original_edge, copy);
    }
  }
  return out;
}

}  // namespace hypersteiner
