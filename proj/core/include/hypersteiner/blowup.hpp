#pragma once

#include <optional>
#include <vector>

#include "hypersteiner/components.hpp"
#include "hypersteiner/instance.hpp"

namespace hypersteiner {

struct BlowupEdge {
  int id = -1;             // stable across removals and contractions
  int u = -1;
  int v = -1;
  Rational cost;
  int original_edge = -1;  // instance edge id, -1 for zero-cost auxiliary edges
  int copy = -1;           // component copy the edge was created in

  int other(int w) const { return w == u ? v : u; }
};

/// A maximal subgraph connected through Steiner vertices. In a well-formed blowup
/// graph every piece is a tree whose leaves are exactly its terminals.
struct Piece {
  std::vector<int> edges;     // indices into BlowupGraph::edges(), ascending
  std::vector<int> vertices;  // ascending
  TerminalMask terminals = 0;
  int terminal_incidences = 0;
  Rational cost;
  int min_edge_id = -1;
  int root = -1;              // smallest vertex id
};

/// Unweighted multigraph realizing N times a fractional solution. Vertices
/// 0..num_terminals()-1 are the terminal labels (label i is instance terminal i);
/// every other vertex is a private Steiner copy.
class BlowupGraph {
 public:
  BlowupGraph() = default;
  BlowupGraph(const SteinerInstance& inst, long n);

  long N() const { return n_; }
  int num_terminals() const { return num_terminals_; }
  int num_vertices() const { return static_cast<int>(origin_.size()); }
  TerminalMask active_terminals() const { return active_; }
  int num_active_terminals() const { return mask_size(active_); }
  bool is_terminal_vertex(int v) const { return v < num_terminals_; }
  /// Instance vertex a blowup vertex was copied from.
  int vertex_origin(int v) const { return origin_.at(static_cast<std::size_t>(v)); }
  /// Label that instance terminal index i has been merged into.
  int terminal_representative(int i) const { return rep_.at(static_cast<std::size_t>(i)); }

  const std::vector<BlowupEdge>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  bool has_edge(int id) const;
  const BlowupEdge& edge_by_id(int id) const;
  int index_of(int id) const;
  int next_edge_id() const { return next_id_; }
  int next_copy() const { return next_copy_; }

  const std::vector<Piece>& pieces() const;
  Rational cost() const;

  /// Builder operations; they invalidate cached pieces.
  int add_vertex(int origin);
  int add_edge(int u, int v, const Rational& cost, int original_edge, int copy);
  int claim_copy() { return next_copy_++; }
  /// Moves the `from` end of an edge to the Steiner vertex `to`.
  void rewire_edge(int id, int from, int to);

  /// The graph minus the given edge ids (unknown ids are an error).
  BlowupGraph without(const std::vector<int>& edge_ids) const;
  /// Merge the terminals of `q` into its smallest label.
  BlowupGraph contracted(TerminalMask q) const;

  /// Every piece is a tree, its leaves are terminals, terminals are leaves, and
  /// no terminal label occurs twice in a piece. Returns a description of the first
  /// violation, or nullopt.
  std::optional<std::string> structural_problem() const;

 private:
  void compute_pieces() const;

  long n_ = 1;
  int num_terminals_ = 0;
  TerminalMask active_ = 0;
  std::vector<int> origin_;
  std::vector<int> rep_;
  std::vector<BlowupEdge> edges_;
  std::vector<int> index_of_;
  int next_id_ = 0;
  int next_copy_ = 0;
  mutable bool pieces_valid_ = false;
  mutable std::vector<Piece> pieces_;
};

/// Sorted list of blowup edge ids.
using EdgeIdSet = std::vector<int>;

/// h(S) = N(|S|-1) - sum over pieces of (|S cap P| - 1)^+, for nonempty S.
long slack(const BlowupGraph& x, TerminalMask s);
/// Slack of the graph with the edges F removed.
long slack(const BlowupGraph& x, const EdgeIdSet& removed, TerminalMask s);
/// Slack values for every nonempty subset of the active terminals, indexed by mask
/// (entries for masks outside the active set are meaningless).
std::vector<long> slack_table(const BlowupGraph& x);

/// h >= 0 on every nonempty S and h(R) = 0. Exhaustive up to 16 active terminals,
/// otherwise one max-flow per terminal.
bool is_feasible(const BlowupGraph& x);

/// The graph with N fresh copies of a component of the instance added.
BlowupGraph add_component(const BlowupGraph& x, const SteinerInstance& inst, const Component& q);
/// E(x) - K is a spanning tree of x once all terminals are identified.
bool is_splitting_set(const BlowupGraph& x, const EdgeIdSet& k);

/// `count` fresh copies of q, appended in place.
void add_component_copies(BlowupGraph& x, const SteinerInstance& inst, const Component& q, long count);
/// The graph with N fresh copies of one of its own pieces added.
BlowupGraph add_piece_copies(const BlowupGraph& x, int piece_index);

}  // namespace hypersteiner
