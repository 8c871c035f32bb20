#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypersteiner/rational.hpp"

namespace hypersteiner {

/// Bit i set means terminal index i (position in SteinerInstance::terminals()).
using TerminalMask = std::uint64_t;

inline int mask_size(TerminalMask m) { return __builtin_popcountll(m); }
inline bool mask_contains(TerminalMask m, int i) { return ((m >> i) & 1U) != 0; }

struct Edge {
  int u = 0;
  int v = 0;
  Rational cost;

  int other(int w) const { return w == u ? v : u; }
  bool operator==(const Edge& o) const { return u == o.u && v == o.v && cost == o.cost; }
};

/// (neighbour, edge id) pairs per vertex.
using Adjacency = std::vector<std::vector<std::pair<int, int>>>;

/// Weighted undirected simple graph with a terminal set. Vertices are 0..n-1.
class SteinerInstance {
 public:
  SteinerInstance() = default;
  SteinerInstance(int num_vertices, std::vector<int> terminals, std::vector<Edge> edges);

  int num_vertices() const { return num_vertices_; }
  int num_terminals() const { return static_cast<int>(terminals_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Sorted ascending.
  const std::vector<int>& terminals() const { return terminals_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }

  bool is_terminal(int v) const { return terminal_index_.at(static_cast<std::size_t>(v)) >= 0; }
  /// Position of v in terminals(), or -1.
  int terminal_index(int v) const { return terminal_index_.at(static_cast<std::size_t>(v)); }

  /// No edge joins two non-terminals.
  bool is_quasi_bipartite() const;
  /// All terminals lie in one connected component.
  bool is_connected() const;
  const Adjacency& adjacency() const { return adjacency_; }
  /// Edge id joining u and v, or -1.
  int find_edge(int u, int v) const;
  Rational total_cost() const;

  bool operator==(const SteinerInstance& o) const;

 private:
  int num_vertices_ = 0;
  std::vector<int> terminals_;
  std::vector<Edge> edges_;
  std::vector<int> terminal_index_;
  Adjacency adjacency_;
};

/// A set of instance edges; after pruning it is a tree whose leaves are terminals.
struct SteinerTree {
  std::vector<int> edges;
  Rational cost;
};

/// Sum of the costs of the given edge ids.
Rational edge_set_cost(const SteinerInstance& inst, const std::vector<int>& edge_ids);

/// True when the edges form a tree spanning every terminal whose leaves are all terminals.
bool is_steiner_tree(const SteinerInstance& inst, const std::vector<int>& edge_ids);

/// SteinLib STP reader. Vertex ids in the file are 1-based.
SteinerInstance parse_stp(std::string_view text);
SteinerInstance read_stp_file(const std::string& path);
std::string render_stp(const SteinerInstance& inst, std::string_view name = "");

/// Connected random instance. Terminals are vertices 0..t-1, Steiner vertices follow.
/// Costs are integers in [1, 10].
SteinerInstance generate_random(int num_terminals, int num_steiner, const Rational& density,
                                std::uint64_t seed, bool quasi_bipartite);

/// Quasi-bipartite instance whose Steiner vertices are hubs over random terminal
/// triples (edge costs in [2, 3]); consecutive terminals are also joined directly
/// (costs in [5, 9]). Fractional LP optima are common on this family.
SteinerInstance generate_random_hubs(int num_terminals, int num_steiner, std::uint64_t seed);

}  // namespace hypersteiner
