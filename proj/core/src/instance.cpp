#include "hypersteiner/instance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "hypersteiner/error.hpp"

namespace hypersteiner {

SteinerInstance::SteinerInstance(int num_vertices, std::vector<int> terminals,
                                 std::vector<Edge> edges)
    : num_vertices_(num_vertices), terminals_(std::move(terminals)), edges_(std::move(edges)) {
  if (num_vertices_ < 0) throw InvalidArgument("negative vertex count");
  if (terminals_.empty()) throw InvalidArgument("no terminals");
  std::sort(terminals_.begin(), terminals_.end());
  if (std::adjacent_find(terminals_.begin(), terminals_.end()) != terminals_.end()) {
    throw InvalidArgument("duplicate terminal");
  }
  terminal_index_.assign(static_cast<std::size_t>(num_vertices_), -1);
  for (std::size_t i = 0; i < terminals_.size(); ++i) {
    int t = terminals_[i];
    if (t < 0 || t >= num_vertices_) throw InvalidArgument("terminal id out of range");
    terminal_index_[static_cast<std::size_t>(t)] = static_cast<int>(i);
  }
  adjacency_.assign(static_cast<std::size_t>(num_vertices_), {});
  std::set<std::pair<int, int>> seen;
  for (std::size_t id = 0; id < edges_.size(); ++id) {
    Edge& e = edges_[id];
    if (e.u < 0 || e.u >= num_vertices_ || e.v < 0 || e.v >= num_vertices_) {
      throw InvalidArgument("edge endpoint out of range");
    }
    if (e.u == e.v) throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
    if (sgn(e.cost) < 0) throw InvalidArgument("negative edge cost");
    e.cost.canonicalize();
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) {
      throw InvalidArgument("parallel edge between " + std::to_string(key.first) + " and " +
                            std::to_string(key.second));
    }
    adjacency_[static_cast<std::size_t>(e.u)].emplace_back(e.v, static_cast<int>(id));
    adjacency_[static_cast<std::size_t>(e.v)].emplace_back(e.u, static_cast<int>(id));
  }
}

bool SteinerInstance::is_quasi_bipartite() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [&](const Edge& e) { return is_terminal(e.u) || is_terminal(e.v); });
}

bool SteinerInstance::is_connected() const {
  std::vector<char> seen(static_cast<std::size_t>(num_vertices_), 0);
  std::queue<int> queue;
  queue.push(terminals_.front());
  seen[static_cast<std::size_t>(terminals_.front())] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop();
    for (auto [w, id] : adjacency_[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push(w);
      }
    }
  }
  return std::all_of(terminals_.begin(), terminals_.end(),
                     [&](int t) { return seen[static_cast<std::size_t>(t)] != 0; });
}

int SteinerInstance::find_edge(int u, int v) const {
  for (auto [w, id] : adjacency_.at(static_cast<std::size_t>(u))) {
    if (w == v) return id;
  }
  return -1;
}

Rational SteinerInstance::total_cost() const {
  Rational sum = 0;
  for (const auto& e : edges_) sum += e.cost;
  return sum;
}

bool SteinerInstance::operator==(const SteinerInstance& o) const {
  return num_vertices_ == o.num_vertices_ && terminals_ == o.terminals_ && edges_ == o.edges_;
}

Rational edge_set_cost(const SteinerInstance& inst, const std::vector<int>& edge_ids) {
  Rational sum = 0;
  for (int id : edge_ids) sum += inst.edge(id).cost;
  return sum;
}

bool is_steiner_tree(const SteinerInstance& inst, const std::vector<int>& edge_ids) {
  std::vector<int> ids = edge_ids;
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) return false;
  int n = inst.num_vertices();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    }
    return x;
  };
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (int id : ids) {
    if (id < 0 || id >= inst.num_edges()) return false;
    const Edge& e = inst.edge(id);
    int a = find(e.u), b = find(e.v);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  int root = find(inst.terminals().front());
  for (int t : inst.terminals()) {
    if (find(t) != root) return false;
  }
  for (int v = 0; v < n; ++v) {
    if (degree[static_cast<std::size_t>(v)] == 0) continue;
    if (find(v) != root) return false;
    if (degree[static_cast<std::size_t>(v)] == 1 && !inst.is_terminal(v)) return false;
  }
  return true;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::istringstream in(line);
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

int parse_id(const std::string& word, int line) {
  if (word.empty() || !std::all_of(word.begin(), word.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ParseError(line, "expected a vertex id, got '" + word + "'");
  }
  if (word.size() > 9) throw ParseError(line, "vertex id too large");
  return std::stoi(word);
}

}  // namespace

SteinerInstance parse_stp(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  enum class Section { none, graph, terminals, ignored } section = Section::none;
  int declared_nodes = -1, declared_edges = -1, declared_terminals = -1;
  bool saw_graph = false, saw_terminals = false, saw_eof = false;
  std::vector<std::pair<int, Edge>> edges;  // (line, edge with 1-based ids)
  std::vector<std::pair<int, int>> terminals;

  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto words = split_words(raw);
    if (words.empty()) continue;
    std::string key = lower(words[0]);
    if (saw_eof) throw ParseError(line_no, "content after EOF");
    if (section == Section::none && key == "33d32945") continue;
    if (section == Section::none) {
      if (key == "section") {
        if (words.size() < 2) throw ParseError(line_no, "malformed section header");
        std::string name = lower(words[1]);
        if (name == "graph") {
          if (saw_graph) throw ParseError(line_no, "duplicate Graph section");
          saw_graph = true;
          section = Section::graph;
        } else if (name == "terminals") {
          if (saw_terminals) throw ParseError(line_no, "duplicate Terminals section");
          saw_terminals = true;
          section = Section::terminals;
        } else {
          section = Section::ignored;
        }
        continue;
      }
      if (key == "eof") {
        saw_eof = true;
        continue;
      }
      throw ParseError(line_no, "unexpected line outside a section: '" + words[0] + "'");
    }
    if (key == "end") {
      section = Section::none;
      continue;
    }
    if (key == "section") throw ParseError(line_no, "malformed section: missing END");
    if (section == Section::ignored) continue;
    if (section == Section::graph) {
      if (key == "nodes" || key == "edges") {
        if (words.size() != 2) throw ParseError(line_no, "malformed " + words[0] + " line");
        int value = parse_id(words[1], line_no);
        (key == "nodes" ? declared_nodes : declared_edges) = value;
      } else if (key == "e") {
        if (words.size() != 4) throw ParseError(line_no, "malformed edge line");
        Edge e{parse_id(words[1], line_no), parse_id(words[2], line_no), 0};
        try {
          e.cost = parse_rational(words[3]);
        } catch (const InvalidArgument& err) {
          throw ParseError(line_no, err.what());
        }
        if (sgn(e.cost) < 0) throw ParseError(line_no, "negative cost");
        edges.emplace_back(line_no, e);
      } else if (key == "a") {
        throw ParseError(line_no, "directed arcs are not supported");
      } else {
        throw ParseError(line_no, "malformed Graph section: unknown keyword '" + words[0] + "'");
      }
    } else if (section == Section::terminals) {
      if (key == "terminals") {
        if (words.size() != 2) throw ParseError(line_no, "malformed Terminals line");
        declared_terminals = parse_id(words[1], line_no);
      } else if (key == "t") {
        if (words.size() != 2) throw ParseError(line_no, "malformed terminal line");
        terminals.emplace_back(line_no, parse_id(words[1], line_no));
      } else if (key == "root" || key == "rootp") {
        continue;
      } else {
        throw ParseError(line_no, "malformed Terminals section: unknown keyword '" + words[0] + "'");
      }
    }
  }
  if (section != Section::none) throw ParseError(line_no, "malformed section: missing END");
  if (!saw_graph) throw ParseError(line_no, "missing Graph section");
  if (declared_nodes < 0) throw ParseError(line_no, "missing Nodes declaration");
  if (declared_edges >= 0 && declared_edges != static_cast<int>(edges.size())) {
    throw ParseError(line_no, "declared " + std::to_string(declared_edges) + " edges, found " +
                                  std::to_string(edges.size()));
  }
  if (terminals.empty()) throw ParseError(line_no, "no terminals");
  if (declared_terminals >= 0 && declared_terminals != static_cast<int>(terminals.size())) {
    throw ParseError(line_no, "declared " + std::to_string(declared_terminals) +
                                  " terminals, found " + std::to_string(terminals.size()));
  }

  std::vector<Edge> out_edges;
  std::set<std::pair<int, int>> seen;
  for (auto& [ln, e] : edges) {
    for (int v : {e.u, e.v}) {
      if (v < 1 || v > declared_nodes) {
        throw ParseError(ln, "dangling vertex id " + std::to_string(v));
      }
    }
    if (e.u == e.v) throw ParseError(ln, "self-loop");
    if (!seen.insert(std::minmax(e.u, e.v)).second) throw ParseError(ln, "parallel edge");
    out_edges.push_back(Edge{e.u - 1, e.v - 1, e.cost});
  }
  std::vector<int> out_terminals;
  std::set<int> seen_terminals;
  for (auto [ln, t] : terminals) {
    if (t < 1 || t > declared_nodes) throw ParseError(ln, "dangling vertex id " + std::to_string(t));
    if (!seen_terminals.insert(t).second) throw ParseError(ln, "duplicate terminal");
    out_terminals.push_back(t - 1);
  }
  return SteinerInstance(declared_nodes, std::move(out_terminals), std::move(out_edges));
}

SteinerInstance read_stp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_stp(buffer.str());
}

std::string render_stp(const SteinerInstance& inst, std::string_view name) {
  std::ostringstream out;
  out << "33D32945 STP File, STP Format Version 1.0\n\n";
  out << "SECTION Comment\n";
  out << "Name \"" << (name.empty() ? std::string_view("instance") : name) << "\"\n";
  out << "END\n\n";
  out << "SECTION Graph\n";
  out << "Nodes " << inst.num_vertices() << "\n";
  out << "Edges " << inst.num_edges() << "\n";
  for (const auto& e : inst.edges()) {
    out << "E " << e.u + 1 << ' ' << e.v + 1 << ' ' << to_string(e.cost) << "\n";
  }
  out << "END\n\n";
  out << "SECTION Terminals\n";
  out << "Terminals " << inst.num_terminals() << "\n";
  for (int t : inst.terminals()) out << "T " << t + 1 << "\n";
  out << "END\n\nEOF\n";
  return out.str();
}

SteinerInstance generate_random(int num_terminals, int num_steiner, const Rational& density,
                                std::uint64_t seed, bool quasi_bipartite) {
  if (num_terminals < 2) throw InvalidArgument("need at least two terminals");
  if (num_steiner < 0) throw InvalidArgument("negative Steiner vertex count");
  if (sgn(density) < 0 || density > 1) throw InvalidArgument("density must lie in [0, 1]");
  if (!density.get_num().fits_ulong_p() || !density.get_den().fits_ulong_p()) {
    throw InvalidArgument("density numerator or denominator too large");
  }
  const int n = num_terminals + num_steiner;
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
  };
  auto is_terminal = [&](int v) { return v < num_terminals; };
  auto allowed = [&](int a, int b) { return !quasi_bipartite || is_terminal(a) || is_terminal(b); };

  // Random insertion order; the first vertex is a terminal so every Steiner vertex
  // has an admissible earlier neighbour even in the quasi-bipartite case.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  auto first_terminal = std::find_if(order.begin(), order.end(), is_terminal);
  std::iter_swap(order.begin(), first_terminal);

  std::set<std::pair<int, int>> pairs;
  for (int i = 1; i < n; ++i) {
    int v = order[static_cast<std::size_t>(i)];
    std::vector<int> candidates;
    for (int j = 0; j < i; ++j) {
      int w = order[static_cast<std::size_t>(j)];
      if (allowed(v, w)) candidates.push_back(w);
    }
    int w = candidates[uniform(candidates.size())];
    pairs.insert(std::minmax(v, w));
  }
  const std::uint64_t num = density.get_num().get_ui();
  const std::uint64_t den = density.get_den().get_ui();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (pairs.count({a, b}) || !allowed(a, b)) continue;
      if (uniform(den) < num) pairs.insert({a, b});
    }
  }
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) {
    edges.push_back(Edge{a, b, Rational(static_cast<long>(1 + uniform(10)))});
  }
  std::vector<int> terminals(static_cast<std::size_t>(num_terminals));
  std::iota(terminals.begin(), terminals.end(), 0);
  return SteinerInstance(n, std::move(terminals), std::move(edges));
}

SteinerInstance generate_random_hubs(int num_terminals, int num_steiner, std::uint64_t seed) {
  if (num_terminals < 3) throw InvalidArgument("need at least three terminals");
  if (num_steiner < 0) throw InvalidArgument("negative Steiner vertex count");
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  std::vector<Edge> edges;
  for (int t = 0; t + 1 < num_terminals; ++t) {
    edges.push_back(Edge{t, t + 1, Rational(static_cast<long>(uniform(5, 9)))});
  }
  std::vector<int> pool(static_cast<std::size_t>(num_terminals));
  std::iota(pool.begin(), pool.end(), 0);
  for (int s = 0; s < num_steiner; ++s) {
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int j = 0; j < 3; ++j) {
      edges.push_back(Edge{pool[static_cast<std::size_t>(j)], num_terminals + s, Rational(static_cast<long>(uniform(2, 3)))});
    }
  }
  std::vector<int> terminals(static_cast<std::size_t>(num_terminals));
  std::iota(terminals.begin(), terminals.end(), 0);
  return SteinerInstance(num_terminals + num_steiner, std::move(terminals), std::move(edges));
}

}  // namespace hypersteiner
