#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <vector>

#include "hypersteiner/error.hpp"

namespace hypersteiner {

/// Residual network with Edmonds-Karp augmentation towards a set of sinks.
/// Cap is an integral type or Rational. Repeated max_flow() calls continue from the
/// current flow, so capacities may be raised between calls.
template <class Cap>
class FlowNetwork {
 public:
  explicit FlowNetwork(int num_nodes = 0) : adj_(static_cast<std::size_t>(num_nodes)) {}

  int add_node() {
    adj_.emplace_back();
    return static_cast<int>(adj_.size()) - 1;
  }
  int num_nodes() const { return static_cast<int>(adj_.size()); }
  int num_arcs() const { return static_cast<int>(to_.size() / 2); }

  /// Returns an arc handle.
  int add_arc(int from, int to, const Cap& cap) {
    if (cap < Cap(0)) throw InvalidArgument("negative arc capacity");
    const int a = static_cast<int>(to_.size());
    to_.push_back(to);
    residual_.push_back(cap);
    capacity_.push_back(cap);
    to_.push_back(from);
    residual_.push_back(Cap(0));
    capacity_.push_back(Cap(0));
    adj_[static_cast<std::size_t>(from)].push_back(a);
    adj_[static_cast<std::size_t>(to)].push_back(a + 1);
    return a / 2;
  }

  int arc_from(int arc) const { return to_[static_cast<std::size_t>(2 * arc + 1)]; }
  int arc_to(int arc) const { return to_[static_cast<std::size_t>(2 * arc)]; }
  const Cap& capacity(int arc) const { return capacity_[static_cast<std::size_t>(2 * arc)]; }
  Cap flow(int arc) const { return capacity(arc) - residual_[static_cast<std::size_t>(2 * arc)]; }

  /// New capacity must be at least the current flow on the arc.
  void set_capacity(int arc, const Cap& cap) {
    const auto a = static_cast<std::size_t>(2 * arc);
    Cap f = capacity_[a] - residual_[a];
    if (cap < f) throw InvalidArgument("capacity below current flow");
    capacity_[a] = cap;
    residual_[a] = cap - f;
  }

  /// Augments until no path to any sink remains or `limit` more units were sent.
  /// Returns the additional flow.
  Cap max_flow(int source, const std::vector<int>& sinks, std::optional<Cap> limit = std::nullopt) {
    std::vector<char> is_sink(adj_.size(), 0);
    for (int t : sinks) is_sink[static_cast<std::size_t>(t)] = 1;
    if (is_sink[static_cast<std::size_t>(source)]) throw InvalidArgument("source is also a sink");
    Cap total(0);
    std::vector<int> via(adj_.size());
    while (!limit || total < *limit) {
      std::fill(via.begin(), via.end(), -1);
      std::queue<int> queue;
      queue.push(source);
      via[static_cast<std::size_t>(source)] = -2;
      int reached = -1;
      while (!queue.empty() && reached < 0) {
        int u = queue.front();
        queue.pop();
        for (int a : adj_[static_cast<std::size_t>(u)]) {
          int w = to_[static_cast<std::size_t>(a)];
          if (via[static_cast<std::size_t>(w)] != -1 || !(residual_[static_cast<std::size_t>(a)] > Cap(0))) continue;
          via[static_cast<std::size_t>(w)] = a;
          if (is_sink[static_cast<std::size_t>(w)]) {
            reached = w;
            break;
          }
          queue.push(w);
        }
      }
      if (reached < 0) break;
      Cap push = limit ? Cap(*limit - total) : Cap(-1);
      bool unset = !limit;
      for (int w = reached; w != source;) {
        int a = via[static_cast<std::size_t>(w)];
        const Cap& r = residual_[static_cast<std::size_t>(a)];
        if (unset || r < push) {
          push = r;
          unset = false;
        }
        w = to_[static_cast<std::size_t>(a ^ 1)];
      }
      for (int w = reached; w != source;) {
        int a = via[static_cast<std::size_t>(w)];
        residual_[static_cast<std::size_t>(a)] -= push;
        residual_[static_cast<std::size_t>(a ^ 1)] += push;
        w = to_[static_cast<std::size_t>(a ^ 1)];
      }
      total += push;
    }
    return total;
  }

  /// Nodes reachable from `source` in the residual network.
  std::vector<char> source_side(int source) const {
    std::vector<char> mark(adj_.size(), 0);
    std::queue<int> queue;
    mark[static_cast<std::size_t>(source)] = 1;
    queue.push(source);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      for (int a : adj_[static_cast<std::size_t>(u)]) {
        int w = to_[static_cast<std::size_t>(a)];
        if (mark[static_cast<std::size_t>(w)] || !(residual_[static_cast<std::size_t>(a)] > Cap(0))) continue;
        mark[static_cast<std::size_t>(w)] = 1;
        queue.push(w);
      }
    }
    return mark;
  }

  /// Nodes that can still reach a sink in the residual network. After a maximum
  /// flow this is the smallest sink-side minimum cut.
  std::vector<char> sink_side(const std::vector<int>& sinks) const {
    std::vector<char> mark(adj_.size(), 0);
    std::queue<int> queue;
    for (int t : sinks) {
      if (!mark[static_cast<std::size_t>(t)]) {
        mark[static_cast<std::size_t>(t)] = 1;
        queue.push(t);
      }
    }
    while (!queue.empty()) {
      int w = queue.front();
      queue.pop();
      for (int a : adj_[static_cast<std::size_t>(w)]) {
        int x = to_[static_cast<std::size_t>(a)];
        if (mark[static_cast<std::size_t>(x)] || !(residual_[static_cast<std::size_t>(a ^ 1)] > Cap(0))) continue;
        mark[static_cast<std::size_t>(x)] = 1;
        queue.push(x);
      }
    }
    return mark;
  }

 private:
  std::vector<std::vector<int>> adj_;
  std::vector<int> to_;
  std::vector<Cap> residual_;
  std::vector<Cap> capacity_;
};

}  // namespace hypersteiner
