#pragma once

#include <optional>
#include <vector>

#include "hypersteiner/instance.hpp"

namespace hypersteiner {

/// A full component: a tree in the instance whose leaves are exactly its terminals
/// and whose internal vertices are Steiner vertices.
struct Component {
  TerminalMask terminal_mask = 0;
  std::vector<int> terminals;  // vertex ids, ascending
  std::vector<int> edges;      // instance edge ids, ascending
  Rational cost;

  int size() const { return static_cast<int>(terminals.size()); }
};

/// Largest terminal count accepted by the subset dynamic program.
inline constexpr int kMaxEnumerationTerminals = 16;

/// Cheapest full component for every terminal subset S with 2 <= |S| <= k, sorted by
/// mask. Subsets that cannot be joined by such a tree are omitted.
std::vector<Component> enumerate_components(const SteinerInstance& inst, int k);

/// Cheapest full component on exactly the terminals of `mask`, or nullopt.
std::optional<Component> cheapest_component(const SteinerInstance& inst, TerminalMask mask);
std::optional<Rational> min_component_cost(const SteinerInstance& inst, TerminalMask mask);

/// Checks the structural invariants of a component against its instance.
bool is_valid_component(const SteinerInstance& inst, const Component& c);

}  // namespace hypersteiner
