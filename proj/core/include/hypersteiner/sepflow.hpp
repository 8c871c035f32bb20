#pragma once

#include <optional>
#include <vector>

#include "hypersteiner/blowup.hpp"
#include "hypersteiner/maxflow.hpp"

namespace hypersteiner {

/// Directed network whose maximum s-(Q + t) flow equals y(R) + N + min over S
/// containing Q of h(S). Each piece is oriented away from its root r_C and fed by a
/// unit arc s -> r_C; terminal v drains into t with capacity y_v.
struct SeparationDigraph {
  FlowNetwork<long> net;
  int source = -1;
  int sink = -1;
  long n = 1;
  std::vector<long> y;             // per terminal label; 0 for inactive labels
  long y_total = 0;
  std::vector<int> root;           // per piece
  std::vector<int> edge_arc;       // per blowup edge index
  int original_arcs = 0;           // edge arcs + root arcs + terminal arcs
  std::optional<int> deficient;    // a terminal with y_v < 0, if any

  int terminal_node(int label) const { return label; }
};

/// Builds the digraph for the graph itself. `roots` optionally overrides the root
/// vertex of each piece (indexed like pieces()). When some y_v < 0 that terminal
/// arc gets capacity 0 and `deficient` names the first such terminal.
SeparationDigraph build_separation_digraph(const BlowupGraph& x,
                                           const std::vector<int>* roots = nullptr);

/// Digraph for the graph minus `removed`. Terminals whose leaf edges were removed
/// keep a trivial one-vertex piece each, so y is that of the unreduced graph.
SeparationDigraph build_separation_digraph(const BlowupGraph& x, const EdgeIdSet& removed);

struct MinSlack {
  long value = 0;           // min over S containing Q of h(S)
  TerminalMask argmin = 0;  // the minimizer read off the minimal sink-side cut
  long flow = 0;
};

/// Throws InfeasibleError when some terminal is covered by fewer than N pieces.
MinSlack min_slack_over_supersets(const BlowupGraph& x, TerminalMask q);
MinSlack min_slack_over_supersets(const BlowupGraph& x, const EdgeIdSet& removed, TerminalMask q);
MinSlack min_slack_in_digraph(SeparationDigraph& d, TerminalMask active, TerminalMask q);

struct SeparationResult {
  std::optional<TerminalMask> violated;  // most negative slack, smallest mask on ties
  long value = 0;                        // its slack (0 when nothing is violated)
  bool equality_holds = true;            // h(R) == 0
  std::optional<int> deficient;          // terminal with y_v < 0
};

/// One max-flow per terminal.
SeparationResult separate(const BlowupGraph& x);

/// A terminal set with a fractional weight, i.e. one LP column.
struct WeightedSet {
  TerminalMask terminals = 0;
  Rational weight;
};

struct LpMinSlack {
  Rational value;
  TerminalMask argmin = 0;
};

/// Fractional slack  (|S| - 1) - sum_C x_C (|S cap C| - 1)^+.
Rational lp_slack(const std::vector<WeightedSet>& x, TerminalMask s);

/// Same flow construction on the aggregated network (one node per column,
/// rational capacities). Requires sum over columns containing v of x_C >= 1 for
/// every v in `active`; throws InfeasibleError otherwise.
LpMinSlack lp_min_slack_over_supersets(const std::vector<WeightedSet>& x, TerminalMask active,
                                       TerminalMask q);

/// Most violated packing row, if any; ties go to the smallest mask.
std::optional<LpMinSlack> separate_lp(const std::vector<WeightedSet>& x, TerminalMask active);

/// Rank oracle of the removal matroid through the gammoid: the arc of every blowup
/// edge f is split by a node v_f, a super-source feeds every piece root with a unit
/// arc and may feed v_f for f in U. The rank of U is the flow gained over the
/// flow with U empty.
class GammoidOracle {
 public:
  GammoidOracle(const BlowupGraph& x, TerminalMask q);

  long rank(const EdgeIdSet& u) const;
  long baseline_flow() const { return baseline_; }

  /// Incremental independence test for greedy basis construction.
  class Session {
   public:
    /// Adds f when the current set stays independent; returns whether it did.
    bool try_add(int edge_id);
    long rank() const { return rank_; }

   private:
    friend class GammoidOracle;
    Session(const GammoidOracle& o) : oracle_(o), net_(o.net_) {}
    const GammoidOracle& oracle_;
    FlowNetwork<long> net_;
    long rank_ = 0;
  };
  Session session() const { return Session(*this); }

 private:
  const BlowupGraph& x_;
  FlowNetwork<long> net_;  // holds the baseline flow
  int source_ = -1;
  std::vector<int> sinks_;
  std::vector<int> feed_arc_;  // per blowup edge index
  long baseline_ = 0;
};

long gammoid_rank(const BlowupGraph& x, TerminalMask q, const EdgeIdSet& u);

}  // namespace hypersteiner
