#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hypersteiner/blowup.hpp"
#include "hypersteiner/sepflow.hpp"

namespace hypersteiner {

enum class RankOracle { submodular, gammoid };

/// Matroid on blowup edges whose bases are the minimal removals restoring
/// feasibility after N copies of a component on the terminals Q are added.
/// r(F) = min over S containing Q of h_{x - F}(S).
class RemovalMatroid {
 public:
  /// `ground` defaults to every edge of x. The graph must outlive the matroid.
  RemovalMatroid(const BlowupGraph& x, TerminalMask q, std::optional<EdgeIdSet> ground = std::nullopt,
                 RankOracle oracle = RankOracle::gammoid);

  long rank(const EdgeIdSet& f) const;
  bool is_independent(const EdgeIdSet& f) const;
  /// N(|Q| - 1).
  long full_rank() const;
  const EdgeIdSet& ground() const { return ground_; }
  TerminalMask terminals() const { return q_; }

  /// Greedy basis of maximum weight; ties go to smaller edge ids. Edges missing from
  /// `weight` count as zero. Throws InvariantViolation if the ground set holds no basis.
  EdgeIdSet greedy_max_weight_basis(const std::map<int, Rational>& weight) const;

 private:
  void check_subset(const EdgeIdSet& f) const;

  const BlowupGraph& x_;
  TerminalMask q_;
  EdgeIdSet ground_;
  RankOracle oracle_;
  std::unique_ptr<GammoidOracle> gammoid_;
};

struct UniformPointReport {
  bool ok = true;
  bool exhaustive = true;
  long sets_checked = 0;
  std::vector<std::string> failures;  // first few only
};

struct UniformPointOptions {
  int max_exhaustive = 16;  // |K| above this switches to sampling
  long samples = 2000;
  std::uint64_t seed = 1;
};

/// For F subsets of K checks h_{x-F}(R) = |F| and
/// sum over pieces Q of r_Q(F) >= N h_{x-F}(R) >= N |F|, which together say the
/// vector N/|pieces| on K is in the removal polytope. Throws InvalidArgument when K
/// is not a splitting set.
UniformPointReport verify_uniform_point(const BlowupGraph& x, const EdgeIdSet& k,
                                        const UniformPointOptions& options = {});

}  // namespace hypersteiner
