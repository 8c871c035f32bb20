#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hypersteiner/blowup.hpp"

namespace hypersteiner {

using SubsetMask = std::uint32_t;

/// Table-backed set function on the ground set {0, ..., n-1}.
class SetFunction {
 public:
  inline static constexpr int kMaxGround = 14;

  SetFunction(int n, std::vector<Rational> table);

  int ground_size() const { return n_; }
  SubsetMask ground() const { return (SubsetMask{1} << n_) - 1; }
  const Rational& operator()(SubsetMask s) const { return table_.at(s); }
  const std::vector<Rational>& table() const { return table_; }

  bool is_nonnegative() const;
  /// h(A | B) + h(A & B) <= h(A) + h(B) whenever A and B intersect.
  bool is_intersecting_submodular() const;

 private:
  int n_;
  std::vector<Rational> table_;
};

/// Blocks as bit masks, ordered by their smallest element.
using Partition = std::vector<SubsetMask>;

/// (number of blocks hit by S) - 1, floored at zero.
int partition_function_eval(const Partition& p, SubsetMask s);

struct PartitionDecomposition {
  std::vector<std::pair<Rational, Partition>> terms;  // (lambda_i, P^i)

  Rational operator()(SubsetMask s) const;
};

/// Greedy lower bound of h by partition functions: P^1 holds the maximal tight
/// sets of h; each round takes the largest lambda keeping h^i - lambda f_{P^i}
/// nonnegative on unions of blocks and moves to the maximal tight sets of the
/// remainder. Throws InvalidArgument("tight sets do not cover U") when some element
/// lies in no tight set.
PartitionDecomposition decompose(const SetFunction& h);

/// h_{x-F} over the terminal labels of x, with the empty set mapped to 0. All
/// labels must still be active.
SetFunction slack_function(const BlowupGraph& x, const EdgeIdSet& removed);

struct Claim1Report {
  long lhs = 0;           // sum over pieces Q of min over S containing Q of h_{x-F}(S)
  long rhs = 0;           // N h_{x-F}(R)
  long slack_r = 0;       // h_{x-F}(R)
  bool identity = false;  // h_{x-F}(R) == |F|
  bool holds() const { return identity && lhs >= rhs; }
};

/// Evaluates both sides of the covering inequality behind the uniform removal
/// point for one F contained in the splitting set K.
Claim1Report verify_claim1(const BlowupGraph& x, const EdgeIdSet& k, const EdgeIdSet& f);

}  // namespace hypersteiner
