#include "hypersteiner/partition_decomp.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>

#include "hypersteiner/error.hpp"
#include "hypersteiner/sepflow.hpp"

namespace hypersteiner {

SetFunction::SetFunction(int n, std::vector<Rational> table) : n_(n), table_(std::move(table)) {
  if (n < 1 || n > kMaxGround) throw InvalidArgument("ground set size must lie in [1, 14]");
  if (table_.size() != (std::size_t{1} << n)) {
    throw InvalidArgument("set function table needs 2^" + std::to_string(n) + " entries");
  }
}

bool SetFunction::is_nonnegative() const {
  return std::all_of(table_.begin(), table_.end(), [](const Rational& v) { return sgn(v) >= 0; });
}

bool SetFunction::is_intersecting_submodular() const {
  const SubsetMask all = ground();
  for (SubsetMask a = 1; a <= all; ++a) {
    for (SubsetMask b = a + 1; b <= all; ++b) {
      if ((a & b) == 0) continue;
      if (table_[a | b] + table_[a & b] > table_[a] + table_[b]) return false;
    }
  }
  return true;
}

int partition_function_eval(const Partition& p, SubsetMask s) {
  int hit = 0;
  for (SubsetMask block : p) hit += (block & s) != 0 ? 1 : 0;
  return std::max(hit - 1, 0);
}

Rational PartitionDecomposition::operator()(SubsetMask s) const {
  Rational total;
  for (const auto& [lambda, p] : terms) total += lambda * partition_function_eval(p, s);
  return total;
}

namespace {

SubsetMask union_of(const Partition& p, std::uint64_t pick) {
  SubsetMask s = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if ((pick >> j) & 1) s |= p[j];
  }
  return s;
}

// Maximal tight sets among unions of blocks of `coarse`.
Partition maximal_tight(const std::vector<Rational>& h, const Partition& coarse, SubsetMask ground) {
  std::vector<SubsetMask> cover(coarse.size(), 0);
  for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << coarse.size()); ++pick) {
    const SubsetMask s = union_of(coarse, pick);
    if (sgn(h[s]) != 0) continue;
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      if ((pick >> j) & 1) cover[j] |= s;
    }
  }
  Partition out;
  SubsetMask seen = 0;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    if (cover[j] == 0) throw InvalidArgument("tight sets do not cover U");
    if ((cover[j] & seen) != 0) {
      if (std::find(out.begin(), out.end(), cover[j]) == out.end()) {
        throw InvalidArgument("maximal tight sets overlap; the function is not intersecting submodular");
      }
      continue;
    }
    seen |= cover[j];
    out.push_back(cover[j]);
  }
  if (seen != ground) throw InvalidArgument("tight sets do not cover U");
  std::sort(out.begin(), out.end(), [](SubsetMask a, SubsetMask b) { return std::countr_zero(a) < std::countr_zero(b); });
  return out;
}

}  // namespace

PartitionDecomposition decompose(const SetFunction& h) {
  const SubsetMask all = h.ground();
  std::vector<Rational> cur = h.table();
  cur[0] = 0;
  if (!std::all_of(cur.begin(), cur.end(), [](const Rational& v) { return sgn(v) >= 0; })) {
    throw InvalidArgument("set function takes negative values");
  }
  Partition singletons;
  for (int u = 0; u < h.ground_size(); ++u) singletons.push_back(SubsetMask{1} << u);
  Partition p = maximal_tight(cur, singletons, all);

  PartitionDecomposition out;
  while (sgn(cur[all]) > 0) {
    std::optional<Rational> lambda;
    for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << p.size()); ++pick) {
      if (std::popcount(pick) < 2) continue;
      const SubsetMask s = union_of(p, pick);
      Rational ratio = cur[s] / (std::popcount(pick) - 1);
      if (!lambda || ratio < *lambda) lambda = ratio;
    }
    if (!lambda || sgn(*lambda) <= 0) throw InvariantViolation("partition step found no positive multiplier");
    for (SubsetMask s = 0; s <= all; ++s) cur[s] -= *lambda * partition_function_eval(p, s);
    out.terms.emplace_back(*lambda, p);
    Partition next = maximal_tight(cur, p, all);
    if (next.size() >= p.size()) throw InvariantViolation("partition did not coarsen");
    p = std::move(next);
  }
  return out;
}

SetFunction slack_function(const BlowupGraph& x, const EdgeIdSet& removed) {
  const int r = x.num_terminals();
  if (x.active_terminals() != (TerminalMask{1} << r) - 1) {
    throw InvalidArgument("slack tables need every terminal label active");
  }
  if (r > SetFunction::kMaxGround) throw InvalidArgument("too many terminals for a slack table");
  BlowupGraph g = x.without(removed);
  std::vector<Rational> table(std::size_t{1} << r);
  auto raw = slack_table(g);
  for (SubsetMask s = 1; s < table.size(); ++s) table[s] = raw[s];
  return SetFunction(r, std::move(table));
}

Claim1Report verify_claim1(const BlowupGraph& x, const EdgeIdSet& k, const EdgeIdSet& f) {
  for (int id : f) {
    if (std::find(k.begin(), k.end(), id) == k.end()) throw InvalidArgument("F must be a subset of K");
  }
  Claim1Report rep;
  const TerminalMask active = x.active_terminals();
  rep.slack_r = slack(x, f, active);
  rep.identity = rep.slack_r == static_cast<long>(f.size());
  rep.rhs = x.N() * rep.slack_r;
  std::map<TerminalMask, long> multiplicity;
  for (const auto& p : x.pieces()) ++multiplicity[p.terminals];
  auto base = build_separation_digraph(x, f);
  for (const auto& [mask, count] : multiplicity) {
    auto d = base;
    rep.lhs += count * min_slack_in_digraph(d, active, mask).value;
  }
  return rep;
}

}  // namespace hypersteiner
