#include "hypersteiner/removal_matroid.hpp"

#include <algorithm>
#include <random>

#include "hypersteiner/error.hpp"

namespace hypersteiner {

RemovalMatroid::RemovalMatroid(const BlowupGraph& x, TerminalMask q, std::optional<EdgeIdSet> ground,
                               RankOracle oracle)
    : x_(x), q_(q), oracle_(oracle) {
  if (q == 0 || (q & ~x.active_terminals()) != 0) {
    throw InvalidArgument("component terminals must be a nonempty set of active labels");
  }
  if (ground) {
    ground_ = *ground;
    std::sort(ground_.begin(), ground_.end());
    if (std::adjacent_find(ground_.begin(), ground_.end()) != ground_.end()) {
      throw InvalidArgument("ground set lists an edge twice");
    }
    for (int id : ground_) {
      if (!x.has_edge(id)) throw InvalidArgument("ground set names unknown edge " + std::to_string(id));
    }
  } else {
    for (const auto& e : x.edges()) ground_.push_back(e.id);
    std::sort(ground_.begin(), ground_.end());
  }
  if (oracle_ == RankOracle::gammoid) gammoid_ = std::make_unique<GammoidOracle>(x, q);
}

long RemovalMatroid::full_rank() const { return x_.N() * (mask_size(q_) - 1); }

void RemovalMatroid::check_subset(const EdgeIdSet& f) const {
  for (int id : f) {
    if (!std::binary_search(ground_.begin(), ground_.end(), id)) {
      throw InvalidArgument("edge " + std::to_string(id) + " is outside the ground set");
    }
  }
}

long RemovalMatroid::rank(const EdgeIdSet& f) const {
  check_subset(f);
  if (oracle_ == RankOracle::gammoid) return gammoid_->rank(f);
  return min_slack_over_supersets(x_, f, q_).value;
}

bool RemovalMatroid::is_independent(const EdgeIdSet& f) const {
  EdgeIdSet sorted = f;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  if (static_cast<long>(sorted.size()) > full_rank()) return false;
  return rank(sorted) == static_cast<long>(sorted.size());
}

EdgeIdSet RemovalMatroid::greedy_max_weight_basis(const std::map<int, Rational>& weight) const {
  auto w = [&](int id) {
    auto it = weight.find(id);
    return it == weight.end() ? Rational(0) : it->second;
  };
  std::vector<std::pair<Rational, int>> order;
  for (int id : ground_) {
    Rational v = w(id);
    if (sgn(v) < 0) throw InvalidArgument("greedy weights must be nonnegative");
    order.emplace_back(v, id);
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const long target = full_rank();
  EdgeIdSet basis;
  if (oracle_ == RankOracle::gammoid) {
    auto session = gammoid_->session();
    for (const auto& [v, id] : order) {
      if (static_cast<long>(basis.size()) == target) break;
      if (session.try_add(id)) basis.push_back(id);
    }
  } else {
    for (const auto& [v, id] : order) {
      if (static_cast<long>(basis.size()) == target) break;
      basis.push_back(id);
      EdgeIdSet sorted = basis;
      std::sort(sorted.begin(), sorted.end());
      if (rank(sorted) != static_cast<long>(basis.size())) basis.pop_back();
    }
  }
  if (static_cast<long>(basis.size()) != target) {
    throw InvariantViolation("ground set of the removal matroid has rank " + std::to_string(basis.size()) +
                             " < " + std::to_string(target));
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

UniformPointReport verify_uniform_point(const BlowupGraph& x, const EdgeIdSet& k,
                                        const UniformPointOptions& options) {
  if (!is_splitting_set(x, k)) throw InvalidArgument("K is not a splitting set");
  const TerminalMask active = x.active_terminals();
  std::map<TerminalMask, long> multiplicity;
  for (const auto& p : x.pieces()) ++multiplicity[p.terminals];

  UniformPointReport report;
  auto fail = [&](const std::string& what) {
    report.ok = false;
    if (report.failures.size() < 10) report.failures.push_back(what);
  };
  auto check = [&](const EdgeIdSet& f) {
    ++report.sets_checked;
    const long size = static_cast<long>(f.size());
    const long h_r = slack(x, f, active);
    if (h_r != size) fail("h(R) = " + std::to_string(h_r) + " after removing " + std::to_string(size) + " edges");
    auto base = build_separation_digraph(x, f);
    long total = 0;
    for (const auto& [mask, count] : multiplicity) {
      auto d = base;
      total += count * min_slack_in_digraph(d, active, mask).value;
    }
    if (total < x.N() * h_r) fail("sum of component ranks " + std::to_string(total) + " < N h(R)");
    if (total < x.N() * size) fail("sum of component ranks " + std::to_string(total) + " < N |F|");
  };

  EdgeIdSet sorted_k = k;
  std::sort(sorted_k.begin(), sorted_k.end());
  const int m = static_cast<int>(sorted_k.size());
  if (m <= options.max_exhaustive) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
      EdgeIdSet f;
      for (int i = 0; i < m; ++i) {
        if ((bits >> i) & 1) f.push_back(sorted_k[static_cast<std::size_t>(i)]);
      }
      check(f);
    }
  } else {
    report.exhaustive = false;
    std::mt19937_64 rng(options.seed);
    std::bernoulli_distribution coin(0.5);
    for (long s = 0; s < options.samples; ++s) {
      EdgeIdSet f;
      for (int id : sorted_k) {
        if (coin(rng)) f.push_back(id);
      }
      check(f);
    }
  }
  return report;
}

}  // namespace hypersteiner
