#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hypersteiner/report.hpp"

namespace hypersteiner {

/// 1386295 / 10^6, a rational just above ln 4.
Rational ln4_bound();
/// 73 / 60.
Rational quasi_bipartite_bound();

struct SuiteOptions {
  std::uint64_t first_seed = 1;
  long count = 0;     // number of instances or queries; 0 picks the suite default
  bool check = true;  // re-verify every contraction step and decomposition step
};

struct SuiteResult {
  std::string name;
  long cases = 0;
  long failures = 0;
  std::vector<std::string> messages;  // the first few failures
  Json stats = Json::object();
  double seconds = 0;

  bool passed() const { return cases > 0 && failures == 0; }
  void fail(const std::string& what);
};

/// Tree within Phi/N and Phi within ln4_bound() N LP under the DP splitting set,
/// together with the per-iteration potential accounting of the same runs.
std::pair<SuiteResult, SuiteResult> certificate_suite(const SuiteOptions& options);
/// The 73/60 analogue on quasi-bipartite instances with the star splitting set.
std::pair<SuiteResult, SuiteResult> quasi_certificate_suite(const SuiteOptions& options);

SuiteResult matroid_suite(const SuiteOptions& options);
SuiteResult gammoid_suite(const SuiteOptions& options);
SuiteResult separation_suite(const SuiteOptions& options);
SuiteResult uniform_point_suite(const SuiteOptions& options);
SuiteResult dp_suite(const SuiteOptions& options);
SuiteResult random_splitting_suite(const SuiteOptions& options);
SuiteResult partition_suite(const SuiteOptions& options);
SuiteResult bcr_suite(const SuiteOptions& options);
SuiteResult bounds_suite(const SuiteOptions& options);

/// ln4, quasi, potential, matroid, gammoid, separation, uniform, dp, random-k,
/// partition, bcr, bounds.
const std::vector<std::string>& suite_names();
/// Throws InvalidArgument for unknown names.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);
Json suite_json(const SuiteResult& r);

/// Instance families shared by the suites, the CLI and the benchmarks.
SteinerInstance general_family_instance(std::uint64_t seed);
SteinerInstance quasi_family_instance(std::uint64_t seed);
/// A random full component with Steiner degrees 2 or 3 as its own instance.
std::pair<SteinerInstance, Component> random_binary_component(std::uint64_t seed, int max_edges);
/// The blowup graph holding one copy of a component of its instance.
BlowupGraph single_component_graph(const SteinerInstance& inst, const Component& c);

}  // namespace hypersteiner
