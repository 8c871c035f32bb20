// Runs every acceptance criterion once and prints one PASS/FAIL line each.
// Exit status is the number of failing criteria.

#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "hypersteiner/verify.hpp"

using namespace hypersteiner;

namespace {

struct Criterion {
  int id;
  std::string title;
  long min_cases;
  double max_seconds;  // 0 means no limit
};

int failures = 0;

void report(const Criterion& c, const SuiteResult& r, const std::string& note = "") {
  std::string why;
  if (r.cases < c.min_cases) why = "only " + std::to_string(r.cases) + " cases, need " + std::to_string(c.min_cases);
  if (r.failures > 0) why = std::to_string(r.failures) + " failures";
  if (c.max_seconds > 0 && r.seconds >= c.max_seconds) why = "took " + std::to_string(r.seconds) + " s";
  const bool ok = why.empty() && r.passed();
  if (!ok) ++failures;
  char time[32];
  std::snprintf(time, sizeof time, "%.2f s", r.seconds);
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << r.cases << " cases, "
            << r.failures << " failures, " << time;
  if (!note.empty()) std::cout << ", " << note;
  if (!why.empty()) std::cout << " [" << why << "]";
  std::cout << "\n";
  for (const auto& m : r.messages) std::cout << "    " << m << "\n";
  std::cout.flush();
}

std::string stat(const SuiteResult& r, const std::string& key) {
  if (!r.stats.contains(key)) return "";
  const Json& v = r.stats.at(key);
  if (v.is_object() && v.contains("decimal")) return key + " " + v.at("decimal").get<std::string>();
  return key + " " + v.dump();
}

}  // namespace

int main() {
  SuiteOptions opts;
  opts.check = true;

  const auto [ln4, ln4_potential] = certificate_suite(opts);
  report({1, "ln 4 certificate", 200, 60}, ln4, stat(ln4, "max_potential_over_blowup_cost"));
  const auto [quasi, quasi_potential] = quasi_certificate_suite(opts);
  report({2, "quasi-bipartite 73/60", 200, 60}, quasi, stat(quasi, "max_potential_over_blowup_cost"));

  report({3, "removal matroid", 50, 0}, matroid_suite(opts));
  report({4, "gammoid oracle equivalence", 10000, 0}, gammoid_suite(opts));
  report({5, "separation identity", 1000, 0}, separation_suite(opts));
  const SuiteResult uniform = uniform_point_suite(opts);
  report({6, "uniform removal point", 20, 0}, uniform, stat(uniform, "largest_k"));

  SuiteResult potential = ln4_potential;
  potential.cases += quasi_potential.cases;
  potential.failures += quasi_potential.failures;
  potential.messages.insert(potential.messages.end(), quasi_potential.messages.begin(), quasi_potential.messages.end());
  potential.seconds += quasi_potential.seconds;
  report({7, "potential accounting", 1, 0}, potential, "iterations of criteria 1 and 2 in check mode");

  report({8, "splitting DP optimality", 100, 0}, dp_suite(opts));
  report({9, "random splitting expectation", 5, 0}, random_splitting_suite(opts), "statistical, 3 standard errors");
  report({10, "partition decomposition", 100, 0}, partition_suite(opts));
  report({11, "BCR equivalence", 100, 0}, bcr_suite(opts));
  const SuiteResult bounds = bounds_suite(opts);
  report({12, "sanity bounds", 100, 0}, bounds, stat(bounds, "max_integrality_gap"));

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures;
}
