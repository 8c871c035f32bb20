#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hypersteiner/error.hpp"
#include "hypersteiner/oracles.hpp"
#include "hypersteiner/verify.hpp"

using namespace hypersteiner;

namespace {

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeedRange {
  std::uint64_t first = 1;
  long count = 0;
};

// "7" or "1..100" (inclusive).
SeedRange parse_seed_range(const std::string& text) {
  SeedRange r;
  try {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      r.first = std::stoull(text);
      return r;
    }
    r.first = std::stoull(text.substr(0, dots));
    const std::uint64_t last = std::stoull(text.substr(dots + 2));
    if (last < r.first) throw UsageError("empty seed range " + text);
    r.count = static_cast<long>(last - r.first + 1);
  } catch (const std::logic_error&) {
    throw UsageError("bad seed range '" + text + "'");
  }
  return r;
}

void emit(const Json& j, bool json, const std::string& text) {
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

// "-" reads standard input.
SteinerInstance load(const std::string& path) {
  if (path != "-") return read_stp_file(path);
  const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  return parse_stp(text);
}

FractionalSolution solve(const SteinerInstance& inst, int k, LpMode mode, LpStats* stats) {
  const int size = k > 0 ? k : inst.num_terminals();
  return solve_lp_exact(inst, enumerate_components(inst, size), LpOptions{mode, 12}, stats);
}

SteinerInstance family_instance(const std::string& family, std::uint64_t seed) {
  if (family == "general") return general_family_instance(seed);
  if (family == "quasi") return quasi_family_instance(seed);
  throw UsageError("unknown family '" + family + "'");
}

Rational bound_for(SplitStrategy s) { return s == SplitStrategy::quasi ? quasi_bipartite_bound() : ln4_bound(); }

struct Common {
  std::string file;
  bool json = false;
  int k = 0;
  std::string mode = "cuts";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("file", c.file, "STP instance, - for standard input")->required();
  cmd->add_flag("--json", c.json, "Print JSON");
  cmd->add_option("--k", c.k, "Largest component size (0 = all terminals)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--mode", c.mode, "LP row generation: full or cuts")->check(CLI::IsMember({"full", "cuts"}));
}

int cmd_lp(const Common& c) {
  const SteinerInstance inst = load(c.file);
  LpStats stats;
  const FractionalSolution x = solve(inst, c.k, parse_lp_mode(c.mode), &stats);
  Json j;
  j["instance"] = instance_json(inst);
  j["lp"] = lp_json(x, &stats);
  std::ostringstream out;
  out << "lp " << to_string(x.objective) << " (" << to_decimal(x.objective) << "), support " << x.components.size()
      << ", N " << x.blowup_factor() << "\n";
  emit(j, c.json, out.str());
  return kOk;
}

int cmd_run(const Common& c, const std::string& strategy, std::uint64_t seed, bool check, const std::string& oracle) {
  const SteinerInstance inst = load(c.file);
  RunOptions o;
  o.k = c.k;
  o.strategy = parse_split_strategy(strategy);
  o.seed = seed;
  o.lp = LpOptions{parse_lp_mode(c.mode), 12};
  o.oracle = oracle == "submodular" ? RankOracle::submodular : RankOracle::gammoid;
  o.check = check;
  const RunResult r = run(inst, o);
  const Rational bound = bound_for(o.strategy);
  const Certificate& cert = r.certificate;
  bool ok = r.tree.cost * cert.n <= cert.potential && cert.potential_drops_cover_weights();
  if (o.strategy != SplitStrategy::random) ok = ok && r.tree.cost <= bound * r.lp.objective;
  std::ostringstream out;
  out << "tree " << to_string(r.tree.cost) << ", lp " << to_string(r.lp.objective) << ", N " << cert.n << ", potential/N "
      << to_decimal(cert.n > 0 ? Rational(cert.potential / cert.n) : Rational(0)) << ", iterations "
      << cert.iterations.size() << (ok ? "" : "  BOUND VIOLATED") << "\n";
  emit(run_json(inst, r, bound), c.json, out.str());
  return ok ? kOk : kViolated;
}

int cmd_bcr(const Common& c, std::optional<int> root, bool decompose, bool check) {
  const SteinerInstance inst = preprocess_quasi(load(c.file));
  const int r = root.value_or(inst.terminals().front());
  if (r < 0 || r >= inst.num_vertices() || !inst.is_terminal(r)) throw UsageError("--root must be a terminal");
  const BcrSolution sol = solve_bcr(inst, r);
  Json j;
  j["instance"] = instance_json(inst);
  j["bcr"] = bcr_json(inst, sol);
  std::ostringstream out;
  out << "bcr " << to_string(sol.objective) << " (" << to_decimal(sol.objective) << "), root " << r << "\n";
  if (decompose) {
    const FractionalSolution x = natural_decomposition(inst, sol, check);
    j["decomposition"] = lp_json(x);
    out << "decomposition into " << x.components.size() << " components, objective " << to_string(x.objective) << "\n";
  }
  emit(j, c.json, out.str());
  return kOk;
}

int cmd_split(const Common& c, const std::string& strategy, std::uint64_t seed) {
  const SteinerInstance inst = load(c.file);
  const FractionalSolution x = solve(inst, c.k, parse_lp_mode(c.mode), nullptr);
  const BlowupGraph g = build_blowup(inst, x);
  const SplitChoice choice = choose_splitting_set(g, parse_split_strategy(strategy), seed);
  Json j;
  j["lp"] = rational_json(x.objective);
  j["splitting"] = splitting_json(choice);
  std::ostringstream out;
  out << "|K| " << choice.state.k.size() << " of " << choice.state.graph.num_edges() << " edges, potential "
      << to_string(choice.state.potential) << ", cost " << to_string(choice.state.graph.cost()) << "\n";
  emit(j, c.json, out.str());
  return kOk;
}

TerminalMask labels_of(const SteinerInstance& inst, const std::vector<int>& vertices) {
  TerminalMask m = 0;
  for (int v : vertices) {
    if (v < 0 || v >= inst.num_vertices() || !inst.is_terminal(v)) {
      throw UsageError("vertex " + std::to_string(v) + " is not a terminal");
    }
    m |= TerminalMask{1} << inst.terminal_index(v);
  }
  return m;
}

int cmd_separate(const Common& c, const std::vector<int>& q) {
  const SteinerInstance inst = load(c.file);
  const FractionalSolution x = solve(inst, c.k, parse_lp_mode(c.mode), nullptr);
  const BlowupGraph g = build_blowup(inst, x);
  const SeparationResult s = separate(g);
  Json j;
  j["N"] = g.N();
  j["equality_holds"] = s.equality_holds;
  j["violated"] = s.violated ? mask_json(inst, *s.violated) : Json(nullptr);
  j["violation"] = s.value;
  std::ostringstream out;
  out << (s.violated ? "violated" : "feasible") << ", h(R) = 0 " << (s.equality_holds ? "holds" : "fails") << "\n";
  if (!q.empty()) {
    const MinSlack m = min_slack_over_supersets(g, labels_of(inst, q));
    j["q"] = q;
    j["min_slack"] = m.value;
    j["argmin"] = mask_json(inst, m.argmin);
    j["flow"] = m.flow;
    out << "min slack over supersets of Q: " << m.value << "\n";
  }
  emit(j, c.json, out.str());
  return s.violated || !s.equality_holds ? kViolated : kOk;
}

// A JSON array of 2^n values indexed by subset bitmask; numbers or strings like "3/2".
SetFunction read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("bad table: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw UsageError("table must be a nonempty JSON array");
  int n = 0;
  while ((std::size_t{1} << n) < j.size()) ++n;
  if ((std::size_t{1} << n) != j.size()) throw UsageError("table length must be a power of two");
  std::vector<Rational> values;
  for (const auto& v : j) {
    if (v.is_string()) {
      values.push_back(parse_rational(v.get<std::string>()));
    } else if (v.is_number_integer()) {
      values.emplace_back(v.get<long>());
    } else {
      throw UsageError("table entries must be integers or rational strings");
    }
  }
  return SetFunction(n, std::move(values));
}

int decompose_and_report(const SetFunction& h, Json j, bool json) {
  const PartitionDecomposition d = decompose(h);
  bool ok = d(h.ground()) == h(h.ground());
  for (SubsetMask s = 1; s <= h.ground(); ++s) ok = ok && d(s) <= h(s);
  j["h_of_U"] = rational_json(h(h.ground()));
  j["terms"] = decomposition_json(d);
  j["lower_bound_holds"] = ok;
  std::ostringstream out;
  out << d.terms.size() << " partition terms, h(U) = " << to_string(h(h.ground())) << (ok ? "" : "  CHECK FAILED") << "\n";
  for (const auto& [lambda, p] : d.terms) {
    out << "  " << to_string(lambda) << " x {";
    for (std::size_t b = 0; b < p.size(); ++b) {
      out << (b ? " | " : "");
      bool first = true;
      for (int i = 0; i < h.ground_size(); ++i) {
        if ((p[b] >> i) & 1U) {
          out << (first ? "" : " ") << i;
          first = false;
        }
      }
    }
    out << "}\n";
  }
  emit(j, json, out.str());
  return ok ? kOk : kViolated;
}

int cmd_decompose(const Common& c, const std::string& table, int remove) {
  if (!table.empty()) {
    const SetFunction h = read_table(table);
    if (!h.is_nonnegative() || !h.is_intersecting_submodular()) {
      throw UsageError("table is not a nonnegative intersecting submodular function");
    }
    return decompose_and_report(h, Json::object(), c.json);
  }
  if (c.file.empty()) throw UsageError("decompose needs an STP file or --table");
  const SteinerInstance inst = load(c.file);
  if (inst.num_terminals() > SetFunction::kMaxGround) throw UsageError("decompose supports at most 14 terminals");
  const FractionalSolution x = solve(inst, c.k, parse_lp_mode(c.mode), nullptr);
  const SplitChoice choice = choose_splitting_set(build_blowup(inst, x), SplitStrategy::dp);
  const auto& k = choice.state.k;
  if (remove < 0 || remove > static_cast<int>(k.size())) throw UsageError("--remove exceeds |K|");
  const EdgeIdSet f(k.begin(), k.begin() + remove);
  Json j;
  j["removed"] = f;
  return decompose_and_report(slack_function(choice.state.graph, f), std::move(j), c.json);
}

int cmd_verify(const std::string& suite, const std::string& seeds, long count, bool no_check, bool json) {
  SuiteOptions o;
  const SeedRange r = parse_seed_range(seeds);
  o.first_seed = r.first;
  o.count = count > 0 ? count : r.count;
  o.check = !no_check;
  bool all_ok = true;
  Json results = Json::array();
  std::ostringstream out;
  const std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  for (const auto& name : names) {
    const SuiteResult res = run_suite(name, o);
    all_ok = all_ok && res.passed();
    results.push_back(suite_json(res));
    out << (res.passed() ? "PASS " : "FAIL ") << name << ": " << res.cases << " cases, " << res.failures << " failures\n";
    for (const auto& m : res.messages) out << "  " << m << "\n";
  }
  emit(suite == "all" ? results : results.front(), json, out.str());
  return all_ok ? kOk : kViolated;
}

int cmd_bench(const std::string& family, const std::string& seeds, const std::string& strategy, const std::string& format,
              bool timing) {
  SeedRange r = parse_seed_range(seeds);
  if (r.count == 0) r.count = 1;
  const SplitStrategy s = parse_split_strategy(strategy);
  const Rational bound = bound_for(s);
  Json rows = Json::array();
  bool ok = true;
  std::ostringstream csv;
  csv << "instance,lp,tree,ratio,bound,iterations,wall_time\n";
  for (long i = 0; i < r.count; ++i) {
    const std::uint64_t seed = r.first + static_cast<std::uint64_t>(i);
    const SteinerInstance inst = family_instance(family, seed);
    RunOptions o;
    o.strategy = s;
    o.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    const RunResult res = run(inst, o);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const Rational ratio = sgn(res.lp.objective) > 0 ? Rational(res.tree.cost / res.lp.objective) : Rational(1);
    if (s != SplitStrategy::random && ratio > bound) ok = false;
    const std::string name = family + "-" + std::to_string(seed);
    Json row;
    row["instance"] = name;
    row["lp"] = rational_json(res.lp.objective);
    row["tree"] = rational_json(res.tree.cost);
    row["ratio"] = rational_json(ratio);
    row["bound"] = rational_json(bound);
    row["iterations"] = res.certificate.iterations.size();
    row["wall_time"] = timing ? Json(wall) : Json(nullptr);
    rows.push_back(std::move(row));
    csv << name << ',' << to_string(res.lp.objective) << ',' << to_string(res.tree.cost) << ',' << to_decimal(ratio) << ','
        << to_decimal(bound) << ',' << res.certificate.iterations.size();
    csv << ',';
    if (timing) csv << wall;
    csv << "\n";
  }
  emit(rows, format == "json", csv.str());
  return ok ? kOk : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steiner trees from the hypergraphic LP with exact certificates"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Common common;
  std::string strategy = "dp";
  std::uint64_t seed = 1;
  bool check = false;
  std::string oracle = "gammoid";
  std::optional<int> root;
  bool decompose_flag = false;
  std::vector<int> q;
  int remove = 0;
  std::string suite;
  std::string seeds = "1";
  long count = 0;
  bool no_check = false;
  std::string family = "general";
  std::string format = "csv";
  bool no_timing = false;

  auto* lp = app.add_subcommand("lp", "Solve the component LP exactly");
  add_common(lp, common);

  auto* run_cmd = app.add_subcommand("run", "LP, blowup, splitting set and contraction");
  add_common(run_cmd, common);
  run_cmd->add_option("--strategy", strategy, "Splitting set: dp, random or quasi")->check(CLI::IsMember({"dp", "random", "quasi"}));
  run_cmd->add_option("--seed", seed, "Seed for the random strategy");
  run_cmd->add_flag("--check", check, "Re-verify every iteration");
  run_cmd->add_option("--oracle", oracle, "Matroid oracle: gammoid or submodular")->check(CLI::IsMember({"gammoid", "submodular"}));

  auto* bcr = app.add_subcommand("bcr", "Bidirected cut relaxation on a quasi-bipartite instance");
  add_common(bcr, common);
  bcr->add_option("--root", root, "Root terminal (zero-based vertex id)");
  bcr->add_flag("--decompose", decompose_flag, "Convert the optimum into LP components");
  bcr->add_flag("--check", check, "Re-check feasibility after every transfer");

  auto* split = app.add_subcommand("split", "Splitting set and potential of the LP blowup graph");
  add_common(split, common);
  split->add_option("--strategy", strategy, "dp, random or quasi")->check(CLI::IsMember({"dp", "random", "quasi"}));
  split->add_option("--seed", seed, "Seed for the random strategy");

  auto* sep = app.add_subcommand("separate", "Separation on the LP blowup graph");
  add_common(sep, common);
  sep->add_option("--q", q, "Terminals whose supersets are minimized over (zero-based ids)");

  auto* dec = app.add_subcommand("decompose", "Partition-function lower bound of a set function");
  std::string table;
  dec->add_option("file", common.file, "STP instance; the slack function of its LP blowup is decomposed");
  dec->add_option("--table", table, "JSON array of set function values indexed by bitmask");
  dec->add_flag("--json", common.json, "Print JSON");
  dec->add_option("--k", common.k, "Largest component size (0 = all terminals)")->check(CLI::NonNegativeNumber);
  dec->add_option("--mode", common.mode, "LP row generation: full or cuts")->check(CLI::IsMember({"full", "cuts"}));
  dec->add_option("--remove", remove, "Remove this many core edges first")->check(CLI::NonNegativeNumber);

  auto* ver = app.add_subcommand("verify", "Run a property suite");
  ver->add_option("suite", suite, "Suite name or all")->required();
  ver->add_option("--seed", seeds, "First seed or an inclusive range a..b");
  ver->add_option("--count", count, "Number of cases (overrides the range)");
  ver->add_flag("--no-check", no_check, "Skip per-step re-verification");
  ver->add_flag("--json", common.json, "Print JSON");

  auto* bench = app.add_subcommand("bench", "Seeded instance batch as a table");
  bench->add_option("--family", family, "general or quasi")->check(CLI::IsMember({"general", "quasi"}));
  bench->add_option("--seed", seeds, "First seed or an inclusive range a..b");
  bench->add_option("--strategy", strategy, "dp, random or quasi")->check(CLI::IsMember({"dp", "random", "quasi"}));
  bench->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  bench->add_flag("--no-timing", no_timing, "Leave wall times empty so output is reproducible");

  auto* gen = app.add_subcommand("generate", "Print a seeded instance in STP format");
  gen->add_option("--family", family, "general or quasi")->check(CLI::IsMember({"general", "quasi"}));
  gen->add_option("--seed", seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*lp) return cmd_lp(common);
    if (*run_cmd) return cmd_run(common, strategy, seed, check, oracle);
    if (*bcr) return cmd_bcr(common, root, decompose_flag, check);
    if (*split) return cmd_split(common, strategy, seed);
    if (*sep) return cmd_separate(common, q);
    if (*dec) return cmd_decompose(common, table, remove);
    if (*ver) return cmd_verify(suite, seeds, count, no_check, common.json);
    if (*bench) return cmd_bench(family, seeds, strategy, format, !no_timing);
    if (*gen) {
      std::cout << render_stp(family_instance(family, seed), family + "-" + std::to_string(seed));
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "assertion failed: " << e.what() << "\n";
    return kViolated;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolated;
  }
  return kUsage;
}
