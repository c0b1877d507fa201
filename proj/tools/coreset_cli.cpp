/**
 * Command-line front door for the core-set toolkit.
 *
 * Subcommands:
 *   decide      read a matrix set as JSON, decide whether it is core
 *   atlas       tabulate every similarity class of M_n(F_q) with per-factor
 *               image statistics and hyperplane trap bounds
 *   experiment  reproducible sweeps: montecarlo, chernoff, constant, bounds
 *   selftest    run the built-in invariant suite
 *
 * Exit codes: 0 = core verdict / successful run, 1 = non-core verdict,
 * 2 = operational error (bad input, exceeded budget, broken invariant).
 *
 * @copyright Apache License 2.0
 */
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coreset/classes.hpp"
#include "coreset/decide.hpp"
#include "coreset/experiments.hpp"
#include "coreset/io.hpp"
#include "coreset/selftest.hpp"

namespace {

using namespace coreset;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("input: cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("output: cannot open file '" + path + "' for writing");
  out << content;
}

/// Leading comment block carrying the manifest, so CSV artifacts stay
/// self-describing (readers that support a '#' comment prefix skip it).
std::string csv_manifest_header(const RunManifest& m) {
  std::string s;
  s += "# command: " + m.command_line + "\n";
  s += "# version: " + m.version + "\n";
  if (m.seeded) s += "# seed: " + std::to_string(m.seed) + "\n";
  s += "# config_digest: " + m.config_digest + "\n";
  if (!m.input_digest.empty()) s += "# input_digest: " + m.input_digest + "\n";
  s += "# timestamp_utc: " + m.timestamp_utc + "\n";
  return s;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
         static_cast<std::uint64_t>(
             std::chrono::steady_clock::now().time_since_epoch().count());
}

// ---------------------------------------------------------------------------
// decide
// ---------------------------------------------------------------------------

struct DecideArgs {
  std::string input_path = "-";
  std::string method = "oracle";
  bool witness_text = false;
};

int run_decide(const DecideArgs& args, const std::string& command_line) {
  const auto started = std::chrono::steady_clock::now();
  const std::string raw = read_input(args.input_path);
  const DecideInput in = parse_decide_input_text(raw);

  std::vector<CoreReport> reports;
  std::optional<std::string> structural_note;
  if (args.method == "oracle" || args.method == "all") {
    reports.push_back(is_core_oracle(in.matrices, in.q));
  }
  if (args.method == "factorwise" || args.method == "all") {
    reports.push_back(is_core_factorwise(in.matrices, in.q));
  }
  if (args.method == "structural") {
    reports.push_back(is_core_structural(in.matrices, in.q));
  } else if (args.method == "all") {
    try {
      reports.push_back(is_core_structural(in.matrices, in.q));
    } catch (const std::invalid_argument& e) {
      structural_note = std::string("structural test skipped: ") + e.what();
    }
  }

  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].verdict != reports[0].verdict || !(reports[i].mu == reports[0].mu)) {
      throw std::logic_error("decision methods disagree: " + to_string(reports[0].method) +
                             " says " + to_string(reports[0].verdict) + " but " +
                             to_string(reports[i].method) + " says " +
                             to_string(reports[i].verdict));
    }
  }

  Json out;
  out["q"] = in.q;
  out["n"] = in.n;
  out["set_size"] = in.matrices.size();
  out["verdict"] = to_string(reports.at(0).verdict);
  Json rs = Json::array();
  for (const auto& rep : reports) {
    Json jr = core_report_to_json(rep);
    if (args.witness_text && rep.witness) jr["witness_text"] = matrix_poly_to_text(*rep.witness);
    rs.push_back(std::move(jr));
  }
  out["reports"] = std::move(rs);
  if (structural_note) out["note"] = *structural_note;

  Json config;
  config["method"] = args.method;
  RunManifest manifest = make_manifest(command_line, config, std::nullopt, raw);
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out["manifest"] = manifest_to_json(manifest);

  std::cout << out.dump(2) << "\n";
  return reports.at(0).verdict == Verdict::kCore ? 0 : 1;
}

// ---------------------------------------------------------------------------
// atlas
// ---------------------------------------------------------------------------

struct AtlasArgs {
  std::size_t n = 2;
  std::uint32_t q = 2;
  bool factor_stats = false;
  bool bounds = false;
  bool as_json = false;
  std::string out_prefix;
};

int run_atlas(const AtlasArgs& args, const std::string& command_line) {
  const auto started = std::chrono::steady_clock::now();
  const std::vector<ClassDescriptor> descriptors = enumerate_classes(args.n, args.q);

  // one ring scan shared by all per-factor statistics (only when needed)
  std::vector<std::vector<Matrix<Fp>>> members(descriptors.size());
  if (args.factor_stats || args.bounds) {
    std::map<std::string, std::size_t> index_of;
    for (std::size_t c = 0; c < descriptors.size(); ++c) index_of[descriptors[c].to_string()] = c;
    const std::uint64_t total = scan_size_or_throw(args.q, args.n * args.n, kDefaultScanBudget, "atlas");
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      Matrix<Fp> m = matrix_from_index(idx, args.n, args.q);
      members[index_of.at(class_of(m).to_string())].push_back(std::move(m));
    }
  }

  std::vector<std::string> header{"class", "mu", "class_size", "factor", "multiplicity", "s"};
  if (args.factor_stats) {
    for (const char* c : {"r", "bucket_count", "bucket_size", "formula_count", "formula_matches"})
      header.push_back(c);
  }
  if (args.bounds) {
    for (const char* c : {"trap_coordinate", "trap_max", "trap_limit", "trap_bound_holds"})
      header.push_back(c);
  }

  BigInt mass = 0;
  std::vector<std::vector<std::string>> rows;
  Json json_rows = Json::array();
  for (std::size_t c = 0; c < descriptors.size(); ++c) {
    const ClassDescriptor& d = descriptors[c];
    const BigInt size = class_size(d);
    mass += size;
    for (const auto& [p, mult] : factorize(d.mu())) {
      std::vector<std::string> row{d.to_string(), d.mu().to_string(), size.str(), p.to_string(),
                                   std::to_string(mult), std::to_string(p.degree())};
      Json jr;
      jr["class"] = d.to_string();
      jr["mu"] = d.mu().to_string();
      jr["class_size"] = size.str();
      jr["factor"] = p.to_string();
      jr["multiplicity"] = mult;
      jr["s"] = p.degree();
      if (args.factor_stats) {
        EquivClassStats stats = image_equivalence_partition(d, p, members[c]);
        std::string formula = "";
        bool matches = true;
        if (stats.r * stats.s <= d.n) {
          const BigInt predicted = image_count_formula(d.n, d.q, stats.r, stats.s);
          formula = predicted.str();
          matches = predicted == BigInt(stats.class_count);
        }
        row.push_back(std::to_string(stats.r));
        row.push_back(std::to_string(stats.class_count));
        row.push_back(std::to_string(stats.each_size));
        row.push_back(formula);
        row.push_back(matches ? "true" : "false");
        jr["r"] = stats.r;
        jr["bucket_count"] = stats.class_count;
        jr["bucket_size"] = stats.each_size;
        if (!formula.empty()) jr["formula_count"] = formula;
        jr["formula_matches"] = matches;
        if (!matches) throw std::logic_error("atlas: bucket count disagrees with the counting formula");
      }
      if (args.bounds) {
        TrapReport trap = trap_set_analysis(d, p, kDefaultScanBudget);
        const BigRat limit(BigInt(4) * trap.class_size, args.q);
        row.push_back(trap.applicable ? std::to_string(trap.coordinate_count) : "");
        row.push_back(trap.applicable ? std::to_string(trap.max_count) : "");
        row.push_back(trap.applicable ? limit.str() : "");
        row.push_back(trap.bound_holds ? "true" : "false");
        jr["trap_applicable"] = trap.applicable;
        if (trap.applicable) {
          jr["trap_coordinate"] = trap.coordinate_count;
          jr["trap_max"] = trap.max_count;
          jr["trap_limit"] = limit.str();
        }
        jr["trap_bound_holds"] = trap.bound_holds;
        if (!trap.bound_holds) throw std::logic_error("atlas: hyperplane trap bound violated");
      }
      rows.push_back(std::move(row));
      json_rows.push_back(std::move(jr));
    }
  }

  BigInt expected = 1;
  for (std::size_t i = 0; i < args.n * args.n; ++i) expected *= args.q;
  if (mass != expected) throw std::logic_error("atlas: class sizes do not sum to q^(n^2)");

  Json config;
  config["n"] = args.n;
  config["q"] = args.q;
  config["factor_stats"] = args.factor_stats;
  config["bounds"] = args.bounds;
  RunManifest manifest = make_manifest(command_line, config, std::nullopt, "");
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  Json out;
  out["n"] = args.n;
  out["q"] = args.q;
  out["class_count"] = descriptors.size();
  out["total_matrices"] = mass.str();
  out["rows"] = std::move(json_rows);
  out["manifest"] = manifest_to_json(manifest);
  const std::string csv = csv_manifest_header(manifest) + csv_table(header, rows);

  if (!args.out_prefix.empty()) {
    write_file(args.out_prefix + ".csv", csv);
    write_file(args.out_prefix + ".json", out.dump(2) + "\n");
    std::cerr << "wrote " << args.out_prefix << ".csv and " << args.out_prefix << ".json\n";
  }
  std::cout << (args.as_json ? out.dump(2) + "\n" : csv);
  return 0;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string kind;
  std::size_t n = 2;
  std::vector<std::uint32_t> qs{2, 3, 5, 7};
  double rho = 0.5;
  std::uint64_t trials = 2000;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> draws{10, 50, 100, 500, 1000};
  std::vector<double> cs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::uint32_t constant_q = 2;
  std::size_t terms = 30;
  std::uint64_t exhaustive_cap = 1ull << 12;
  bool as_json = false;
  std::string out_prefix;
};

struct Sweep {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  Json json_rows = Json::array();
  Json config;
  bool all_good = true;
};

Sweep sweep_montecarlo(const ExperimentArgs& args, std::uint64_t seed) {
  Sweep s;
  s.header = {"q", "n", "trials", "successes", "estimate", "ci_low", "ci_high", "seed"};
  s.config = {{"kind", "montecarlo"}, {"n", args.n}, {"q", args.qs},
              {"rho", args.rho},      {"trials", args.trials}};
  for (std::uint32_t q : args.qs) {
    RandomSubsetModel model{args.n, q, args.rho, seed, args.trials};
    const MonteCarloRow row = monte_carlo_pure_core(model);
    s.rows.push_back({std::to_string(row.q), std::to_string(row.n), std::to_string(row.trials),
                      std::to_string(row.successes), double_to_string(row.p_hat),
                      double_to_string(row.wilson_lo), double_to_string(row.wilson_hi),
                      std::to_string(row.seed)});
    Json jr;
    jr["q"] = row.q;
    jr["n"] = row.n;
    jr["trials"] = row.trials;
    jr["successes"] = row.successes;
    jr["estimate"] = row.p_hat;
    jr["ci_low"] = row.wilson_lo;
    jr["ci_high"] = row.wilson_hi;
    jr["seed"] = row.seed;
    s.json_rows.push_back(std::move(jr));
  }
  return s;
}

Sweep sweep_chernoff(const ExperimentArgs& args) {
  Sweep s;
  s.header = {"draws", "c", "cutoff", "exact_tail", "bound", "holds"};
  s.config = {{"kind", "chernoff"}, {"draws", args.draws}, {"c", args.cs}};
  for (std::uint64_t n : args.draws) {
    for (double c : args.cs) {
      const ChernoffRow row = chernoff_tail_check(n, c);
      s.all_good = s.all_good && row.holds;
      s.rows.push_back({std::to_string(row.draws), double_to_string(row.c),
                        std::to_string(row.cutoff), double_to_string(row.exact_tail),
                        double_to_string(row.bound), row.holds ? "true" : "false"});
      Json jr;
      jr["draws"] = row.draws;
      jr["c"] = row.c;
      jr["cutoff"] = row.cutoff;
      jr["exact_tail"] = row.exact_tail;
      jr["bound"] = row.bound;
      jr["holds"] = row.holds;
      s.json_rows.push_back(std::move(jr));
    }
  }
  return s;
}

Sweep sweep_constant(const ExperimentArgs& args) {
  Sweep s;
  s.header = {"terms", "value", "exact"};
  s.config = {{"kind", "constant"}, {"q", args.constant_q}, {"terms", args.terms}};
  for (const auto& row : constant_bound_prefixes(args.constant_q, args.terms)) {
    s.rows.push_back({std::to_string(row.terms), double_to_string(row.value), row.exact.str()});
    Json jr;
    jr["terms"] = row.terms;
    jr["value"] = row.value;
    jr["exact"] = row.exact.str();
    s.json_rows.push_back(std::move(jr));
  }
  return s;
}

Sweep sweep_bounds(const ExperimentArgs& args) {
  Sweep s;
  s.header = {"class", "size", "factor", "s", "applicable", "trap_coordinate",
              "trap_max", "bound_holds", "exhaustive_max_noncore"};
  const std::uint32_t q = args.qs.at(0);
  s.config = {{"kind", "bounds"}, {"n", args.n}, {"q", q}, {"cap", args.exhaustive_cap}};
  for (const auto& row : bound_sweep(args.n, q, args.exhaustive_cap)) {
    s.all_good = s.all_good && row.bound_holds;
    const std::string exhaustive =
        row.exhaustive_max_noncore ? std::to_string(*row.exhaustive_max_noncore) : "";
    for (const auto& trap : row.traps) {
      s.rows.push_back({row.desc.to_string(), std::to_string(row.size), trap.factor.to_string(),
                        std::to_string(trap.s), trap.applicable ? "true" : "false",
                        trap.applicable ? std::to_string(trap.coordinate_count) : "",
                        trap.applicable ? std::to_string(trap.max_count) : "",
                        trap.bound_holds ? "true" : "false", exhaustive});
      Json jr;
      jr["class"] = row.desc.to_string();
      jr["size"] = row.size;
      jr["factor"] = trap.factor.to_string();
      jr["s"] = trap.s;
      jr["applicable"] = trap.applicable;
      if (trap.applicable) {
        jr["trap_coordinate"] = trap.coordinate_count;
        jr["trap_max"] = trap.max_count;
      }
      jr["bound_holds"] = trap.bound_holds;
      if (row.exhaustive_max_noncore) jr["exhaustive_max_noncore"] = *row.exhaustive_max_noncore;
      s.json_rows.push_back(std::move(jr));
    }
  }
  return s;
}

int run_experiment(const ExperimentArgs& args, const std::string& command_line) {
  const auto started = std::chrono::steady_clock::now();

  std::optional<std::uint64_t> seed;
  if (args.kind == "montecarlo") {
    seed = args.seed ? *args.seed : fresh_seed();
    if (!args.seed) std::cerr << "seed: " << *seed << " (generated; pass --seed to reproduce)\n";
  }

  Sweep s;
  if (args.kind == "montecarlo") {
    s = sweep_montecarlo(args, *seed);
  } else if (args.kind == "chernoff") {
    s = sweep_chernoff(args);
  } else if (args.kind == "constant") {
    s = sweep_constant(args);
  } else {
    s = sweep_bounds(args);
  }

  RunManifest manifest = make_manifest(command_line, s.config, seed, "");
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  Json out;
  out["kind"] = args.kind;
  out["config"] = s.config;
  out["rows"] = std::move(s.json_rows);
  out["all_checks_hold"] = s.all_good;
  out["manifest"] = manifest_to_json(manifest);
  const std::string csv = csv_manifest_header(manifest) + csv_table(s.header, s.rows);

  if (!args.out_prefix.empty()) {
    write_file(args.out_prefix + ".csv", csv);
    write_file(args.out_prefix + ".json", out.dump(2) + "\n");
    std::cerr << "wrote " << args.out_prefix << ".csv and " << args.out_prefix << ".json\n";
  }
  std::cout << (args.as_json ? out.dump(2) + "\n" : csv);
  if (!s.all_good) throw std::logic_error("experiment: a checked bound failed to hold");
  return 0;
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

int run_selftest() {
  const std::vector<SelfTestResult> results = selftest_all();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.pass) std::cout << ": " << r.detail;
    std::cout << "\n";
  }
  std::cout << (all ? "selftest: all checks passed\n" : "selftest: FAILURES detected\n");
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Core-set decision tools for matrix rings over prime fields"};
  app.require_subcommand(1);
  const std::string command_line = join_args(argc, argv);

  DecideArgs decide_args;
  CLI::App* decide = app.add_subcommand(
      "decide", "Decide whether a set of matrices is core (exit 0 core, 1 non-core, 2 error)");
  decide->add_option("input", decide_args.input_path,
                     "Input JSON file {q, n, matrices: [row-major arrays]}; '-' reads stdin")
      ->capture_default_str();
  decide->add_option("--method", decide_args.method, "Decision procedure to run")
      ->check(CLI::IsMember({"oracle", "factorwise", "structural", "all"}))
      ->capture_default_str();
  decide->add_flag("--witness", decide_args.witness_text,
                   "Render any non-core witness in human-readable form");

  AtlasArgs atlas_args;
  CLI::App* atlas = app.add_subcommand("atlas", "Tabulate the similarity classes of M_n(F_q)");
  atlas->add_option("n", atlas_args.n, "Matrix size")->required()->check(CLI::Range(1, 6));
  atlas->add_option("q", atlas_args.q, "Field size (prime)")->required();
  atlas->add_flag("--factor-stats", atlas_args.factor_stats,
                  "Add exhaustive image-bucket statistics per irreducible factor");
  atlas->add_flag("--bounds", atlas_args.bounds, "Add hyperplane trap counts and bound checks");
  atlas->add_flag("--json", atlas_args.as_json, "Print JSON instead of CSV");
  atlas->add_option("--out", atlas_args.out_prefix, "Write <prefix>.csv and <prefix>.json");

  ExperimentArgs exp_args;
  CLI::App* experiment = app.add_subcommand("experiment", "Run a reproducible sweep");
  experiment->add_option("kind", exp_args.kind, "montecarlo | chernoff | constant | bounds")
      ->required()
      ->check(CLI::IsMember({"montecarlo", "chernoff", "constant", "bounds"}));
  experiment->add_option("--n", exp_args.n, "Matrix size")->capture_default_str();
  experiment->add_option("--q", exp_args.qs, "Field sizes (montecarlo sweeps; bounds uses the first)")
      ->delimiter(',')
      ->capture_default_str();
  experiment->add_option("--rho", exp_args.rho, "Inclusion probability")->capture_default_str();
  experiment->add_option("--trials", exp_args.trials, "Monte Carlo trials per field")
      ->capture_default_str();
  experiment->add_option("--seed", exp_args.seed,
                         "Random seed; omitted, a fresh seed is drawn and printed");
  experiment->add_option("--draws", exp_args.draws, "Sample counts for the tail check")
      ->delimiter(',');
  experiment->add_option("--c", exp_args.cs, "Deviation fractions for the tail check")
      ->delimiter(',');
  experiment->add_option("--constant-q", exp_args.constant_q, "Field size for the constant sweep")
      ->capture_default_str();
  experiment->add_option("--terms", exp_args.terms, "Prefix length for the constant sweep")
      ->capture_default_str();
  experiment->add_option("--cap", exp_args.exhaustive_cap,
                         "Subset-enumeration cap for the bounds sweep")
      ->capture_default_str();
  experiment->add_flag("--json", exp_args.as_json, "Print JSON instead of CSV");
  experiment->add_option("--out", exp_args.out_prefix, "Write <prefix>.csv and <prefix>.json");

  CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);       // prints help or the parse diagnostic
    return code == 0 ? 0 : 2;           // any argument error is an operational error
  }

  try {
    if (decide->parsed()) return run_decide(decide_args, command_line);
    if (atlas->parsed()) return run_atlas(atlas_args, command_line);
    if (experiment->parsed()) return run_experiment(exp_args, command_line);
    if (selftest->parsed()) return run_selftest();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
