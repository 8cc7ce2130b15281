// domtest: bivariate stochastic dominance tests for policy comparisons.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "domtest/criteria.hpp"
#include "domtest/data_model.hpp"
#include "domtest/edf.hpp"
#include "domtest/inference.hpp"
#include "domtest/report.hpp"
#include "domtest/validation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace domtest;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::string input;
  std::string input_a;
  std::string input_b;
  std::string schema = "detect";
  std::string label_a;
  std::vector<std::string> criteria{"lasbd", "lasbd2", "iasd", "iasd2", "liasd", "liasd2"};
  std::string direction = "both";
  std::size_t reps = 999;
  std::size_t grid_x = 100;
  std::size_t grid_z = 50;
  std::uint64_t seed = 0;
  double eta = 1e-6;
  double alpha = 0.05;
  std::string out;
  std::string emit_grids;
  int threads = 0;
};

struct ScenarioOptions {
  std::string config;
  std::string generator;
  std::optional<double> shift;
  std::optional<double> correlation;
  std::optional<std::size_t> n;
  std::optional<std::size_t> mc;
  std::optional<std::size_t> reps;
  std::uint64_t seed = 0;
  std::vector<std::size_t> ladder;
  std::string out;
  int threads = 0;
};

int resolved_threads(int requested) {
#ifdef _OPENMP
  return requested > 0 ? requested : omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

std::vector<Criterion> parse_criteria(const std::vector<std::string>& names) {
  std::vector<Criterion> out;
  for (const std::string& raw : names) {
    std::string name = raw;
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (name == "all") {
      out.assign(kAllCriteria.begin(), kAllCriteria.end());
      return out;
    }
    const auto c = parse_criterion(name);
    if (!c) throw UsageError("unknown criterion '" + raw + "' (expected lasbd, lasbd2, iasd, iasd2, liasd, liasd2, kr or all)");
    if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
  }
  if (out.empty()) throw UsageError("--criteria needs at least one criterion");
  return out;
}

Schema parse_schema(const std::string& s) {
  if (s == "detect") return Schema::detect;
  if (s == "xz") return Schema::xz;
  if (s == "prepost") return Schema::prepost;
  throw UsageError("unknown schema '" + s + "' (expected xz or prepost)");
}

RunConfig config_from(const RunOptions& o) {
  RunConfig cfg;
  cfg.criteria = parse_criteria(o.criteria);
  const auto dir = parse_direction_set(o.direction);
  if (!dir) throw UsageError("unknown direction '" + o.direction + "' (expected ab, ba or both)");
  cfg.direction = *dir;
  cfg.replicates = o.reps;
  cfg.grid_x = o.grid_x;
  cfg.grid_z = o.grid_z;
  cfg.seed = o.seed;
  cfg.eta = o.eta;
  cfg.alpha = o.alpha;
  cfg.threads = o.threads;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void print_summary(std::ostream& os, const Report& report) {
  os << "A = " << report.label_a << " (n=" << report.n_a << "), B = " << report.label_b
     << " (n=" << report.n_b << ")\n";
  for (const TestResult& r : report.results) {
    std::array<char, 160> line{};
    std::snprintf(line.data(), line.size(), "%-12s %-9s T=%-12.6g p=%-8.4f %s\n",
                  std::string(to_string(r.criterion)).c_str(),
                  std::string(to_string(r.direction)).c_str(), r.t_n, r.p_value,
                  r.rejected ? "reject" : "retain");
    os << line.data();
  }
}

int cmd_run(const RunOptions& o) {
  const RunConfig cfg = config_from(o);
  const bool single = !o.input.empty();
  const bool split = !o.input_a.empty() || !o.input_b.empty();
  if (single == split) throw UsageError("give either --input or both --input-a and --input-b");
  if (split && (o.input_a.empty() || o.input_b.empty())) {
    throw UsageError("--input-a and --input-b must be given together");
  }

  LoadOptions load;
  load.schema = parse_schema(o.schema);
  if (!o.label_a.empty()) load.label_a = o.label_a;

  std::vector<fs::path> files;
  if (single) {
    files.emplace_back(o.input);
  } else {
    files.emplace_back(o.input_a);
    files.emplace_back(o.input_b);
  }
  const auto [a, b] = single ? load_samples(files[0], load) : load_samples(files[0], files[1], load);

  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.input_digest = input_digest(files);
  report.config = cfg;
  report.label_a = a.label();
  report.label_b = b.label();
  report.n_a = a.size();
  report.n_b = b.size();
  report.results = run_tests(a, b, cfg);

  if (!o.emit_grids.empty()) {
    const SupportBox box = pooled_support(a, b);
    const EvaluationGrid grid = build_grid(box, cfg.grid_x, cfg.grid_z);
    const EdfSummary edf_a(a, box);
    const EdfSummary edf_b(b, box);
    for (Criterion kind : cfg.criteria) {
      emit_grids(kind, evaluate_g(kind, edf_a, edf_b, grid), grid, o.emit_grids);
    }
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.threads = resolved_threads(cfg.threads);

  if (o.out.empty()) {
    std::cout << dump_json(report_to_json(report));
  } else {
    write_report(o.out, report);
    print_summary(std::cout, report);
  }
  return kExitOk;
}

ScenarioSpec scenario_from(const ScenarioOptions& o) {
  ScenarioSpec spec;
  if (!o.config.empty()) spec = load_scenario(o.config);
  if (!o.generator.empty()) {
    const auto g = parse_generator(o.generator);
    if (!g) throw UsageError("unknown generator '" + o.generator + "'");
    spec.generator = *g;
  }
  if (o.shift) spec.shift = *o.shift;
  if (o.correlation) spec.correlation = *o.correlation;
  if (o.n) spec.n_a = spec.n_b = *o.n;
  if (o.mc) spec.mc_replications = *o.mc;
  if (o.reps) spec.run.replicates = *o.reps;
  spec.run.threads = o.threads;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

int cmd_generate(const ScenarioOptions& o) {
  if (o.out.empty()) throw UsageError("generate needs --out");
  const ScenarioSpec spec = scenario_from(o);
  const auto [a, b] = generate(spec, o.seed);
  write_samples_csv(o.out, a, b);
  return kExitOk;
}

int cmd_simulate(const ScenarioOptions& o) {
  const ScenarioSpec spec = scenario_from(o);
  const auto rates = o.ladder.empty() ? mc_rejection(spec, o.seed)
                                      : mc_power(spec, o.seed, o.ladder);
  if (o.out.empty()) {
    std::cout << "criterion,direction,n,rejection_rate,mc_se\n";
    for (const RejectionRate& r : rates) {
      std::cout << to_string(r.criterion) << ',' << to_string(r.direction) << ',' << r.n << ','
                << r.rate << ',' << r.mc_se << '\n';
    }
  } else {
    write_rates_csv(o.out, rates);
  }
  return kExitOk;
}

void add_scenario_options(CLI::App* cmd, ScenarioOptions& o) {
  cmd->add_option("--config", o.config, "Scenario JSON file")->check(CLI::ExistingFile);
  cmd->add_option("--generator", o.generator,
                  "null_identical, x_location_shift, z_location_shift, association_flip, figure1_replica");
  cmd->add_option("--shift", o.shift, "Location shift");
  cmd->add_option("--correlation", o.correlation, "Latent correlation in (-1, 1)");
  cmd->add_option("--n", o.n, "Observations per arm");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output CSV");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bivariate stochastic dominance tests for income levels and changes"};
  app.set_version_flag("--version", std::string(DOMTEST_VERSION));
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Test dominance between two treatment arms");
  run_cmd->add_option("--input", run.input, "CSV with a treatment column and both arms");
  run_cmd->add_option("--input-a", run.input_a, "CSV for arm A");
  run_cmd->add_option("--input-b", run.input_b, "CSV for arm B");
  run_cmd->add_option("--schema", run.schema, "Column schema: xz or prepost (default: detect)");
  run_cmd->add_option("--label-a", run.label_a, "Treatment label used as arm A");
  run_cmd->add_option("--criteria", run.criteria,
                      "lasbd, lasbd2, iasd, iasd2, liasd, liasd2, kr or all")
      ->delimiter(',')
      ->capture_default_str();
  run_cmd->add_option("--direction", run.direction, "ab, ba or both")->capture_default_str();
  run_cmd->add_option("--reps", run.reps, "Bootstrap replicates")->capture_default_str();
  run_cmd->add_option("--grid-x", run.grid_x, "Grid points along x")->capture_default_str();
  run_cmd->add_option("--grid-z", run.grid_z, "Grid points along z")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Bootstrap seed")->capture_default_str();
  run_cmd->add_option("--eta", run.eta, "Tie-breaking constant")->capture_default_str();
  run_cmd->add_option("--alpha", run.alpha, "Nominal level")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Report JSON path (default: stdout)");
  run_cmd->add_option("--emit-grids", run.emit_grids, "Prefix for per-coordinate CSV grids");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");

  ScenarioOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Write a synthetic two-arm dataset");
  add_scenario_options(gen_cmd, gen);

  ScenarioOptions sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo rejection rates for a scenario");
  add_scenario_options(sim_cmd, sim);
  sim_cmd->add_option("--mc", sim.mc, "Monte Carlo replications");
  sim_cmd->add_option("--reps", sim.reps, "Bootstrap replicates per replication");
  sim_cmd->add_option("--ladder", sim.ladder, "Per-arm sizes for a power ladder")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*gen_cmd) return cmd_generate(gen);
    if (*sim_cmd) return cmd_simulate(sim);
  } catch (const UsageError& e) {
    std::cerr << "domtest: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "domtest: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "domtest: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
