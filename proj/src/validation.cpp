#include "domtest/validation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>

#include "domtest/inference.hpp"
#include "domtest/report.hpp"
#include "domtest/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace domtest {

namespace {

constexpr double kMeanX = 0.0;
constexpr double kSdX = 1.0;
constexpr double kMeanZ = 7.0;
constexpr double kSdZ = 1.0;
constexpr double kTruncation = 3.0;

// figure1_replica: arm A's level distribution is slightly compressed and
// lifted, so the two level CDFs cross once in the upper tail.
constexpr double kLevelCompression = 0.1;
constexpr double kLevelLift = 0.1;

constexpr std::uint64_t kDataStream = 0x6461746100000000ULL;
constexpr std::uint64_t kBootStream = 0x626f6f7400000000ULL;
constexpr std::uint64_t kGenerateStream = 0x67656e0000000000ULL;

constexpr std::array<std::pair<Generator, std::string_view>, 5> kGeneratorNames{{
    {Generator::null_identical, "null_identical"},
    {Generator::x_location_shift, "x_location_shift"},
    {Generator::z_location_shift, "z_location_shift"},
    {Generator::association_flip, "association_flip"},
    {Generator::figure1_replica, "figure1_replica"},
}};

std::vector<Observation> draw_arm(std::mt19937_64& engine, std::size_t n, double rho) {
  std::normal_distribution<double> normal;
  const double tail = std::sqrt(1.0 - rho * rho);
  std::vector<Observation> out;
  out.reserve(n);
  while (out.size() < n) {
    const double u = normal(engine);
    const double v = rho * u + tail * normal(engine);
    if (std::abs(u) > kTruncation || std::abs(v) > kTruncation) continue;
    out.push_back({kMeanX + kSdX * u, kMeanZ + kSdZ * v});
  }
  return out;
}

}  // namespace

std::string_view to_string(Generator g) {
  for (const auto& [kind, name] : kGeneratorNames) {
    if (kind == g) return name;
  }
  return "unknown";
}

std::optional<Generator> parse_generator(std::string_view text) {
  for (const auto& [kind, name] : kGeneratorNames) {
    if (name == text) return kind;
  }
  return std::nullopt;
}

void ScenarioSpec::validate() const {
  if (!std::isfinite(shift)) throw std::invalid_argument("scenario shift must be finite");
  if (!(correlation > -1.0 && correlation < 1.0)) {
    throw std::invalid_argument("scenario correlation must lie in (-1, 1)");
  }
  if (n_a < 4 || n_b < 4) throw std::invalid_argument("scenario sample sizes must be >= 4");
  if (mc_replications == 0) throw std::invalid_argument("scenario needs at least one MC replication");
  run.validate();
}

nlohmann::json scenario_to_json(const ScenarioSpec& spec) {
  return nlohmann::json{{"generator", std::string(to_string(spec.generator))},
                        {"shift", spec.shift},
                        {"correlation", spec.correlation},
                        {"n_a", spec.n_a},
                        {"n_b", spec.n_b},
                        {"mc_replications", spec.mc_replications},
                        {"run", config_to_json(spec.run)}};
}

ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  ScenarioSpec spec;
  if (j.contains("generator")) {
    const auto g = parse_generator(j.at("generator").get<std::string>());
    if (!g) throw std::invalid_argument("unknown generator '" + j.at("generator").get<std::string>() + "'");
    spec.generator = *g;
  }
  spec.shift = j.value("shift", spec.shift);
  spec.correlation = j.value("correlation", spec.correlation);
  spec.n_a = j.value("n_a", spec.n_a);
  spec.n_b = j.value("n_b", spec.n_b);
  spec.mc_replications = j.value("mc_replications", spec.mc_replications);
  if (j.contains("run")) {
    nlohmann::json run = j.at("run");
    if (!run.contains("replicates")) run["replicates"] = spec.run.replicates;
    spec.run = config_from_json(run);
  }
  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scenario file '" + path.string() + "'");
  try {
    return scenario_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("scenario file '" + path.string() + "': " + e.what());
  }
}

std::pair<PolicySample, PolicySample> generate(const ScenarioSpec& spec, std::uint64_t seed) {
  spec.validate();
  auto engine = substream_engine(seed, kGenerateStream, 0);
  const double rho = spec.correlation;
  std::vector<Observation> a;
  std::vector<Observation> b;
  std::string label_a = "A";
  std::string label_b = "B";
  switch (spec.generator) {
    case Generator::null_identical:
      a = draw_arm(engine, spec.n_a, rho);
      b = draw_arm(engine, spec.n_b, rho);
      break;
    case Generator::x_location_shift:
      a = draw_arm(engine, spec.n_a, rho);
      b = draw_arm(engine, spec.n_b, rho);
      for (auto& o : b) o.x += spec.shift;
      break;
    case Generator::z_location_shift:
      a = draw_arm(engine, spec.n_a, rho);
      b = draw_arm(engine, spec.n_b, rho);
      for (auto& o : b) o.z += spec.shift;
      break;
    case Generator::association_flip:
      a = draw_arm(engine, spec.n_a, rho);
      b = draw_arm(engine, spec.n_b, -rho);
      break;
    case Generator::figure1_replica:
      label_a = "AFDC_like";
      label_b = "JF_like";
      a = draw_arm(engine, spec.n_a, rho);
      b = draw_arm(engine, spec.n_b, rho);
      for (auto& o : a) {
        o.x += spec.shift;
        o.z = kMeanZ + (1.0 - kLevelCompression) * (o.z - kMeanZ) + kLevelLift;
      }
      break;
  }
  return {PolicySample(label_a, std::move(a)), PolicySample(label_b, std::move(b))};
}

std::vector<RejectionRate> mc_rejection(const ScenarioSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t mc = spec.mc_replications;
  RunConfig inner = spec.run;
  inner.threads = 1;

  std::vector<std::vector<TestResult>> outcomes(mc);
  std::exception_ptr failure;
  int threads = spec.run.threads;
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#else
  threads = 1;
#endif

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(mc); ++m) {
    try {
      const auto rep = static_cast<std::uint64_t>(m);
      const std::uint64_t data_seed = substream_engine(seed, kDataStream, rep)();
      RunConfig cfg = inner;
      cfg.seed = substream_engine(seed, kBootStream, rep)();
      const auto [a, b] = generate(spec, data_seed);
      outcomes[static_cast<std::size_t>(m)] = run_tests(a, b, cfg);
    } catch (...) {
#pragma omp critical(domtest_mc_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  const std::size_t cells = outcomes.front().size();
  std::vector<RejectionRate> rates(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    RejectionRate& rr = rates[c];
    rr.criterion = outcomes.front()[c].criterion;
    rr.direction = outcomes.front()[c].direction;
    rr.n = spec.n_a;
    rr.replications = mc;
    for (const auto& results : outcomes) {
      rr.p_values.push_back(results[c].p_value);
      rr.rejections += results[c].rejected ? 1 : 0;
    }
    rr.rate = static_cast<double>(rr.rejections) / static_cast<double>(mc);
    rr.mc_se = std::sqrt(rr.rate * (1.0 - rr.rate) / static_cast<double>(mc));
  }
  return rates;
}

std::vector<RejectionRate> mc_size(const ScenarioSpec& spec, std::uint64_t seed) {
  if (spec.generator != Generator::null_identical) {
    throw std::invalid_argument("size study requires the null_identical generator");
  }
  return mc_rejection(spec, seed);
}

std::vector<RejectionRate> mc_power(const ScenarioSpec& spec, std::uint64_t seed,
                                    std::span<const std::size_t> ladder) {
  std::vector<RejectionRate> out;
  for (std::size_t n : ladder) {
    ScenarioSpec at = spec;
    at.n_a = n;
    at.n_b = n;
    auto rates = mc_rejection(at, seed);
    out.insert(out.end(), std::make_move_iterator(rates.begin()),
               std::make_move_iterator(rates.end()));
  }
  return out;
}

std::vector<std::pair<Criterion, Direction>> nonmonotone(std::span<const RejectionRate> rates) {
  std::map<std::pair<Criterion, Direction>, std::vector<const RejectionRate*>> by_cell;
  for (const RejectionRate& r : rates) by_cell[{r.criterion, r.direction}].push_back(&r);
  std::vector<std::pair<Criterion, Direction>> bad;
  for (auto& [cell, series] : by_cell) {
    std::stable_sort(series.begin(), series.end(),
                     [](const RejectionRate* l, const RejectionRate* r) { return l->n < r->n; });
    for (std::size_t i = 1; i < series.size(); ++i) {
      if (series[i]->rate < series[i - 1]->rate) {
        bad.push_back(cell);
        break;
      }
    }
  }
  return bad;
}

void write_rates_csv(const std::filesystem::path& path, std::span<const RejectionRate> rates) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "criterion,direction,n,rejection_rate,mc_se\n";
  out.precision(17);
  for (const RejectionRate& r : rates) {
    out << to_string(r.criterion) << ',' << to_string(r.direction) << ',' << r.n << ','
        << r.rate << ',' << r.mc_se << '\n';
  }
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

}  // namespace domtest
