#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "domtest/data_model.hpp"
#include "domtest/types.hpp"

namespace domtest {

enum class Generator {
  null_identical,
  x_location_shift,
  z_location_shift,
  association_flip,
  figure1_replica,
};

std::string_view to_string(Generator g);
std::optional<Generator> parse_generator(std::string_view text);

/// Both arms start from a bivariate normal for (x, z) with the latent
/// standard scores truncated at +-3, so every sample has bounded support.
struct ScenarioSpec {
  Generator generator = Generator::null_identical;
  /// x_location_shift / z_location_shift: added to arm B.
  /// figure1_replica: arm A's advantage in x.
  double shift = 0.0;
  double correlation = 0.3;
  std::size_t n_a = 200;
  std::size_t n_b = 200;
  std::size_t mc_replications = 200;
  /// Inner test settings; replicates default to 199 for Monte Carlo work.
  RunConfig run = [] {
    RunConfig cfg;
    cfg.replicates = 199;
    return cfg;
  }();

  void validate() const;
};

nlohmann::json scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const nlohmann::json& j);
ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Deterministic in (spec, seed). Arm A is drawn before arm B from a
/// single engine.
std::pair<PolicySample, PolicySample> generate(const ScenarioSpec& spec, std::uint64_t seed);

struct RejectionRate {
  Criterion criterion = Criterion::lasbd;
  Direction direction = Direction::a_over_b;
  std::size_t n = 0;  ///< per-arm size (n_a)
  std::size_t rejections = 0;
  std::size_t replications = 0;
  double rate = 0.0;
  double mc_se = 0.0;
  /// p-value of each Monte Carlo replication, in replication order.
  std::vector<double> p_values;
};

/// Rejection rates of every spec.run criterion and direction over
/// spec.mc_replications synthetic datasets. Replication m uses the same
/// data and bootstrap seeds for any n, so rates at different sample sizes
/// share a seed ladder. Replications run in parallel (spec.run.threads)
/// with a single-threaded inner bootstrap.
std::vector<RejectionRate> mc_rejection(const ScenarioSpec& spec, std::uint64_t seed);

/// mc_rejection restricted to null_identical scenarios.
std::vector<RejectionRate> mc_size(const ScenarioSpec& spec, std::uint64_t seed);

/// mc_rejection at each per-arm size of `ladder` (n_a = n_b = n).
std::vector<RejectionRate> mc_power(const ScenarioSpec& spec, std::uint64_t seed,
                                    std::span<const std::size_t> ladder);

/// Pairs (criterion, direction) whose rate decreases somewhere along the
/// ladder; rates must come from mc_power.
std::vector<std::pair<Criterion, Direction>> nonmonotone(std::span<const RejectionRate> rates);

/// Columns criterion, direction, n, rejection_rate, mc_se.
void write_rates_csv(const std::filesystem::path& path, std::span<const RejectionRate> rates);

}  // namespace domtest
