#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "domtest/types.hpp"

namespace domtest {

/// Malformed or unusable input data. The CLI maps this to exit status 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One household: income change x and income level z, both in log units.
struct Observation {
  double x = 0.0;
  double z = 0.0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// A labelled treatment arm. Holds at least two finite observations.
class PolicySample {
 public:
  PolicySample(std::string label, std::vector<Observation> observations);

  const std::string& label() const noexcept { return label_; }
  std::span<const Observation> observations() const noexcept { return observations_; }
  std::size_t size() const noexcept { return observations_.size(); }

 private:
  std::string label_;
  std::vector<Observation> observations_;
};

/// Componentwise bounds of the pooled data.
struct SupportBox {
  double x_min = 0.0;
  double x_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;

  bool contains(const Observation& o) const noexcept {
    return o.x >= x_min && o.x <= x_max && o.z >= z_min && o.z <= z_max;
  }
  friend bool operator==(const SupportBox&, const SupportBox&) = default;
};

/// Evenly spaced evaluation lattice over a SupportBox.
///
/// `x_pos_points` are the magnitudes m at which gain/loss coordinates are
/// evaluated as (+m) and (-m); they run from 0 to max(|x_min|, x_max).
struct EvaluationGrid {
  SupportBox box;
  std::vector<double> x_points;
  std::vector<double> z_points;
  std::vector<double> x_pos_points;
  double x_step = 0.0;
  double z_step = 0.0;
  double m_step = 0.0;

  std::size_t gx() const noexcept { return x_points.size(); }
  std::size_t gz() const noexcept { return z_points.size(); }
};

/// Contact-set threshold c_n = coefficient * log(log n) / sqrt(n).
struct ContactRule {
  double coefficient = 4.0;

  double threshold(std::size_t n) const;
};

struct RunConfig {
  std::vector<Criterion> criteria{kSixCriteria.begin(), kSixCriteria.end()};
  DirectionSet direction = DirectionSet::both;
  std::size_t replicates = 999;
  std::uint64_t seed = 0;
  double eta = 1e-6;
  ContactRule contact_rule{};
  std::size_t grid_x = 100;
  std::size_t grid_z = 50;
  double alpha = 0.05;
  /// Worker threads for the bootstrap; 0 means all available. Never
  /// influences results.
  int threads = 0;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

enum class Schema { detect, xz, prepost };

struct LoadOptions {
  Schema schema = Schema::detect;
  /// Treatment label to use as arm A; defaults to the first label in the file.
  std::optional<std::string> label_a;
};

/// Reads a two-treatment CSV file. Arm A is the first label encountered
/// unless `options.label_a` says otherwise. Throws DataError.
std::pair<PolicySample, PolicySample> load_samples(const std::filesystem::path& path,
                                                   const LoadOptions& options = {});

/// Reads one arm per file. A treatment column is optional; without it the
/// label is the file stem.
std::pair<PolicySample, PolicySample> load_samples(const std::filesystem::path& path_a,
                                                   const std::filesystem::path& path_b,
                                                   const LoadOptions& options = {});

/// Writes both arms in the (treatment, x, z) schema with round-trip precision.
void write_samples_csv(const std::filesystem::path& path, const PolicySample& a,
                       const PolicySample& b);

/// x = log(post) - log(pre), z = log(post). Throws DataError on nonpositive income.
Observation derive_changes(double pre, double post);

SupportBox pooled_support(const PolicySample& a, const PolicySample& b);

/// Throws std::invalid_argument on a degenerate box or fewer than two points per axis.
EvaluationGrid build_grid(const SupportBox& box, std::size_t gx, std::size_t gz);

}  // namespace domtest
