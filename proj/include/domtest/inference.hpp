#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "domtest/criteria.hpp"
#include "domtest/data_model.hpp"
#include "domtest/edf.hpp"
#include "domtest/types.hpp"

namespace domtest {

struct StatisticValue {
  double t = 0.0;
  /// Squared-norm contribution of each coordinate; t = sqrt(sum).
  std::vector<std::pair<std::string, double>> per_coordinate;
};

/// Measure-weighted L2 norm of the positive part:
/// T = sqrt(sum_c sum_p max(g_c(p), 0)^2 * w_c).
StatisticValue statistic(std::span<const CoordinateField> fields);

/// Per-coordinate contact indicators, true where |g_hat| <= c_n.
struct ContactMask {
  std::vector<std::vector<std::uint8_t>> active;
  double c_n = 0.0;
  double fraction_active = 0.0;
};

/// Throws std::invalid_argument when n < 4.
ContactMask contact_set(std::span<const CoordinateField> fields, std::size_t n,
                        const ContactRule& rule);

/// || [(g_star - g_hat) * mask]_+ ||; masked-out points contribute zero.
double masked_statistic(std::span<const CoordinateField> g_star,
                        std::span<const CoordinateField> g_hat, const ContactMask& mask);

/// (1/R) * #{r : t_star[r] + eta > t_n}.
double bootstrap_p_value(std::span<const double> t_star, double t_n, double eta);

/// Linear-interpolation quantile (type 7) of an ascending-sorted sample.
double sorted_quantile(std::span<const double> ascending, double prob);

struct TestResult {
  Criterion criterion = Criterion::lasbd;
  Direction direction = Direction::a_over_b;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::size_t n = 0;
  double t_n = 0.0;
  double sqrt_n_t_n = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool rejected = false;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  double c_n = 0.0;
  double eta = 0.0;
  double contact_fraction = 0.0;
  double q90 = 0.0;
  double q95 = 0.0;
  double q99 = 0.0;
  std::vector<std::pair<std::string, double>> per_coordinate;

  friend bool operator==(const TestResult&, const TestResult&) = default;
};

/// Level-alpha decision: reject when p <= alpha (a level-0 test never rejects).
constexpr bool rejects(double p_value, double alpha) { return alpha > 0.0 && p_value <= alpha; }

/// Tests H0: first dominates second for every criterion in `kinds`, where
/// (first, second) is (A, B) for Direction::a_over_b and (B, A) otherwise.
///
/// Replicate r resamples arm A (size n_a) then arm B (size n_b) with
/// replacement from engine (cfg.seed, direction, r); all criteria share the
/// replicate, so the result for one criterion does not depend on which
/// other criteria run alongside it. Replicates run on cfg.threads workers
/// and the output is bit-identical for every thread count.
std::vector<TestResult> bootstrap_tests(const EdfSummary& a, const EdfSummary& b,
                                        std::span<const Criterion> kinds,
                                        const EvaluationGrid& grid, const RunConfig& cfg,
                                        Direction direction);

TestResult bootstrap_pvalue(const EdfSummary& a, const EdfSummary& b, Criterion kind,
                            const EvaluationGrid& grid, const RunConfig& cfg,
                            Direction direction = Direction::a_over_b);

/// One result per requested direction (A_over_B first).
std::vector<TestResult> run_test(const PolicySample& a, const PolicySample& b, Criterion kind,
                                 DirectionSet directions, const RunConfig& cfg);

/// Every cfg.criteria x cfg.direction combination, criterion-major.
std::vector<TestResult> run_tests(const PolicySample& a, const PolicySample& b,
                                  const RunConfig& cfg);

}  // namespace domtest
