#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "domtest/criteria.hpp"
#include "domtest/data_model.hpp"
#include "domtest/inference.hpp"

namespace domtest {

inline constexpr const char* kReportSchemaVersion = "1.0";

struct Report {
  std::string tool_version = DOMTEST_VERSION;
  std::string input_digest;
  RunConfig config;
  std::string label_a;
  std::string label_b;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::vector<TestResult> results;
  // Execution details; excluded from reproducibility comparisons.
  double elapsed_seconds = 0.0;
  int threads = 0;
};

nlohmann::json config_to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are ignored.
RunConfig config_from_json(const nlohmann::json& j);

nlohmann::json result_to_json(const TestResult& r);
TestResult result_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

/// Pretty JSON with two-space indentation, sorted keys and every real
/// printed with 17 significant digits.
std::string dump_json(const nlohmann::json& j);

void write_report(const std::filesystem::path& path, const Report& report);
Report read_report(const std::filesystem::path& path);

/// Hex SHA-256 over the bytes of the files, in order.
std::string input_digest(std::span<const std::filesystem::path> files);

/// Writes one CSV per coordinate of `fields` (A minus B as given), named
/// `<prefix><criterion>_<coordinate>.csv`. Columns are the domain
/// coordinates (z; m; m,z; or m1,m2) followed by `value`, rows in
/// lexicographic grid-index order. Returns the written paths.
std::vector<std::filesystem::path> emit_grids(Criterion kind,
                                              std::span<const CoordinateField> fields,
                                              const EvaluationGrid& grid,
                                              const std::string& path_prefix);

}  // namespace domtest
