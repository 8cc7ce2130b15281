#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "domtest/report.hpp"
#include "oracles.hpp"

using namespace domtest;
namespace fs = std::filesystem;

namespace {

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

Report sample_report() {
  std::mt19937_64 rng(9);
  PolicySample a("JF", oracle::gaussian_sample(rng, 50, 0.0, 7.0, 0.3));
  PolicySample b("AFDC", oracle::gaussian_sample(rng, 40, 0.2, 7.0, 0.3));
  RunConfig cfg;
  cfg.replicates = 29;
  cfg.grid_x = 12;
  cfg.grid_z = 8;
  cfg.seed = 77;
  cfg.eta = 1.0 / 3.0 * 1e-6;
  cfg.criteria.assign(kAllCriteria.begin(), kAllCriteria.end());
  Report r;
  r.input_digest = "abc123";
  r.config = cfg;
  r.label_a = a.label();
  r.label_b = b.label();
  r.n_a = a.size();
  r.n_b = b.size();
  r.results = run_tests(a, b, cfg);
  r.elapsed_seconds = 0.125;
  r.threads = 3;
  return r;
}

}  // namespace

TEST_CASE("report round-trips losslessly") {
  const Report r = sample_report();
  const std::string text = dump_json(report_to_json(r));
  const Report back = report_from_json(nlohmann::json::parse(text));
  CHECK(back.tool_version == r.tool_version);
  CHECK(back.input_digest == r.input_digest);
  CHECK(back.config.criteria == r.config.criteria);
  CHECK(back.config.eta == r.config.eta);
  CHECK(back.config.seed == r.config.seed);
  CHECK(back.config.replicates == r.config.replicates);
  CHECK(back.label_a == r.label_a);
  CHECK(back.n_b == r.n_b);
  CHECK(back.results == r.results);
  CHECK(back.elapsed_seconds == r.elapsed_seconds);
  CHECK(back.threads == r.threads);
  CHECK(dump_json(report_to_json(back)) == text);

  const fs::path p = fs::temp_directory_path() / "domtest_report_roundtrip.json";
  write_report(p, r);
  CHECK(read_report(p).results == r.results);
}

TEST_CASE("reals are written with 17 significant digits") {
  const nlohmann::json j{{"third", 1.0 / 3.0}, {"big", 1e300}, {"int", 3}, {"s", "x"}};
  const std::string text = dump_json(j);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("1.0000000000000001e+300") != std::string::npos);
  CHECK(text.find("\"int\": 3") != std::string::npos);
  CHECK(nlohmann::json::parse(text)["third"].get<double>() == 1.0 / 3.0);
}

TEST_CASE("readers tolerate unknown fields") {
  nlohmann::json j = report_to_json(sample_report());
  j["future_field"] = {{"anything", 1}};
  j["results"][0]["extra"] = "ignored";
  j["config"]["new_knob"] = 4;
  CHECK_NOTHROW(report_from_json(j));
}

TEST_CASE("config serialisation keeps defaults for missing keys") {
  const RunConfig cfg = config_from_json(nlohmann::json{{"replicates", 17}});
  CHECK(cfg.replicates == 17);
  CHECK(cfg.grid_x == 100);
  CHECK(cfg.criteria.size() == 6);
  CHECK_THROWS(config_from_json(nlohmann::json{{"criteria", {"bogus"}}}));
}

TEST_CASE("input digest is SHA-256 of the file bytes") {
  const fs::path p = fs::temp_directory_path() / "domtest_digest.txt";
  std::ofstream(p, std::ios::binary) << "abc";
  const fs::path files[] = {p};
  CHECK(input_digest(files) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const fs::path none[] = {fs::temp_directory_path() / "domtest_missing_file"};
  CHECK_THROWS_AS(input_digest(none), DataError);
}

TEST_CASE("grid emission") {
  std::mt19937_64 rng(12);
  PolicySample a("A", oracle::gaussian_sample(rng, 30, 0.0, 7.0, 0.3));
  PolicySample b("B", oracle::gaussian_sample(rng, 30, 0.1, 7.0, 0.3));
  const SupportBox box = pooled_support(a, b);
  const EvaluationGrid grid = build_grid(box, 100, 50);
  const EdfSummary ea(a, box);
  const EdfSummary eb(b, box);
  const std::string prefix = (fs::temp_directory_path() / "domtest_grid_").string();

  const auto paths = emit_grids(Criterion::iasd, evaluate_g(Criterion::iasd, ea, eb, grid), grid, prefix);
  REQUIRE(paths.size() == 4);
  CHECK(paths[0].filename() == "domtest_grid_iasd_H2.csv");
  CHECK(first_line(paths[0]) == "z,value");
  CHECK(line_count(paths[0]) == 1 + 50);
  CHECK(first_line(paths[1]) == "m,z,value");
  CHECK(line_count(paths[1]) == 1 + 99 * 49);
  CHECK(first_line(paths[3]) == "m1,m2,value");
  CHECK(line_count(paths[3]) == 1 + 100 * 100);

  const auto lasbd = emit_grids(Criterion::lasbd, evaluate_g(Criterion::lasbd, ea, eb, grid), grid, prefix);
  CHECK(first_line(lasbd[3]) == "m,value");
  CHECK(line_count(lasbd[3]) == 1 + 100);

  // rows in lexicographic index order: first two rows share m = 0
  {
    std::ifstream in(paths[1]);
    std::string header, r1, r2;
    std::getline(in, header);
    std::getline(in, r1);
    std::getline(in, r2);
    CHECK(r1.substr(0, 2) == "0,");
    CHECK(r2.substr(0, 2) == "0,");
  }

  // identical samples: every value column is exactly zero
  const auto same = emit_grids(Criterion::lasbd2, evaluate_g(Criterion::lasbd2, ea, ea, grid), grid, prefix + "same_");
  for (const auto& p : same) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) CHECK(line.substr(line.rfind(',') + 1) == "0");
  }

  CHECK_THROWS_AS(emit_grids(Criterion::lasbd, evaluate_g(Criterion::lasbd, ea, eb, grid), grid,
                             "/nonexistent/dir/x_"),
                  DataError);
}
