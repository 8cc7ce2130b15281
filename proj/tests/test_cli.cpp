#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli_runner.hpp"
#include "domtest/report.hpp"
#include "domtest/validation.hpp"

using namespace domtest;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  const fs::path d = fs::temp_directory_path() / "domtest_cli_test";
  fs::create_directories(d);
  return d;
}

fs::path sample_file() {
  const fs::path p = workdir() / "data.csv";
  if (!fs::exists(p)) {
    ScenarioSpec spec;
    spec.generator = Generator::x_location_shift;
    spec.shift = 0.3;
    spec.n_a = spec.n_b = 60;
    const auto [a, b] = generate(spec, 1);
    write_samples_csv(p, a, b);
  }
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_timing(const fs::path& p) {
  nlohmann::json j = nlohmann::json::parse(slurp(p));
  j.erase("timing");
  return dump_json(j);
}

const std::string kQuick = " --reps 19 --grid-x 20 --grid-z 10 ";

}  // namespace

TEST_CASE("all criteria in both directions give fourteen results") {
  const fs::path out = workdir() / "all.json";
  const auto r = cli::run("run --input " + sample_file().string() +
                          " --criteria all --direction both --seed 7" + kQuick + "--out " +
                          out.string());
  CHECK(r.status == 0);
  const Report rep = read_report(out);
  CHECK(rep.results.size() == 14);
  CHECK(rep.config.seed == 7);
  CHECK(rep.input_digest.size() == 64);
  CHECK(rep.n_a == 60);
}

TEST_CASE("repeated runs are byte-identical apart from timing") {
  const fs::path o1 = workdir() / "rep1.json";
  const fs::path o2 = workdir() / "rep2.json";
  const std::string base = "run --input " + sample_file().string() + " --seed 3" + kQuick;
  REQUIRE(cli::run(base + "--threads 1 --out " + o1.string()).status == 0);
  REQUIRE(cli::run(base + "--threads 4 --out " + o2.string()).status == 0);
  CHECK(without_timing(o1) == without_timing(o2));
}

TEST_CASE("criteria lists, directions and separate arm files") {
  const fs::path data = sample_file();
  const fs::path out = workdir() / "subset.json";
  auto r = cli::run("run --input " + data.string() + " --criteria lasbd,kr --direction ab" + kQuick +
                    "--label-a B --out " + out.string());
  REQUIRE(r.status == 0);
  Report rep = read_report(out);
  REQUIRE(rep.results.size() == 2);
  CHECK(rep.results[0].criterion == Criterion::lasbd);
  CHECK(rep.results[1].criterion == Criterion::kr_additive);
  CHECK(rep.label_a == "B");

  std::ifstream in(data);
  std::ofstream fa(workdir() / "arm_a.csv");
  std::ofstream fb(workdir() / "arm_b.csv");
  std::string line;
  std::getline(in, line);
  fa << line << '\n';
  fb << line << '\n';
  while (std::getline(in, line)) (line.rfind("A,", 0) == 0 ? fa : fb) << line << '\n';
  fa.close();
  fb.close();
  r = cli::run("run --input-a " + (workdir() / "arm_a.csv").string() + " --input-b " +
               (workdir() / "arm_b.csv").string() + kQuick + "--out " + out.string());
  REQUIRE(r.status == 0);
  CHECK(read_report(out).results.size() == 12);
}

TEST_CASE("report goes to stdout without --out") {
  const auto r = cli::run("run --input " + sample_file().string() + " --criteria iasd" + kQuick);
  REQUIRE(r.status == 0);
  CHECK(nlohmann::json::parse(r.output)["results"].size() == 2);
}

TEST_CASE("grid emission from the command line") {
  const std::string prefix = (workdir() / "grid_").string();
  const auto r = cli::run("run --input " + sample_file().string() + " --criteria lasbd" + kQuick +
                          "--emit-grids " + prefix + " --out " + (workdir() / "g.json").string());
  REQUIRE(r.status == 0);
  CHECK(fs::exists(prefix + "lasbd_F2.csv"));
  CHECK(fs::exists(prefix + "lasbd_F_negx_z.csv"));
  CHECK(fs::exists(prefix + "lasbd_F1_x_plus_F1_negx.csv"));
}

TEST_CASE("usage errors exit with status 2") {
  const std::string data = sample_file().string();
  CHECK(cli::run("run --input " + data + " --bogus-flag").status == 2);
  CHECK(cli::run("run --input " + data + " --criteria nonsense").status == 2);
  CHECK(cli::run("run --input " + data + " --direction sideways").status == 2);
  CHECK(cli::run("run --input " + data + " --reps 0").status == 2);
  CHECK(cli::run("run").status == 2);
  CHECK(cli::run("").status == 2);
  const auto msg = cli::run("run --input " + data + " --criteria nonsense");
  CHECK(msg.output.find("unknown criterion") != std::string::npos);
}

TEST_CASE("data errors exit with status 3") {
  CHECK(cli::run("run --input /nonexistent.csv").status == 3);
  const fs::path bad = workdir() / "bad.csv";
  std::ofstream(bad) << "treatment,x,z\nA,0,1\nA,1,2\n";
  const auto r = cli::run("run --input " + bad.string());
  CHECK(r.status == 3);
  CHECK(r.output.find("expected exactly two treatments") != std::string::npos);
  CHECK(cli::run("run --input " + sample_file().string() + " --schema prepost").status == 3);
}

TEST_CASE("generate and simulate subcommands") {
  const fs::path gen = workdir() / "gen.csv";
  REQUIRE(cli::run("generate --generator figure1_replica --shift 0.5 --n 30 --seed 2 --out " +
                   gen.string())
              .status == 0);
  CHECK(slurp(gen).rfind("treatment,x,z\nAFDC_like,", 0) == 0);

  const fs::path rates = workdir() / "rates.csv";
  const auto r = cli::run("simulate --generator null_identical --n 30 --mc 3 --reps 9 --out " +
                          rates.string());
  REQUIRE(r.status == 0);
  CHECK(slurp(rates).rfind("criterion,direction,n,rejection_rate,mc_se\n", 0) == 0);
  CHECK(cli::run("simulate --generator unknown").status == 2);
}
