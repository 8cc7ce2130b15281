#include "domtest/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace domtest {

using nlohmann::json;

namespace {

std::string format_real(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

void dump_value(std::ostringstream& os, const json& j, int level) {
  const std::string pad(static_cast<std::size_t>(2 * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * level), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        dump_value(os, it.value(), level + 1);
      }
      os << '\n' << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const json& e : j) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        dump_value(os, e, level + 1);
      }
      os << '\n' << close_pad << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_real(v) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Criterion criterion_from(const json& j) {
  const auto c = parse_criterion(j.get<std::string>());
  if (!c) throw std::invalid_argument("unknown criterion '" + j.get<std::string>() + "'");
  return *c;
}

}  // namespace

json config_to_json(const RunConfig& cfg) {
  json criteria = json::array();
  for (Criterion c : cfg.criteria) criteria.push_back(std::string(to_string(c)));
  return json{{"criteria", criteria},
              {"direction", std::string(to_string(cfg.direction))},
              {"replicates", cfg.replicates},
              {"seed", cfg.seed},
              {"eta", cfg.eta},
              {"contact_rule", {{"coefficient", cfg.contact_rule.coefficient},
                                {"formula", "coefficient*log(log(n))/sqrt(n)"}}},
              {"grid_x", cfg.grid_x},
              {"grid_z", cfg.grid_z},
              {"alpha", cfg.alpha}};
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  if (j.contains("criteria")) {
    cfg.criteria.clear();
    for (const json& c : j.at("criteria")) cfg.criteria.push_back(criterion_from(c));
  }
  if (j.contains("direction")) {
    const auto d = parse_direction_set(j.at("direction").get<std::string>());
    if (!d) throw std::invalid_argument("unknown direction in config");
    cfg.direction = *d;
  }
  cfg.replicates = j.value("replicates", cfg.replicates);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.eta = j.value("eta", cfg.eta);
  if (j.contains("contact_rule")) {
    cfg.contact_rule.coefficient =
        j.at("contact_rule").value("coefficient", cfg.contact_rule.coefficient);
  }
  cfg.grid_x = j.value("grid_x", cfg.grid_x);
  cfg.grid_z = j.value("grid_z", cfg.grid_z);
  cfg.alpha = j.value("alpha", cfg.alpha);
  return cfg;
}

json result_to_json(const TestResult& r) {
  json per = json::object();
  for (const auto& [name, value] : r.per_coordinate) per[name] = value;
  return json{{"criterion", std::string(to_string(r.criterion))},
              {"direction", std::string(to_string(r.direction))},
              {"n_a", r.n_a},
              {"n_b", r.n_b},
              {"n", r.n},
              {"statistic", r.t_n},
              {"sqrt_n_statistic", r.sqrt_n_t_n},
              {"p_value", r.p_value},
              {"alpha", r.alpha},
              {"rejected", r.rejected},
              {"replicates", r.replicates},
              {"seed", r.seed},
              {"c_n", r.c_n},
              {"eta", r.eta},
              {"contact_fraction", r.contact_fraction},
              {"bootstrap_quantiles", {{"q90", r.q90}, {"q95", r.q95}, {"q99", r.q99}}},
              {"coordinate_contributions", per}};
}

TestResult result_from_json(const json& j) {
  TestResult r;
  r.criterion = criterion_from(j.at("criterion"));
  const auto d = parse_direction(j.at("direction").get<std::string>());
  if (!d) throw std::invalid_argument("unknown direction in result");
  r.direction = *d;
  r.n_a = j.at("n_a").get<std::size_t>();
  r.n_b = j.at("n_b").get<std::size_t>();
  r.n = j.at("n").get<std::size_t>();
  r.t_n = j.at("statistic").get<double>();
  r.sqrt_n_t_n = j.at("sqrt_n_statistic").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.alpha = j.value("alpha", r.alpha);
  r.rejected = j.value("rejected", false);
  r.replicates = j.at("replicates").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.c_n = j.at("c_n").get<double>();
  r.eta = j.at("eta").get<double>();
  r.contact_fraction = j.at("contact_fraction").get<double>();
  const json& q = j.at("bootstrap_quantiles");
  r.q90 = q.at("q90").get<double>();
  r.q95 = q.at("q95").get<double>();
  r.q99 = q.at("q99").get<double>();
  // coordinate order follows the criterion's table, not the sorted JSON keys
  if (j.contains("coordinate_contributions")) {
    const json& per = j.at("coordinate_contributions");
    for (const CoordinateSpec& spec : coordinate_domains(r.criterion)) {
      const std::string name(spec.name);
      if (per.contains(name)) r.per_coordinate.emplace_back(name, per.at(name).get<double>());
    }
  }
  return r;
}

json report_to_json(const Report& report) {
  json results = json::array();
  for (const TestResult& r : report.results) results.push_back(result_to_json(r));
  return json{{"schema_version", kReportSchemaVersion},
              {"tool_version", report.tool_version},
              {"input_digest", report.input_digest},
              {"config", config_to_json(report.config)},
              {"samples", {{"label_a", report.label_a},
                           {"label_b", report.label_b},
                           {"n_a", report.n_a},
                           {"n_b", report.n_b}}},
              {"results", results},
              {"timing", {{"elapsed_seconds", report.elapsed_seconds},
                          {"threads", report.threads}}}};
}

Report report_from_json(const json& j) {
  Report r;
  r.tool_version = j.at("tool_version").get<std::string>();
  r.input_digest = j.at("input_digest").get<std::string>();
  r.config = config_from_json(j.at("config"));
  const json& s = j.at("samples");
  r.label_a = s.at("label_a").get<std::string>();
  r.label_b = s.at("label_b").get<std::string>();
  r.n_a = s.at("n_a").get<std::size_t>();
  r.n_b = s.at("n_b").get<std::size_t>();
  for (const json& e : j.at("results")) r.results.push_back(result_from_json(e));
  if (j.contains("timing")) {
    r.elapsed_seconds = j.at("timing").value("elapsed_seconds", 0.0);
    r.threads = j.at("timing").value("threads", 0);
  }
  return r;
}

std::string dump_json(const json& j) {
  std::ostringstream os;
  dump_value(os, j, 0);
  os << '\n';
  return os.str();
}

void write_report(const std::filesystem::path& path, const Report& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write report to '" + path.string() + "'");
  out << dump_json(report_to_json(report));
  if (!out) throw DataError("failed writing report to '" + path.string() + "'");
}

Report read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open report '" + path.string() + "'");
  return report_from_json(json::parse(in));
}

std::string input_digest(std::span<const std::filesystem::path> files) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 initialisation failed");
  }
  std::array<char, 1 << 16> buf{};
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file '" + path.string() + "'");
    while (in.read(buf.data(), buf.size()) || in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xf]);
  }
  return hex;
}

std::vector<std::filesystem::path> emit_grids(Criterion kind,
                                              std::span<const CoordinateField> fields,
                                              const EvaluationGrid& grid,
                                              const std::string& path_prefix) {
  const auto specs = coordinate_domains(kind);
  if (specs.size() != fields.size()) {
    throw std::invalid_argument("field list does not match criterion " +
                                std::string(to_string(kind)));
  }
  std::vector<std::filesystem::path> written;
  for (std::size_t c = 0; c < fields.size(); ++c) {
    const CoordinateField& f = fields[c];
    const std::filesystem::path path =
        path_prefix + lower(to_string(kind)) + "_" + std::string(specs[c].slug) + ".csv";
    std::ofstream out(path);
    if (!out) throw DataError("cannot write grid file '" + path.string() + "'");
    const auto& m = grid.x_pos_points;
    const auto& z = grid.z_points;
    switch (f.domain) {
      case Domain::z_axis:
        out << "z,value\n";
        for (std::size_t j = 0; j < f.shape.rows; ++j) {
          out << format_real(z[j]) << ',' << format_real(f.values[j]) << '\n';
        }
        break;
      case Domain::neg_x_axis:
      case Domain::pos_x_axis:
        out << "m,value\n";
        for (std::size_t i = 0; i < f.shape.rows; ++i) {
          out << format_real(m[i]) << ',' << format_real(f.values[i]) << '\n';
        }
        break;
      case Domain::xz_plane_negx:
      case Domain::xz_plane_posx:
        out << "m,z,value\n";
        for (std::size_t i = 0; i < f.shape.rows; ++i) {
          for (std::size_t j = 0; j < f.shape.cols; ++j) {
            out << format_real(m[i]) << ',' << format_real(z[j]) << ','
                << format_real(f.values[i * f.shape.cols + j]) << '\n';
          }
        }
        break;
      case Domain::x1x2_quadrant:
        out << "m1,m2,value\n";
        for (std::size_t i = 0; i < f.shape.rows; ++i) {
          for (std::size_t j = 0; j < f.shape.cols; ++j) {
            out << format_real(m[i]) << ',' << format_real(m[j]) << ','
                << format_real(f.values[i * f.shape.cols + j]) << '\n';
          }
        }
        break;
    }
    if (!out) throw DataError("failed writing grid file '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace domtest
