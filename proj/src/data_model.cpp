#include "domtest/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace domtest {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// RFC 4180-ish: commas separate fields, double quotes may wrap a field and
// "" inside quotes is a literal quote.
std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

std::string row_tag(std::size_t row, std::size_t line) {
  return "row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
}

double parse_real(const std::string& cell, std::string_view column, std::size_t row,
                  std::size_t line) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc{} || ptr != end) {
    throw DataError(row_tag(row, line) + ": non-numeric value '" + cell + "' in column '" +
                    std::string(column) + "'");
  }
  if (!std::isfinite(value)) {
    throw DataError(row_tag(row, line) + ": non-finite value '" + cell + "' in column '" +
                    std::string(column) + "'");
  }
  return value;
}

struct RawRow {
  std::string label;
  Observation obs;
};

struct ParsedFile {
  std::vector<RawRow> rows;
  bool has_treatment = false;
};

ParsedFile parse_file(const std::filesystem::path& path, Schema schema, bool require_treatment) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("input file '" + path.string() + "' is empty");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

  const std::vector<std::string> header = split_csv_line(line);
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      std::string h = header[i];
      std::transform(h.begin(), h.end(), h.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (h == name) return i;
    }
    return std::nullopt;
  };

  const auto treatment_col = column("treatment");
  if (require_treatment && !treatment_col) {
    throw DataError("input file '" + path.string() + "' has no 'treatment' column");
  }

  const auto x_col = column("x");
  const auto z_col = column("z");
  const auto pre_col = column("pre_income");
  const auto post_col = column("post_income");
  const bool xz_ok = x_col && z_col;
  const bool prepost_ok = pre_col && post_col;

  if (schema == Schema::detect) {
    if (xz_ok) {
      schema = Schema::xz;
    } else if (prepost_ok) {
      schema = Schema::prepost;
    } else {
      throw DataError("input file '" + path.string() +
                      "' needs columns x,z or pre_income,post_income");
    }
  }
  if (schema == Schema::xz && !xz_ok) {
    throw DataError("schema xz needs columns 'x' and 'z' in '" + path.string() + "'");
  }
  if (schema == Schema::prepost && !prepost_ok) {
    throw DataError("schema prepost needs columns 'pre_income' and 'post_income' in '" +
                    path.string() + "'");
  }

  ParsedFile parsed;
  parsed.has_treatment = treatment_col.has_value();
  std::size_t line_no = 1;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++row_no;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() < header.size()) {
      throw DataError(row_tag(row_no, line_no) + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(cells.size()));
    }
    RawRow row;
    if (treatment_col) {
      row.label = cells[*treatment_col];
      if (row.label.empty()) throw DataError(row_tag(row_no, line_no) + ": empty treatment label");
    }
    if (schema == Schema::xz) {
      row.obs.x = parse_real(cells[*x_col], "x", row_no, line_no);
      row.obs.z = parse_real(cells[*z_col], "z", row_no, line_no);
    } else {
      const double pre = parse_real(cells[*pre_col], "pre_income", row_no, line_no);
      const double post = parse_real(cells[*post_col], "post_income", row_no, line_no);
      try {
        row.obs = derive_changes(pre, post);
      } catch (const DataError& e) {
        throw DataError(row_tag(row_no, line_no) + ": " + e.what());
      }
    }
    parsed.rows.push_back(std::move(row));
  }
  return parsed;
}

PolicySample make_arm(std::string label, std::vector<Observation> obs) {
  if (obs.size() < 2) {
    throw DataError("treatment '" + label + "' has " + std::to_string(obs.size()) +
                    " row(s); at least 2 are required");
  }
  return PolicySample(std::move(label), std::move(obs));
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> points(count);
  const double span = hi - lo;
  const double denom = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    points[i] = lo + span * (static_cast<double>(i) / denom);
  }
  points.front() = lo;
  points.back() = hi;
  return points;
}

}  // namespace

PolicySample::PolicySample(std::string label, std::vector<Observation> observations)
    : label_(std::move(label)), observations_(std::move(observations)) {
  if (observations_.size() < 2) {
    throw DataError("sample '" + label_ + "' needs at least 2 observations");
  }
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    if (!std::isfinite(observations_[i].x) || !std::isfinite(observations_[i].z)) {
      throw DataError("sample '" + label_ + "': observation " + std::to_string(i) +
                      " is not finite");
    }
  }
}

double ContactRule::threshold(std::size_t n) const {
  if (n < 4) {
    throw std::invalid_argument("contact set needs a pooled sample size of at least 4, got " +
                                std::to_string(n));
  }
  const double nn = static_cast<double>(n);
  return coefficient * std::log(std::log(nn)) / std::sqrt(nn);
}

void RunConfig::validate() const {
  if (criteria.empty()) throw std::invalid_argument("at least one criterion is required");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (grid_x < 2 || grid_z < 2) throw std::invalid_argument("grid sizes must be >= 2");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
  if (!(contact_rule.coefficient > 0.0)) {
    throw std::invalid_argument("contact rule coefficient must be > 0");
  }
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

std::pair<PolicySample, PolicySample> load_samples(const std::filesystem::path& path,
                                                   const LoadOptions& options) {
  ParsedFile parsed = parse_file(path, options.schema, /*require_treatment=*/true);

  std::vector<std::string> labels;
  for (const RawRow& r : parsed.rows) {
    if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) {
      labels.push_back(r.label);
    }
  }
  if (labels.size() != 2) {
    throw DataError("expected exactly two treatments, found " + std::to_string(labels.size()) +
                    " in '" + path.string() + "'");
  }
  if (options.label_a) {
    if (labels[1] == *options.label_a) {
      std::swap(labels[0], labels[1]);
    } else if (labels[0] != *options.label_a) {
      throw DataError("label '" + *options.label_a + "' not found; treatments are '" +
                      labels[0] + "' and '" + labels[1] + "'");
    }
  }

  std::vector<Observation> a;
  std::vector<Observation> b;
  for (const RawRow& r : parsed.rows) {
    (r.label == labels[0] ? a : b).push_back(r.obs);
  }
  return {make_arm(labels[0], std::move(a)), make_arm(labels[1], std::move(b))};
}

std::pair<PolicySample, PolicySample> load_samples(const std::filesystem::path& path_a,
                                                   const std::filesystem::path& path_b,
                                                   const LoadOptions& options) {
  auto load_one = [&](const std::filesystem::path& p) {
    ParsedFile parsed = parse_file(p, options.schema, /*require_treatment=*/false);
    std::string label = p.stem().string();
    if (parsed.has_treatment && !parsed.rows.empty()) {
      label = parsed.rows.front().label;
      for (const RawRow& r : parsed.rows) {
        if (r.label != label) {
          throw DataError("file '" + p.string() + "' mixes treatments '" + label + "' and '" +
                          r.label + "'; use --input for two-treatment files");
        }
      }
    }
    std::vector<Observation> obs;
    obs.reserve(parsed.rows.size());
    for (const RawRow& r : parsed.rows) obs.push_back(r.obs);
    return make_arm(std::move(label), std::move(obs));
  };
  PolicySample a = load_one(path_a);
  PolicySample b = load_one(path_b);
  if (options.label_a && *options.label_a == b.label() && *options.label_a != a.label()) {
    return {std::move(b), std::move(a)};
  }
  return {std::move(a), std::move(b)};
}

void write_samples_csv(const std::filesystem::path& path, const PolicySample& a,
                       const PolicySample& b) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "treatment,x,z\n";
  for (const PolicySample* s : {&a, &b}) {
    for (const Observation& o : s->observations()) {
      out << s->label() << ',' << o.x << ',' << o.z << '\n';
    }
  }
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

Observation derive_changes(double pre, double post) {
  if (!(pre > 0.0) || !(post > 0.0)) {
    std::ostringstream msg;
    msg << "incomes must be positive (pre_income=" << pre << ", post_income=" << post << ")";
    throw DataError(msg.str());
  }
  const double log_post = std::log(post);
  return Observation{log_post - std::log(pre), log_post};
}

SupportBox pooled_support(const PolicySample& a, const PolicySample& b) {
  SupportBox box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const PolicySample* s : {&a, &b}) {
    for (const Observation& o : s->observations()) {
      box.x_min = std::min(box.x_min, o.x);
      box.x_max = std::max(box.x_max, o.x);
      box.z_min = std::min(box.z_min, o.z);
      box.z_max = std::max(box.z_max, o.z);
    }
  }
  return box;
}

EvaluationGrid build_grid(const SupportBox& box, std::size_t gx, std::size_t gz) {
  if (gx < 2 || gz < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
  if (!(box.x_min < box.x_max)) {
    throw std::invalid_argument("degenerate support: all x values are equal");
  }
  if (!(box.z_min < box.z_max)) {
    throw std::invalid_argument("degenerate support: all z values are equal");
  }
  EvaluationGrid grid;
  grid.box = box;
  grid.x_points = linspace(box.x_min, box.x_max, gx);
  grid.z_points = linspace(box.z_min, box.z_max, gz);
  const double m_max = std::max(std::abs(box.x_min), box.x_max);
  grid.x_pos_points = linspace(0.0, m_max, gx);
  grid.x_step = (box.x_max - box.x_min) / static_cast<double>(gx - 1);
  grid.z_step = (box.z_max - box.z_min) / static_cast<double>(gz - 1);
  grid.m_step = m_max / static_cast<double>(gx - 1);
  return grid;
}

}  // namespace domtest
