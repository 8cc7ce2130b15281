#include "domtest/criteria.hpp"

#include <array>
#include <stdexcept>

namespace domtest {

namespace {

constexpr CoordinateSpec kF2{"F2", "F2", Domain::z_axis};
constexpr CoordinateSpec kFNeg{"F(-x,z)", "F_negx_z", Domain::xz_plane_negx};
constexpr CoordinateSpec kFPos{"F(x,z)", "F_x_z", Domain::xz_plane_posx};
constexpr CoordinateSpec kKNeg{"K(-x,z)", "K_negx_z", Domain::xz_plane_negx};
constexpr CoordinateSpec kKPos{"K(x,z)", "K_x_z", Domain::xz_plane_posx};
constexpr CoordinateSpec kF1Neg{"F1(-x)", "F1_negx", Domain::neg_x_axis};
constexpr CoordinateSpec kF1Sum{"F1(x)+F1(-x)", "F1_x_plus_F1_negx", Domain::pos_x_axis};
constexpr CoordinateSpec kH2{"H2", "H2", Domain::z_axis};
constexpr CoordinateSpec kHNeg{"H(-x,z)", "H_negx_z", Domain::xz_plane_negx};
constexpr CoordinateSpec kHPos{"H(x,z)", "H_x_z", Domain::xz_plane_posx};
constexpr CoordinateSpec kLNeg{"L(-x,z)", "L_negx_z", Domain::xz_plane_negx};
constexpr CoordinateSpec kLPos{"L(x,z)", "L_x_z", Domain::xz_plane_posx};
constexpr CoordinateSpec kSHCentered{"S1-H1-centered", "S1_H1_centered",
                                     Domain::x1x2_quadrant};

constexpr std::array kLasbd{kF2, kFNeg, kFPos, kF1Neg, kF1Sum};
constexpr std::array kLasbd2{kF2, kKNeg, kKPos, kF1Neg, kF1Sum};
constexpr std::array kIasd{kH2, kHNeg, kHPos, kSHCentered};
constexpr std::array kIasd2{kH2, kLNeg, kLPos, kSHCentered};
constexpr std::array kLiasd{kH2, kHNeg, kHPos, kF1Neg, kF1Sum};
constexpr std::array kLiasd2{kH2, kLNeg, kLPos, kF1Neg, kF1Sum};
constexpr std::array kKr{kF2, kF1Neg, kF1Sum};

// g^k(F) for one sample on a plane, restricted to the interior block
void plane_diff(const std::vector<double>& a, const std::vector<double>& b, std::size_t gz,
                Shape shape, std::vector<double>& out) {
  out.resize(shape.size());
  for (std::size_t i = 0; i < shape.rows; ++i) {
    for (std::size_t j = 0; j < shape.cols; ++j) {
      out[i * shape.cols + j] = a[i * gz + j] - b[i * gz + j];
    }
  }
}

void axis_diff(const std::vector<double>& a, const std::vector<double>& b,
               std::vector<double>& out) {
  out.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
}

double gain_loss_sum(const GridTables& t, std::size_t i) { return t.f1_pos[i] + t.f1_neg[i]; }

// S1(m1) - H1(-m2) - S1(0) + H1(0), grouped so that (0, 0) is exactly zero
double centered_spread(const GridTables& t, std::size_t i1, std::size_t i2) {
  return (t.s1_pos[i1] - t.s1_pos[0]) - (t.h1_neg[i2] - t.h1_neg[0]);
}

void fill_one(const CoordinateSpec& spec, const GridTables& a, const GridTables& b,
              const EvaluationGrid& grid, CoordinateField& f) {
  f.name = std::string(spec.name);
  f.domain = spec.domain;
  f.shape = domain_shape(spec.domain, grid);
  f.cell_weight = domain_cell_weight(spec.domain, grid);
  const std::size_t gz = a.gz;
  const std::string_view slug = spec.slug;

  if (slug == "F2") return axis_diff(a.f2, b.f2, f.values);
  if (slug == "H2") return axis_diff(a.h2, b.h2, f.values);
  if (slug == "F1_negx") return axis_diff(a.f1_neg, b.f1_neg, f.values);
  if (slug == "F1_x_plus_F1_negx") {
    f.values.resize(a.gx);
    for (std::size_t i = 0; i < a.gx; ++i) f.values[i] = gain_loss_sum(a, i) - gain_loss_sum(b, i);
    return;
  }
  if (slug == "S1_H1_centered") {
    f.values.resize(a.gx * a.gx);
    for (std::size_t i1 = 0; i1 < a.gx; ++i1) {
      for (std::size_t i2 = 0; i2 < a.gx; ++i2) {
        f.values[i1 * a.gx + i2] = centered_spread(a, i1, i2) - centered_spread(b, i1, i2);
      }
    }
    return;
  }
  if (slug == "F_negx_z") return plane_diff(a.f_neg, b.f_neg, gz, f.shape, f.values);
  if (slug == "F_x_z") return plane_diff(a.f_pos, b.f_pos, gz, f.shape, f.values);
  if (slug == "K_negx_z") return plane_diff(a.k_neg, b.k_neg, gz, f.shape, f.values);
  if (slug == "K_x_z") return plane_diff(a.k_pos, b.k_pos, gz, f.shape, f.values);
  if (slug == "H_negx_z") return plane_diff(a.h_neg, b.h_neg, gz, f.shape, f.values);
  if (slug == "H_x_z") return plane_diff(a.h_pos, b.h_pos, gz, f.shape, f.values);
  if (slug == "L_negx_z") return plane_diff(a.l_neg, b.l_neg, gz, f.shape, f.values);
  if (slug == "L_x_z") return plane_diff(a.l_pos, b.l_pos, gz, f.shape, f.values);
  throw std::logic_error("unknown coordinate " + std::string(slug));
}

void check_compatible(const EdfSummary& s, const EvaluationGrid& grid) {
  if (s.origin_x() != grid.box.x_min || s.origin_z() != grid.box.z_min) {
    throw std::invalid_argument(
        "EdfSummary origins do not match the evaluation grid's support box");
  }
}

}  // namespace

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::z_axis: return "z_axis";
    case Domain::neg_x_axis: return "neg_x_axis";
    case Domain::pos_x_axis: return "pos_x_axis";
    case Domain::xz_plane_negx: return "xz_plane_negx";
    case Domain::xz_plane_posx: return "xz_plane_posx";
    case Domain::x1x2_quadrant: return "x1x2_quadrant";
  }
  return "?";
}

std::span<const CoordinateSpec> coordinate_domains(Criterion kind) {
  switch (kind) {
    case Criterion::lasbd: return kLasbd;
    case Criterion::lasbd2: return kLasbd2;
    case Criterion::iasd: return kIasd;
    case Criterion::iasd2: return kIasd2;
    case Criterion::liasd: return kLiasd;
    case Criterion::liasd2: return kLiasd2;
    case Criterion::kr_additive: return kKr;
  }
  return {};
}

Shape domain_shape(Domain d, const EvaluationGrid& grid) {
  const std::size_t gx = grid.x_pos_points.size();
  const std::size_t gz = grid.z_points.size();
  switch (d) {
    case Domain::z_axis: return {gz, 1};
    case Domain::neg_x_axis:
    case Domain::pos_x_axis: return {gx, 1};
    case Domain::xz_plane_negx:
    case Domain::xz_plane_posx: return {gx - 1, gz - 1};
    case Domain::x1x2_quadrant: return {gx, gx};
  }
  return {};
}

double domain_cell_weight(Domain d, const EvaluationGrid& grid) {
  switch (d) {
    case Domain::z_axis: return grid.z_step;
    case Domain::neg_x_axis:
    case Domain::pos_x_axis: return grid.m_step;
    case Domain::xz_plane_negx:
    case Domain::xz_plane_posx: return grid.m_step * grid.z_step;
    case Domain::x1x2_quadrant: return grid.m_step * grid.m_step;
  }
  return 0.0;
}

void fill_fields(Criterion kind, const GridTables& a, const GridTables& b,
                 const EvaluationGrid& grid, std::vector<CoordinateField>& out) {
  const auto specs = coordinate_domains(kind);
  out.resize(specs.size());
  for (std::size_t c = 0; c < specs.size(); ++c) fill_one(specs[c], a, b, grid, out[c]);
}

std::vector<CoordinateField> evaluate_g(Criterion kind, const EdfSummary& a, const EdfSummary& b,
                                        const EvaluationGrid& grid) {
  check_compatible(a, grid);
  check_compatible(b, grid);
  std::vector<CoordinateField> fields;
  fill_fields(kind, tabulate(a, grid), tabulate(b, grid), grid, fields);
  return fields;
}

std::vector<CoordinateField> evaluate_g_reference(Criterion kind, const EdfSummary& a,
                                                  const EdfSummary& b,
                                                  const EvaluationGrid& grid) {
  check_compatible(a, grid);
  check_compatible(b, grid);
  std::vector<CoordinateField> fields;
  fill_fields(kind, tabulate_reference(a, grid), tabulate_reference(b, grid), grid, fields);
  return fields;
}

}  // namespace domtest
