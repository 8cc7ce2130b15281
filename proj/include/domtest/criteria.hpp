#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "domtest/data_model.hpp"
#include "domtest/edf.hpp"
#include "domtest/grid_kernel.hpp"
#include "domtest/types.hpp"

namespace domtest {

/// Argument domain of one test-function coordinate.
///
///   z_axis          z over grid.z_points                      (gz)
///   neg_x_axis      m over grid.x_pos_points, evaluated at -m (gx)
///   pos_x_axis      m over grid.x_pos_points                  (gx)
///   xz_plane_negx   (m, z) at (-m, z), top m and top z omitted ((gx-1) x (gz-1))
///   xz_plane_posx   (m, z) at (+m, z), top m and top z omitted ((gx-1) x (gz-1))
///   x1x2_quadrant   (m1, m2) over x_pos_points squared        (gx x gx)
enum class Domain { z_axis, neg_x_axis, pos_x_axis, xz_plane_negx, xz_plane_posx, x1x2_quadrant };

std::string_view to_string(Domain d);

struct CoordinateSpec {
  std::string_view name;  // e.g. "F(-x,z)"
  std::string_view slug;  // file-name safe, e.g. "F_negx_z"
  Domain domain;
};

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 1;

  std::size_t size() const noexcept { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// One coordinate of g = g^k(F_A) - g^k(F_B) on its own domain. Values are
/// row-major; `cell_weight` is the product of the domain's axis spacings.
struct CoordinateField {
  std::string name;
  Domain domain = Domain::z_axis;
  Shape shape;
  double cell_weight = 1.0;
  std::vector<double> values;
};

/// Static coordinate table of a criterion: 5, 5, 4, 4, 5, 5, 3 entries for
/// LASBD, LASBD2, IASD, IASD2, LIASD, LIASD2, KR_ADDITIVE.
std::span<const CoordinateSpec> coordinate_domains(Criterion kind);

Shape domain_shape(Domain d, const EvaluationGrid& grid);
double domain_cell_weight(Domain d, const EvaluationGrid& grid);

/// Builds the coordinate fields from two tabulated samples. `out` is resized
/// and reused so bootstrap workers do not reallocate per replicate.
void fill_fields(Criterion kind, const GridTables& a, const GridTables& b,
                 const EvaluationGrid& grid, std::vector<CoordinateField>& out);

/// g(F_A, F_B) for `kind` through the grid kernel. Both summaries must be
/// built on the grid's support box (throws std::invalid_argument otherwise).
std::vector<CoordinateField> evaluate_g(Criterion kind, const EdfSummary& a, const EdfSummary& b,
                                        const EvaluationGrid& grid);

/// Same fields computed point by point from EdfSummary queries.
std::vector<CoordinateField> evaluate_g_reference(Criterion kind, const EdfSummary& a,
                                                  const EdfSummary& b,
                                                  const EvaluationGrid& grid);

}  // namespace domtest
