#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "domtest/data_model.hpp"
#include "domtest/edf.hpp"

namespace domtest {

/// All distribution transforms of one (re)sample tabulated on an
/// EvaluationGrid. Index i runs over grid.x_pos_points (magnitude m_i),
/// index j over grid.z_points. Plane tables are row-major [i * gz + j].
struct GridTables {
  std::size_t gx = 0;
  std::size_t gz = 0;

  std::vector<double> f1_neg;  // F1(-m_i)
  std::vector<double> f1_pos;  // F1(m_i)
  std::vector<double> h1_neg;  // H1(-m_i)
  std::vector<double> s1_pos;  // S1(m_i)
  std::vector<double> f2;      // F2(z_j)
  std::vector<double> h2;      // H2(z_j)

  std::vector<double> f_neg, f_pos;  // F(-+m_i, z_j)
  std::vector<double> k_neg, k_pos;  // K
  std::vector<double> h_neg, h_pos;  // H
  std::vector<double> l_neg, l_pos;  // L

  double at(const std::vector<double>& plane, std::size_t i, std::size_t j) const {
    return plane[i * gz + j];
  }
};

/// Scratch accumulators for GridBinner::tabulate. One per worker thread.
struct KernelScratch {
  std::vector<double> count, sum_x, sum_z, sum_xz;  // 2 planes, gx * gz each
  std::vector<double> z_count, z_sum;               // gz
};

/// Precomputes, for every observation of a sample, its cell on the grid's
/// query lattices so that any resample can be tabulated with one scatter
/// pass plus 2-D prefix sums: O(n + gx * gz) per resample instead of
/// O(n * gx * gz) pointwise evaluation.
class GridBinner {
 public:
  /// Throws std::invalid_argument when an observation lies outside grid.box.
  GridBinner(const EvaluationGrid& grid, std::span<const Observation> observations);

  std::size_t size() const noexcept { return cells_.size(); }

  /// Tabulates the resample made of observations[indices[k]] for all k.
  void tabulate(std::span<const std::uint32_t> indices, GridTables& out,
                KernelScratch& scratch) const;

  /// Tabulates the original sample.
  void tabulate_all(GridTables& out, KernelScratch& scratch) const;

 private:
  struct Cell {
    std::uint32_t neg;  // ascending index into the -m lattice, gx when beyond it
    std::uint32_t pos;
    std::uint32_t z;
    double x_shift;  // x - origin_x
    double z_shift;  // z - origin_z
  };

  template <typename IndexFn>
  void tabulate_impl(std::size_t n, IndexFn index_of, GridTables& out,
                     KernelScratch& scratch) const;

  std::vector<Cell> cells_;
  std::vector<double> m_points_;
  std::vector<double> z_points_;
  double origin_x_;
  double origin_z_;
};

/// Tabulates an EdfSummary's full sample through the kernel.
GridTables tabulate(const EdfSummary& edf, const EvaluationGrid& grid);

/// Same tables from the pointwise EdfSummary queries (serial reference).
GridTables tabulate_reference(const EdfSummary& edf, const EvaluationGrid& grid);

}  // namespace domtest
