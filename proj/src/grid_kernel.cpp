#include "domtest/grid_kernel.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace domtest {

namespace {

std::uint32_t first_at_or_above(std::span<const double> ascending, double v) {
  return static_cast<std::uint32_t>(std::lower_bound(ascending.begin(), ascending.end(), v) -
                                    ascending.begin());
}

void resize_tables(GridTables& t, std::size_t gx, std::size_t gz) {
  t.gx = gx;
  t.gz = gz;
  for (auto* v : {&t.f1_neg, &t.f1_pos, &t.h1_neg, &t.s1_pos}) v->assign(gx, 0.0);
  for (auto* v : {&t.f2, &t.h2}) v->assign(gz, 0.0);
  for (auto* v : {&t.f_neg, &t.f_pos, &t.k_neg, &t.k_pos, &t.h_neg, &t.h_pos, &t.l_neg,
                  &t.l_pos}) {
    v->assign(gx * gz, 0.0);
  }
}

}  // namespace

GridBinner::GridBinner(const EvaluationGrid& grid, std::span<const Observation> observations)
    : m_points_(grid.x_pos_points),
      z_points_(grid.z_points),
      origin_x_(grid.box.x_min),
      origin_z_(grid.box.z_min) {
  const std::size_t gx = m_points_.size();
  // ascending -m lattice: -m_{gx-1}, ..., -m_0
  std::vector<double> neg(gx);
  for (std::size_t b = 0; b < gx; ++b) neg[b] = -m_points_[gx - 1 - b];

  cells_.reserve(observations.size());
  for (const Observation& o : observations) {
    if (!grid.box.contains(o)) {
      throw std::invalid_argument("observation lies outside the evaluation grid's support box");
    }
    cells_.push_back(Cell{first_at_or_above(neg, o.x), first_at_or_above(m_points_, o.x),
                          first_at_or_above(z_points_, o.z), o.x - origin_x_, o.z - origin_z_});
  }
}

template <typename IndexFn>
void GridBinner::tabulate_impl(std::size_t n, IndexFn index_of, GridTables& out,
                               KernelScratch& s) const {
  const std::size_t gx = m_points_.size();
  const std::size_t gz = z_points_.size();
  const std::size_t plane = gx * gz;
  resize_tables(out, gx, gz);
  for (auto* v : {&s.count, &s.sum_x, &s.sum_z, &s.sum_xz}) v->assign(2 * plane, 0.0);
  s.z_count.assign(gz, 0.0);
  s.z_sum.assign(gz, 0.0);

  double total_x = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Cell& c = cells_[index_of(k)];
    total_x += c.x_shift;
    s.z_count[c.z] += 1.0;
    s.z_sum[c.z] += c.z_shift;
    const double xz = c.x_shift * c.z_shift;
    // z < gz always holds because observations lie inside the box
    if (c.neg < gx) {
      const std::size_t idx = c.neg * gz + c.z;
      s.count[idx] += 1.0;
      s.sum_x[idx] += c.x_shift;
      s.sum_z[idx] += c.z_shift;
      s.sum_xz[idx] += xz;
    }
    if (c.pos < gx) {
      const std::size_t idx = plane + c.pos * gz + c.z;
      s.count[idx] += 1.0;
      s.sum_x[idx] += c.x_shift;
      s.sum_z[idx] += c.z_shift;
      s.sum_xz[idx] += xz;
    }
  }

  // cumulative sums along z, then along the x lattice
  for (auto* v : {&s.count, &s.sum_x, &s.sum_z, &s.sum_xz}) {
    std::vector<double>& a = *v;
    for (std::size_t p = 0; p < 2; ++p) {
      double* base = a.data() + p * plane;
      for (std::size_t b = 0; b < gx; ++b) {
        double* row = base + b * gz;
        for (std::size_t j = 1; j < gz; ++j) row[j] += row[j - 1];
      }
      for (std::size_t b = 1; b < gx; ++b) {
        double* row = base + b * gz;
        const double* prev = row - gz;
        for (std::size_t j = 0; j < gz; ++j) row[j] += prev[j];
      }
    }
  }

  const double nd = static_cast<double>(n);
  double cz = 0.0;
  double sz = 0.0;
  for (std::size_t j = 0; j < gz; ++j) {
    cz += s.z_count[j];
    sz += s.z_sum[j];
    const double v = z_points_[j] - origin_z_;
    out.f2[j] = cz / nd;
    out.h2[j] = (cz * v - sz) / nd;
  }

  for (std::size_t p = 0; p < 2; ++p) {
    const bool negative = (p == 0);
    const double* cnt = s.count.data() + p * plane;
    const double* sx = s.sum_x.data() + p * plane;
    const double* szp = s.sum_z.data() + p * plane;
    const double* sxz = s.sum_xz.data() + p * plane;
    for (std::size_t b = 0; b < gx; ++b) {
      const std::size_t i = negative ? gx - 1 - b : b;
      const double q = negative ? -m_points_[i] : m_points_[i];
      const double u = q - origin_x_;
      const double u_clamped = std::max(u, 0.0);
      const std::size_t top = b * gz + (gz - 1);
      // the last z column holds the x-marginal: every observation has z <= z_max
      const double c1 = cnt[top];
      const double s1x = sx[top];
      const double f1 = c1 / nd;
      const double h1 = (c1 * u - s1x) / nd;
      if (negative) {
        out.f1_neg[i] = f1;
        out.h1_neg[i] = h1;
      } else {
        out.f1_pos[i] = f1;
        out.s1_pos[i] = ((total_x - s1x) - (static_cast<double>(n) - c1) * u) / nd;
      }
      std::vector<double>& f_plane = negative ? out.f_neg : out.f_pos;
      std::vector<double>& k_plane = negative ? out.k_neg : out.k_pos;
      std::vector<double>& h_plane = negative ? out.h_neg : out.h_pos;
      std::vector<double>& l_plane = negative ? out.l_neg : out.l_pos;
      for (std::size_t j = 0; j < gz; ++j) {
        const std::size_t src = b * gz + j;
        const std::size_t dst = i * gz + j;
        const double v = z_points_[j] - origin_z_;
        const double c = cnt[src];
        const double f = c / nd;
        const double h = (c * u * v - u * szp[src] - v * sx[src] + sxz[src]) / nd;
        f_plane[dst] = f;
        k_plane[dst] = f1 + out.f2[j] - f;
        h_plane[dst] = h;
        l_plane[dst] = v * h1 + u_clamped * out.h2[j] - h;
      }
    }
  }
}

void GridBinner::tabulate(std::span<const std::uint32_t> indices, GridTables& out,
                          KernelScratch& scratch) const {
  tabulate_impl(indices.size(), [&](std::size_t k) { return indices[k]; }, out, scratch);
}

void GridBinner::tabulate_all(GridTables& out, KernelScratch& scratch) const {
  tabulate_impl(cells_.size(), [](std::size_t k) { return k; }, out, scratch);
}

GridTables tabulate(const EdfSummary& edf, const EvaluationGrid& grid) {
  GridBinner binner(grid, edf.pairs());
  GridTables out;
  KernelScratch scratch;
  binner.tabulate_all(out, scratch);
  return out;
}

GridTables tabulate_reference(const EdfSummary& edf, const EvaluationGrid& grid) {
  const std::size_t gx = grid.x_pos_points.size();
  const std::size_t gz = grid.z_points.size();
  GridTables t;
  resize_tables(t, gx, gz);
  for (std::size_t i = 0; i < gx; ++i) {
    const double m = grid.x_pos_points[i];
    t.f1_neg[i] = edf.cdf1(-m);
    t.f1_pos[i] = edf.cdf1(m);
    t.h1_neg[i] = edf.h1(-m);
    t.s1_pos[i] = edf.s1(m);
  }
  for (std::size_t j = 0; j < gz; ++j) {
    t.f2[j] = edf.cdf2(grid.z_points[j]);
    t.h2[j] = edf.h2(grid.z_points[j]);
  }
  for (std::size_t i = 0; i < gx; ++i) {
    const double m = grid.x_pos_points[i];
    for (std::size_t j = 0; j < gz; ++j) {
      const double z = grid.z_points[j];
      const std::size_t idx = i * gz + j;
      t.f_neg[idx] = edf.joint_cdf(-m, z);
      t.f_pos[idx] = edf.joint_cdf(m, z);
      t.k_neg[idx] = edf.k_fn(-m, z);
      t.k_pos[idx] = edf.k_fn(m, z);
      t.h_neg[idx] = edf.h_joint(-m, z);
      t.h_pos[idx] = edf.h_joint(m, z);
      t.l_neg[idx] = edf.l_joint(-m, z);
      t.l_pos[idx] = edf.l_joint(m, z);
    }
  }
  return t;
}

}  // namespace domtest
