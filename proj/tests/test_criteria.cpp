#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "domtest/criteria.hpp"
#include "oracles.hpp"

using namespace domtest;

namespace {

struct Pair {
  PolicySample a;
  PolicySample b;
  SupportBox box;
  EvaluationGrid grid;
};

Pair random_pair(std::uint64_t seed, std::size_t gx = 24, std::size_t gz = 12) {
  std::mt19937_64 rng(seed);
  PolicySample a("A", oracle::gaussian_sample(rng, 60, 0.0, 7.0, 0.3));
  PolicySample b("B", oracle::gaussian_sample(rng, 45, 0.3, 7.2, -0.2));
  const SupportBox box = pooled_support(a, b);
  EvaluationGrid grid = build_grid(box, gx, gz);
  return {std::move(a), std::move(b), box, std::move(grid)};
}

}  // namespace

TEST_CASE("coordinate tables") {
  const std::size_t expected[] = {5, 5, 4, 4, 5, 5, 3};
  for (std::size_t k = 0; k < kAllCriteria.size(); ++k) {
    CHECK(coordinate_domains(kAllCriteria[k]).size() == expected[k]);
  }
  const auto lasbd = coordinate_domains(Criterion::lasbd);
  CHECK(lasbd[0].name == "F2");
  CHECK(lasbd[0].domain == Domain::z_axis);
  const auto iasd = coordinate_domains(Criterion::iasd);
  CHECK(iasd[3].name == "S1-H1-centered");
  CHECK(iasd[3].domain == Domain::x1x2_quadrant);
  for (const CoordinateSpec& c : coordinate_domains(Criterion::kr_additive)) {
    CHECK(c.domain != Domain::xz_plane_negx);
    CHECK(c.domain != Domain::xz_plane_posx);
  }
}

TEST_CASE("field shapes and weights follow the grid") {
  const Pair p = random_pair(1, 100, 50);
  const EdfSummary ea(p.a, p.box);
  const EdfSummary eb(p.b, p.box);
  for (Criterion kind : kAllCriteria) {
    const auto fields = evaluate_g(kind, ea, eb, p.grid);
    const auto specs = coordinate_domains(kind);
    REQUIRE(fields.size() == specs.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const CoordinateField& f = fields[c];
      CHECK(f.name == specs[c].name);
      CHECK(f.values.size() == f.shape.size());
      CHECK(f.cell_weight > 0.0);
      for (double v : f.values) CHECK(std::isfinite(v));
      switch (f.domain) {
        case Domain::z_axis:
          CHECK(f.shape == Shape{50, 1});
          CHECK(f.cell_weight == p.grid.z_step);
          break;
        case Domain::neg_x_axis:
        case Domain::pos_x_axis:
          CHECK(f.shape == Shape{100, 1});
          CHECK(f.cell_weight == p.grid.m_step);
          break;
        case Domain::xz_plane_negx:
        case Domain::xz_plane_posx:
          CHECK(f.shape == Shape{99, 49});
          CHECK(f.cell_weight == p.grid.m_step * p.grid.z_step);
          break;
        case Domain::x1x2_quadrant:
          CHECK(f.shape == Shape{100, 100});
          CHECK(f.cell_weight == p.grid.m_step * p.grid.m_step);
          break;
      }
    }
  }
}

TEST_CASE("hand-evaluated LASBD level coordinate") {
  PolicySample a("A", {{-1, 1}, {-1, 1}});
  PolicySample b("B", {{1, 2}, {1, 2}});
  const SupportBox box = pooled_support(a, b);
  // z grid {1, 1.5, 2}
  const EvaluationGrid grid = build_grid(box, 3, 3);
  const auto fields = evaluate_g(Criterion::lasbd, EdfSummary(a, box), EdfSummary(b, box), grid);
  CHECK(grid.z_points[1] == 1.5);
  CHECK(fields[0].values[1] == 1.0);
  CHECK(fields[0].values[2] == 0.0);
}

TEST_CASE("kernel and reference evaluations agree") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Pair p = random_pair(seed);
    const EdfSummary ea(p.a, p.box);
    const EdfSummary eb(p.b, p.box);
    for (Criterion kind : kAllCriteria) {
      const auto fast = evaluate_g(kind, ea, eb, p.grid);
      const auto slow = evaluate_g_reference(kind, ea, eb, p.grid);
      REQUIRE(fast.size() == slow.size());
      for (std::size_t c = 0; c < fast.size(); ++c) {
        REQUIRE(fast[c].values.size() == slow[c].values.size());
        for (std::size_t q = 0; q < fast[c].values.size(); ++q) {
          CHECK(fast[c].values[q] ==
                doctest::Approx(slow[c].values[q]).epsilon(1e-10).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("coordinates match definitions evaluated from scratch") {
  const Pair p = random_pair(8, 9, 7);
  const EdfSummary ea(p.a, p.box);
  const EdfSummary eb(p.b, p.box);
  const auto A = p.a.observations();
  const auto B = p.b.observations();
  const double x0 = p.box.x_min;
  const double z0 = p.box.z_min;
  const auto& m = p.grid.x_pos_points;
  const auto& z = p.grid.z_points;
  const std::size_t cols = z.size() - 1;

  const auto lasbd2 = evaluate_g(Criterion::lasbd2, ea, eb, p.grid);
  const auto iasd2 = evaluate_g(Criterion::iasd2, ea, eb, p.grid);
  auto k = [](std::span<const Observation> s, double x, double zz) {
    return oracle::cdf1(s, x) + oracle::cdf2(s, zz) - oracle::joint(s, x, zz);
  };
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    for (std::size_t j = 0; j + 1 < z.size(); ++j) {
      CHECK(lasbd2[1].values[i * cols + j] ==
            doctest::Approx(k(A, -m[i], z[j]) - k(B, -m[i], z[j])).epsilon(1e-12).scale(1.0));
      CHECK(iasd2[2].values[i * cols + j] ==
            doctest::Approx(oracle::l_joint(A, x0, z0, m[i], z[j]) -
                            oracle::l_joint(B, x0, z0, m[i], z[j]))
                .epsilon(1e-10)
                .scale(1.0));
    }
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(lasbd2[4].values[i] ==
          doctest::Approx(oracle::cdf1(A, m[i]) + oracle::cdf1(A, -m[i]) - oracle::cdf1(B, m[i]) -
                          oracle::cdf1(B, -m[i])));
    for (std::size_t j = 0; j < m.size(); ++j) {
      const double want = (oracle::s1(A, m[i]) - oracle::h1(A, -m[j]) - oracle::s1(A, 0) +
                           oracle::h1(A, 0)) -
                          (oracle::s1(B, m[i]) - oracle::h1(B, -m[j]) - oracle::s1(B, 0) +
                           oracle::h1(B, 0));
      CHECK(iasd2[3].values[i * m.size() + j] == doctest::Approx(want).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("antisymmetry is exact and self-difference vanishes") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const Pair p = random_pair(seed);
    const EdfSummary ea(p.a, p.box);
    const EdfSummary eb(p.b, p.box);
    for (Criterion kind : kAllCriteria) {
      const auto ab = evaluate_g(kind, ea, eb, p.grid);
      const auto ba = evaluate_g(kind, eb, ea, p.grid);
      const auto aa = evaluate_g(kind, ea, ea, p.grid);
      for (std::size_t c = 0; c < ab.size(); ++c) {
        for (std::size_t q = 0; q < ab[c].values.size(); ++q) {
          CHECK(ab[c].values[q] == -ba[c].values[q]);
          CHECK(aa[c].values[q] == 0.0);
        }
      }
    }
  }
}

TEST_CASE("centred quadrant coordinate is zero at the origin") {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const Pair p = random_pair(seed);
    const EdfSummary ea(p.a, p.box);
    const EdfSummary eb(p.b, p.box);
    CHECK(evaluate_g(Criterion::iasd, ea, eb, p.grid)[3].values[0] == 0.0);
    CHECK(evaluate_g(Criterion::iasd2, ea, eb, p.grid)[3].values[0] == 0.0);
  }
}

TEST_CASE("loss-aversion pair is equivalent to the max form") {
  for (std::uint64_t seed = 30; seed < 40; ++seed) {
    const Pair p = random_pair(seed);
    const auto A = p.a.observations();
    const auto B = p.b.observations();
    const auto f = evaluate_g(Criterion::lasbd, EdfSummary(p.a, p.box), EdfSummary(p.b, p.box), p.grid);
    for (std::size_t i = 0; i < p.grid.gx(); ++i) {
      const double m = p.grid.x_pos_points[i];
      const bool max_form = oracle::cdf1(B, -m) - oracle::cdf1(A, -m) >=
                            std::max(0.0, oracle::cdf1(A, m) - oracle::cdf1(B, m));
      const bool pair_form = f[3].values[i] <= 0.0 && f[4].values[i] <= 0.0;
      CHECK(max_form == pair_form);
    }
  }
}

TEST_CASE("LIASD shares its coordinates with IASD and LASBD") {
  const Pair p = random_pair(50);
  const EdfSummary ea(p.a, p.box);
  const EdfSummary eb(p.b, p.box);
  const auto liasd = evaluate_g(Criterion::liasd, ea, eb, p.grid);
  const auto iasd = evaluate_g(Criterion::iasd, ea, eb, p.grid);
  const auto lasbd = evaluate_g(Criterion::lasbd, ea, eb, p.grid);
  const auto liasd2 = evaluate_g(Criterion::liasd2, ea, eb, p.grid);
  const auto iasd2 = evaluate_g(Criterion::iasd2, ea, eb, p.grid);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(liasd[c].values == iasd[c].values);
    CHECK(liasd2[c].values == iasd2[c].values);
  }
  CHECK(liasd[3].values == lasbd[3].values);
  CHECK(liasd[4].values == lasbd[4].values);
}

TEST_CASE("summaries built on a different box are refused") {
  const Pair p = random_pair(60);
  const EdfSummary ea(p.a.observations(), p.box.x_min - 1.0, p.box.z_min);
  const EdfSummary eb(p.b, p.box);
  CHECK_THROWS_AS(evaluate_g(Criterion::lasbd, ea, eb, p.grid), std::invalid_argument);
}
