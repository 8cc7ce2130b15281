#include "domtest/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "domtest/grid_kernel.hpp"
#include "domtest/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace domtest {

StatisticValue statistic(std::span<const CoordinateField> fields) {
  StatisticValue out;
  double total = 0.0;
  for (const CoordinateField& f : fields) {
    double acc = 0.0;
    for (double v : f.values) {
      if (v > 0.0) acc += v * v;
    }
    acc *= f.cell_weight;
    out.per_coordinate.emplace_back(f.name, acc);
    total += acc;
  }
  out.t = std::sqrt(total);
  return out;
}

ContactMask contact_set(std::span<const CoordinateField> fields, std::size_t n,
                        const ContactRule& rule) {
  ContactMask mask;
  mask.c_n = rule.threshold(n);
  std::size_t active = 0;
  std::size_t total = 0;
  mask.active.reserve(fields.size());
  for (const CoordinateField& f : fields) {
    std::vector<std::uint8_t> m(f.values.size());
    for (std::size_t p = 0; p < f.values.size(); ++p) {
      m[p] = std::abs(f.values[p]) <= mask.c_n ? 1 : 0;
      active += m[p];
    }
    total += f.values.size();
    mask.active.push_back(std::move(m));
  }
  mask.fraction_active = total == 0 ? 0.0 : static_cast<double>(active) / static_cast<double>(total);
  return mask;
}

double masked_statistic(std::span<const CoordinateField> g_star,
                        std::span<const CoordinateField> g_hat, const ContactMask& mask) {
  double total = 0.0;
  for (std::size_t c = 0; c < g_star.size(); ++c) {
    const std::vector<double>& star = g_star[c].values;
    const std::vector<double>& hat = g_hat[c].values;
    const std::vector<std::uint8_t>& act = mask.active[c];
    double acc = 0.0;
    for (std::size_t p = 0; p < star.size(); ++p) {
      const double d = star[p] - hat[p];
      if (act[p] && d > 0.0) acc += d * d;
    }
    total += acc * g_star[c].cell_weight;
  }
  return std::sqrt(total);
}

double bootstrap_p_value(std::span<const double> t_star, double t_n, double eta) {
  if (t_star.empty()) throw std::invalid_argument("bootstrap reference distribution is empty");
  std::size_t exceed = 0;
  for (double t : t_star) exceed += (t + eta > t_n) ? 1 : 0;
  return static_cast<double>(exceed) / static_cast<double>(t_star.size());
}

double sorted_quantile(std::span<const double> ascending, double prob) {
  if (ascending.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double h = (static_cast<double>(ascending.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, ascending.size() - 1);
  return ascending[lo] + (h - static_cast<double>(lo)) * (ascending[hi] - ascending[lo]);
}

std::vector<TestResult> bootstrap_tests(const EdfSummary& a, const EdfSummary& b,
                                        std::span<const Criterion> kinds,
                                        const EvaluationGrid& grid, const RunConfig& cfg,
                                        Direction direction) {
  cfg.validate();
  const bool forward = direction == Direction::a_over_b;
  const std::size_t n_a = a.size();
  const std::size_t n_b = b.size();
  const std::size_t n = n_a + n_b;
  const std::size_t n_kinds = kinds.size();
  const std::size_t reps = cfg.replicates;

  const GridBinner bin_a(grid, a.pairs());
  const GridBinner bin_b(grid, b.pairs());

  // point estimates
  KernelScratch scratch;
  GridTables tab_a;
  GridTables tab_b;
  bin_a.tabulate_all(tab_a, scratch);
  bin_b.tabulate_all(tab_b, scratch);

  std::vector<std::vector<CoordinateField>> g_hat(n_kinds);
  std::vector<ContactMask> masks(n_kinds);
  std::vector<TestResult> results(n_kinds);
  for (std::size_t k = 0; k < n_kinds; ++k) {
    if (forward) {
      fill_fields(kinds[k], tab_a, tab_b, grid, g_hat[k]);
    } else {
      fill_fields(kinds[k], tab_b, tab_a, grid, g_hat[k]);
    }
    masks[k] = contact_set(g_hat[k], n, cfg.contact_rule);
    const StatisticValue stat = statistic(g_hat[k]);

    TestResult& r = results[k];
    r.criterion = kinds[k];
    r.direction = direction;
    r.n_a = n_a;
    r.n_b = n_b;
    r.n = n;
    r.t_n = stat.t;
    r.sqrt_n_t_n = std::sqrt(static_cast<double>(n)) * stat.t;
    r.per_coordinate = stat.per_coordinate;
    r.alpha = cfg.alpha;
    r.replicates = reps;
    r.seed = cfg.seed;
    r.c_n = masks[k].c_n;
    r.eta = cfg.eta;
    r.contact_fraction = masks[k].fraction_active;
  }

  // t_star[k * reps + r]
  std::vector<double> t_star(n_kinds * reps, 0.0);
  int threads = cfg.threads;
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#else
  threads = 1;
#endif

#pragma omp parallel num_threads(threads)
  {
    KernelScratch local_scratch;
    GridTables star_a;
    GridTables star_b;
    std::vector<std::uint32_t> idx_a(n_a);
    std::vector<std::uint32_t> idx_b(n_b);
    std::vector<CoordinateField> g_star;
    std::uniform_int_distribution<std::uint32_t> pick_a(0, static_cast<std::uint32_t>(n_a - 1));
    std::uniform_int_distribution<std::uint32_t> pick_b(0, static_cast<std::uint32_t>(n_b - 1));

#pragma omp for schedule(dynamic, 4)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(reps); ++r) {
      auto engine = substream_engine(cfg.seed, direction_tag(direction),
                                     static_cast<std::uint64_t>(r));
      pick_a.reset();
      pick_b.reset();
      for (auto& i : idx_a) i = pick_a(engine);
      for (auto& i : idx_b) i = pick_b(engine);
      bin_a.tabulate(idx_a, star_a, local_scratch);
      bin_b.tabulate(idx_b, star_b, local_scratch);
      for (std::size_t k = 0; k < n_kinds; ++k) {
        if (forward) {
          fill_fields(kinds[k], star_a, star_b, grid, g_star);
        } else {
          fill_fields(kinds[k], star_b, star_a, grid, g_star);
        }
        t_star[k * reps + static_cast<std::size_t>(r)] = masked_statistic(g_star, g_hat[k], masks[k]);
      }
    }
  }

  for (std::size_t k = 0; k < n_kinds; ++k) {
    std::span<double> ref(t_star.data() + k * reps, reps);
    TestResult& r = results[k];
    r.p_value = bootstrap_p_value(ref, r.t_n, cfg.eta);
    r.rejected = rejects(r.p_value, cfg.alpha);
    std::sort(ref.begin(), ref.end());
    r.q90 = sorted_quantile(ref, 0.90);
    r.q95 = sorted_quantile(ref, 0.95);
    r.q99 = sorted_quantile(ref, 0.99);
  }
  return results;
}

TestResult bootstrap_pvalue(const EdfSummary& a, const EdfSummary& b, Criterion kind,
                            const EvaluationGrid& grid, const RunConfig& cfg,
                            Direction direction) {
  const Criterion kinds[] = {kind};
  return bootstrap_tests(a, b, kinds, grid, cfg, direction).front();
}

namespace {

std::vector<Direction> expand(DirectionSet set) {
  switch (set) {
    case DirectionSet::a_over_b: return {Direction::a_over_b};
    case DirectionSet::b_over_a: return {Direction::b_over_a};
    case DirectionSet::both: return {Direction::a_over_b, Direction::b_over_a};
  }
  return {};
}

}  // namespace

std::vector<TestResult> run_test(const PolicySample& a, const PolicySample& b, Criterion kind,
                                 DirectionSet directions, const RunConfig& cfg) {
  RunConfig single = cfg;
  single.criteria = {kind};
  single.direction = directions;
  return run_tests(a, b, single);
}

std::vector<TestResult> run_tests(const PolicySample& a, const PolicySample& b,
                                  const RunConfig& cfg) {
  cfg.validate();
  const SupportBox box = pooled_support(a, b);
  const EvaluationGrid grid = build_grid(box, cfg.grid_x, cfg.grid_z);
  const EdfSummary edf_a(a, box);
  const EdfSummary edf_b(b, box);

  const std::vector<Direction> dirs = expand(cfg.direction);
  std::vector<std::vector<TestResult>> per_direction;
  for (Direction d : dirs) {
    per_direction.push_back(bootstrap_tests(edf_a, edf_b, cfg.criteria, grid, cfg, d));
  }
  std::vector<TestResult> out;
  out.reserve(cfg.criteria.size() * dirs.size());
  for (std::size_t k = 0; k < cfg.criteria.size(); ++k) {
    for (auto& results : per_direction) out.push_back(results[k]);
  }
  return out;
}

}  // namespace domtest
