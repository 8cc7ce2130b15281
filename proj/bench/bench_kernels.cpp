// Serial pointwise reference against the binned grid kernel, and the
// bootstrap loop at several worker counts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "domtest/criteria.hpp"
#include "domtest/grid_kernel.hpp"
#include "domtest/inference.hpp"

using namespace domtest;

namespace {

struct Setup {
  PolicySample a;
  PolicySample b;
  SupportBox box;
  EvaluationGrid grid;
};

Setup make_setup(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  auto draw = [&](double shift) {
    std::vector<Observation> v(n);
    for (auto& o : v) {
      const double u = nd(rng);
      o = {u + shift, 7.0 + 0.3 * u + 0.95 * nd(rng)};
    }
    return v;
  };
  PolicySample a("A", draw(0.0));
  PolicySample b("B", draw(0.2));
  const SupportBox box = pooled_support(a, b);
  EvaluationGrid grid = build_grid(box, 100, 50);
  return {std::move(a), std::move(b), box, std::move(grid)};
}

void BM_TabulateReference(benchmark::State& state) {
  const Setup s = make_setup(static_cast<std::size_t>(state.range(0)));
  const EdfSummary edf(s.a, s.box);
  for (auto _ : state) benchmark::DoNotOptimize(tabulate_reference(edf, s.grid));
}

void BM_TabulateKernel(benchmark::State& state) {
  const Setup s = make_setup(static_cast<std::size_t>(state.range(0)));
  const GridBinner binner(s.grid, s.a.observations());
  GridTables out;
  KernelScratch scratch;
  for (auto _ : state) {
    binner.tabulate_all(out, scratch);
    benchmark::DoNotOptimize(out.l_pos.data());
  }
}

void BM_Bootstrap(benchmark::State& state) {
  const Setup s = make_setup(2400);
  RunConfig cfg;
  cfg.replicates = 199;
  cfg.threads = static_cast<int>(state.range(0));
  cfg.direction = DirectionSet::b_over_a;
  for (auto _ : state) benchmark::DoNotOptimize(run_tests(s.a, s.b, cfg));
  state.counters["replicates/s"] =
      benchmark::Counter(static_cast<double>(cfg.replicates) * static_cast<double>(state.iterations()),
                         benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK(BM_TabulateReference)->Arg(200)->Arg(2400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TabulateKernel)->Arg(200)->Arg(2400)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Bootstrap)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
