#include <benchmark/benchmark.h>

#include <random>

#include "divflow/fixtures.hpp"
#include "divflow/flow.hpp"
#include "divflow/obstacle.hpp"
#include "divflow/prox.hpp"
#include "divflow/tv1d.hpp"

using namespace divflow;

namespace {

FaceField noise(const GridPtr& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  FaceField u(g);
  for (int a = 0; a < g->dim(); ++a)
    for (double& x : u.component(a)) x = U(rng);
  return u;
}

}  // namespace

static void BM_Divergence2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto u = noise(Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {n, n}), 1);
  for (auto _ : state) benchmark::DoNotOptimize(divergence(u));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Divergence2D)->Arg(65)->Arg(129)->Arg(257);

static void BM_Gradient2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {n, n});
  NodeField w(g, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(w));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Gradient2D)->Arg(65)->Arg(129)->Arg(257);

static void BM_Psor1D(benchmark::State& state) {
  auto u0 = remark_u0(Grid::line(0.0, 1.0, static_cast<int>(state.range(0))));
  ObstacleProblem p{u0, 0.03};
  p.omega = state.range(1) ? p.u0.grid()->optimal_omega() : 0.0;
  long sweeps = 0;
  for (auto _ : state) sweeps = solve_psor(p).iterations;
  state.counters["sweeps"] = static_cast<double>(sweeps);
}
BENCHMARK(BM_Psor1D)->Args({1001, 0})->Args({1001, 1})->Unit(benchmark::kMillisecond);

static void BM_Psor2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = Grid::disk(1.0, n);
  ObstacleProblem p{lift_radial(radial_disk_datum(), g), 0.02};
  p.order = state.range(1) ? SweepOrder::RedBlack : SweepOrder::Lexicographic;
  p.threads = static_cast<int>(state.range(1));
  long sweeps = 0;
  for (auto _ : state) sweeps = solve_psor(p).iterations;
  state.counters["sweeps"] = static_cast<double>(sweeps);
}
BENCHMARK(BM_Psor2D)->Args({65, 0})->Args({129, 0})->Args({129, 4})->Unit(benchmark::kMillisecond);

static void BM_ProjectedGradient1D(benchmark::State& state) {
  ObstacleProblem p{remark_u0(Grid::line(0.0, 1.0, static_cast<int>(state.range(0)))), 0.03};
  for (auto _ : state) benchmark::DoNotOptimize(solve_projected_gradient(p));
}
BENCHMARK(BM_ProjectedGradient1D)->Arg(201)->Arg(1001)->Unit(benchmark::kMillisecond);

static void BM_Pdhg1D(benchmark::State& state) {
  auto u0 = noise(Grid::line(0.0, 1.0, 201), 3);
  for (auto _ : state) benchmark::DoNotOptimize(prox_pdhg(u0, 0.01));
}
BENCHMARK(BM_Pdhg1D)->Unit(benchmark::kMillisecond);

static void BM_TvFlowRoughPath(benchmark::State& state) {
  auto s = make_rough_path(static_cast<int>(state.range(0)), 1.0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(tv_flow(s, 1e-3));
}
BENCHMARK(BM_TvFlowRoughPath)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
