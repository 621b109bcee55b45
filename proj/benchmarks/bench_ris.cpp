// Micro-benchmarks for the hot paths: grid minimization, full solves and the
// visco-energetic transition cost.

#include <benchmark/benchmark.h>

#include "ris/jump_cost.hpp"
#include "ris/minimize.hpp"
#include "ris/solvers.hpp"
#include "test_models.hpp"

namespace
{

using namespace ris;

void BM_MinimizeExhaustive(benchmark::State& state)
{
  const auto w = test::double_well();
  const GridSpace grid({{-2.0, 2.0}}, 4.0 / static_cast<double>(state.range(0)));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(minimize_exhaustive(*w, grid, 1.2, State(-1.0), Penalty::visco_energetic(10.0)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_MinimizeExhaustive)->RangeMultiplier(10)->Range(1000, 100000);

void BM_TrackerStep(benchmark::State& state)
{
  const auto w = test::double_well();
  const GridSpace grid({{-2.0, 2.0}}, 1e-4);
  LandscapeTracker tracker(*w, grid);
  State c(-1.0);
  double t = 0.0;
  for (auto _ : state)
  {
    t = t >= 2.0 ? 0.0 : t + 1e-3;
    c = tracker.minimize(t, t == 0.0 ? State(-1.0) : c, Penalty::visco_energetic(10.0)).state;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_TrackerStep);

void BM_SolveDoubleWell(benchmark::State& state)
{
  const auto w = test::double_well();
  const GridSpace grid({{-2.0, 2.0}}, 1e-3);
  const auto partition = TimePartition::uniform(2.0, 1e-3);
  const Scheme scheme = state.range(0) == 0 ? Scheme::energetic() : Scheme::visco_energetic(10.0);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(solve(*w, grid, scheme, partition, State(-1.0)));
  }
}
BENCHMARK(BM_SolveDoubleWell)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_VeCost(benchmark::State& state)
{
  const auto w = test::double_well();
  const GridSpace grid({{-2.0, 2.0}}, 4.0 / static_cast<double>(state.range(0)));
  const State a = grid.point(grid.nearest(State(-0.5)));
  const State b = grid.point(grid.nearest(State(1.1)));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ve_cost(*w, grid, 1.45, a, b, 100.0));
  }
}
BENCHMARK(BM_VeCost)->Arg(400)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_ViscousCost(benchmark::State& state)
{
  const auto w = test::double_well();
  const GridSpace grid({{-2.0, 2.0}}, 1e-3);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(viscous_cost(*w, grid, 1.4, State(-0.6), State(1.1)));
  }
}
BENCHMARK(BM_ViscousCost)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
