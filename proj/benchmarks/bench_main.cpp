#include <benchmark/benchmark.h>

#include "rotstar/energy.hpp"
#include "rotstar/gravity.hpp"
#include "rotstar/solver.hpp"

namespace {

using namespace rotstar;

void BM_RingOperatorBuild(benchmark::State& state) {
  const auto grid = build_grid(1.5, 2.0, static_cast<std::size_t>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(GravityOperator::ring(grid));
}
BENCHMARK(BM_RingOperatorBuild)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_RingApply(benchmark::State& state) {
  const auto grid = build_grid(1.5, 2.0, static_cast<std::size_t>(state.range(0)), 16);
  const auto op = GravityOperator::ring(grid);
  const auto ball = DensityProfile::uniform_ball(grid, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(op.shell_potential(ball.values()));
}
BENCHMARK(BM_RingApply)->Arg(50)->Arg(100);

void BM_Fields(benchmark::State& state) {
  const auto grid = build_grid(1.0, 3.0, static_cast<std::size_t>(state.range(0)), 16);
  ModelSpec spec;
  spec.angmom = AngularMomentumProfile::power(0.05, 4.0 / 3.0);
  spec.entropy = EntropyProfile::linear(1.0 / 3.0);
  const EnergyModel model(spec, grid);
  const auto ball = DensityProfile::uniform_ball(grid, 1.2, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(model.fields(ball));
}
BENCHMARK(BM_Fields)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_SolveLaneEmden(benchmark::State& state) {
  const auto grid = build_grid(1.0, 3.0, static_cast<std::size_t>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(solve(ModelSpec{}, grid, SolverOptions{}));
}
BENCHMARK(BM_SolveLaneEmden)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SolveRotating(benchmark::State& state) {
  const auto grid = build_grid(1.0, 3.0, static_cast<std::size_t>(state.range(0)), 16);
  ModelSpec spec;
  spec.angmom = AngularMomentumProfile::power(0.05, 4.0 / 3.0);
  spec.entropy = EntropyProfile::linear(1.0 / 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec, grid, SolverOptions{}));
}
BENCHMARK(BM_SolveRotating)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
