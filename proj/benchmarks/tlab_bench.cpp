#include "tlab/altproj.hpp"
#include "tlab/estimators.hpp"
#include "tlab/scenario.hpp"
#include "tlab/set_oracle.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

using namespace tlab;

Vector point(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

void BM_ProjectBall(benchmark::State& state) {
  const auto ball = SetOracle::ball(point(0, 1), 1.0);
  const Vector x = point(0.3, -0.2);
  for (auto _ : state) benchmark::DoNotOptimize(project(ball, x));
}
BENCHMARK(BM_ProjectBall);

void BM_ProjectPolyhedron(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::vector<HalfSpace> faces;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * std::numbers::pi * i / n;
    faces.push_back({point(std::cos(t), std::sin(t)), 1.0});
  }
  const Vector x = point(3.0, 1.7);
  for (auto _ : state) benchmark::DoNotOptimize(project_polyhedron(faces, x));
}
BENCHMARK(BM_ProjectPolyhedron)->Arg(4)->Arg(16)->Arg(64);

void BM_IntersectionProbeTangential(benchmark::State& state) {
  const auto pair = catalog::tangential_ball_line();
  const Vector x = point(0.01, 0.002);
  for (auto _ : state) benchmark::DoNotOptimize(nearest_in_intersection(pair.set_a, pair.set_b, x));
}
BENCHMARK(BM_IntersectionProbeTangential);

void BM_IntersectionProbeHalfPlanes(benchmark::State& state) {
  const auto pair = catalog::half_planes(std::numbers::pi / 3);
  const Vector x = point(0.05, 0.08);
  for (auto _ : state) benchmark::DoNotOptimize(nearest_in_intersection(pair.set_a, pair.set_b, x));
}
BENCHMARK(BM_IntersectionProbeHalfPlanes);

void BM_Subtransversality(benchmark::State& state) {
  const auto pair = catalog::tangential_ball_line();
  EstimatorConfig config;
  config.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_subtransversality(pair, config));
}
BENCHMARK(BM_Subtransversality)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_EstimateAllTwoLines(benchmark::State& state) {
  const auto pair = catalog::two_lines(std::numbers::pi / 3);
  const EstimatorConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_all(pair, config));
}
BENCHMARK(BM_EstimateAllTwoLines)->Unit(benchmark::kMillisecond);

void BM_AlternatingProjections(benchmark::State& state) {
  const auto pair = catalog::two_lines(std::numbers::pi / 3);
  const Vector x0 = point(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(run_alternating_projections(pair, x0, 200, 1e-10));
}
BENCHMARK(BM_AlternatingProjections);

}  // namespace

BENCHMARK_MAIN();
