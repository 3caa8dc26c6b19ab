#include <benchmark/benchmark.h>

#include <numbers>

#include "polygal/optimize.hpp"

using namespace polygal;

namespace {

NormalSystem regular(int n) {
  Matrix m(n, 2);
  for (int i = 0; i < n; ++i) {
    const double t = 2 * std::numbers::pi * i / n;
    m.row(i) << std::cos(t), std::sin(t);
  }
  return validate_normals(m);
}

Vector ball_coords(int n) { return Vector::Ones(n); }

}  // namespace

static void BM_CompileCone(benchmark::State& state) {
  const auto ns = regular(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compile_cone(ns));
}
BENCHMARK(BM_CompileCone)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_CompileConeSpatial(benchmark::State& state) {
  const auto ns = spherical_grid_normals(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(compile_cone(ns));
}
BENCHMARK(BM_CompileConeSpatial)->Unit(benchmark::kMillisecond);

static void BM_Realize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto cone = compile_cone(regular(n));
  const Vector b = ball_coords(n);
  for (auto _ : state) benchmark::DoNotOptimize(realize(b, cone));
}
BENCHMARK(BM_Realize)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_SolveLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto ns = regular(n);
  Vector c(2);
  c << 0.3, 0.7;
  const LinearProgram lp{c, ns.rows, ball_coords(n)};
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp));
}
BENCHMARK(BM_SolveLp)->Arg(16)->Arg(128)->Unit(benchmark::kMicrosecond);

static void BM_EstimateKappa(benchmark::State& state) {
  const auto ns = regular(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_kappa(ns, 720));
}
BENCHMARK(BM_EstimateKappa)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_SolveLevelIsoperimetric(benchmark::State& state) {
  GalerkinProblem pb;
  pb.sequence = spherical_sequence(2, {static_cast<int>(state.range(0))});
  pb.objective = ObjectiveSpec::neg_volume();
  pb.constraints = {ConstraintSpec::perimeter_le(2 * std::numbers::pi)};
  pb.inner_body = Body::point_hull(Matrix::Zero(1, 2));
  Vector center = Vector::Zero(2);
  pb.outer_body = Body::ball(center, 2.0);
  pb.shift = ConstraintShift::None;
  for (auto _ : state) benchmark::DoNotOptimize(solve_level(pb, 0));
}
BENCHMARK(BM_SolveLevelIsoperimetric)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
