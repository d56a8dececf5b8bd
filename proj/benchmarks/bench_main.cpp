#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "annular/auditors.hpp"
#include "annular/geometry.hpp"
#include "annular/heatkernel.hpp"
#include "annular/radial.hpp"
#include "annular/specfun.hpp"
#include "annular/spectral2d.hpp"

using namespace annular;

static void BM_BesselJ(benchmark::State& state) {
  const specfun::BesselOrder nu(static_cast<double>(state.range(0)));
  double r = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::bessel_j(nu, r));
    r = r < 30.0 ? r + 0.1 : 0.5;
  }
}
BENCHMARK(BM_BesselJ)->Arg(1)->Arg(10)->Arg(100);

static void BM_FirstZero(benchmark::State& state) {
  const specfun::BesselOrder nu(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(specfun::first_positive_zero(nu));
}
BENCHMARK(BM_FirstZero)->Arg(2)->Arg(8)->Arg(64);

static void BM_SolveRadial(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(radial::solve_radial(2, 1.0, 2.0, 0.0, N, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveRadial)->RangeMultiplier(2)->Range(256, 8192)->Complexity();

static void BM_SolvePolarAnnulus(benchmark::State& state) {
  const auto nr = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(spectral2d::solve_polar(spectral2d::PolarDomain2D::annulus(1.0, 1.5), nr, 4 * nr, 1));
}
BENCHMARK(BM_SolvePolarAnnulus)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_SolveCartesianBox(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(spectral2d::solve_cartesian(spectral2d::CartesianDomain2D::box(-1, 1, -1, 1), h, 1));
}
BENCHMARK(BM_SolveCartesianBox)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_BallMeasure(benchmark::State& state) {
  const auto g = geometry::ProductGeometry::annulus(1.0, 1.1);
  const auto grid = geometry::MassGrid::resolving(g, geometry::WeightFunction::phi_squared(g), 0.01);
  double theta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid.ball_measure(1.05, theta, 0.03));
    theta = theta < 6.0 ? theta + 0.01 : 0.0;
  }
}
BENCHMARK(BM_BallMeasure);

static void BM_BuildNet(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  const auto g = geometry::ProductGeometry::annulus(1.0, 1.1);
  const auto grid = geometry::MassGrid::resolving(g, geometry::WeightFunction::phi_squared(g), eps);
  for (auto _ : state) benchmark::DoNotOptimize(geometry::build_net(grid, eps));
}
BENCHMARK(BM_BuildNet)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_KernelEval(benchmark::State& state) {
  const std::vector<double> hw{1.0, 0.7};
  const auto sp = heatkernel::box_spectrum(hw, 40);
  const double x[] = {0.1, 0.2}, y[] = {-0.3, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(heatkernel::kernel_eval(sp, 0.5, x, y));
}
BENCHMARK(BM_KernelEval);

static void BM_SectorCounterexample(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(auditors::sector_counterexample(0.2));
}
BENCHMARK(BM_SectorCounterexample)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
