#include <benchmark/benchmark.h>

#include <cmath>

#include "spin7lab/bubble.hpp"
#include "spin7lab/energy.hpp"
#include "spin7lab/instanton.hpp"
#include "spin7lab/metric.hpp"

namespace {

using namespace spin7lab;

void BM_IntegrateBackground(benchmark::State& state) {
  const MetricBackground bg(1.0);
  const double r_max = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bg.integrate(r_max));
  }
}
BENCHMARK(BM_IntegrateBackground)->Arg(1)->Arg(8);

void BM_RofNu(benchmark::State& state) {
  const MetricBackground bg(1.0);
  double nu = 1.0 + 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bg.r_of_nu(nu));
    nu = nu < 100.0 ? nu * 1.5 : 1.0 + 1e-6;
  }
}
BENCHMARK(BM_RofNu);

void BM_NuOfR(benchmark::State& state) {
  const MetricBackground bg(1.0);
  double r = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bg.nu_of_r(r));
    r = r < 50.0 ? r * 1.7 : 1e-3;
  }
}
BENCHMARK(BM_NuOfR);

void BM_ProfileEvaluation(benchmark::State& state) {
  const MetricBackground bg(1.0);
  const InstantonProfile p = InstantonProfile::finite(bg, 1.0);
  double nu = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.x_of_nu(nu));
    benchmark::DoNotOptimize(p.dx_dnu(nu));
    nu = nu < 1e4 ? nu * 1.1 : 1.0;
  }
}
BENCHMARK(BM_ProfileEvaluation);

void BM_EnergyDifferenceDensity(benchmark::State& state) {
  const MetricBackground bg(1.0);
  double nu = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy_difference_density(1e3, bg, nu));
    nu = nu < 1e3 ? nu * 1.2 : 1.0;
  }
}
BENCHMARK(BM_EnergyDifferenceDensity);

void BM_RegionEnergy(benchmark::State& state) {
  const MetricBackground bg(1.0);
  const double y0 = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(region_energy_difference(y0, bg, {1.0, 4.0}));
  }
}
BENCHMARK(BM_RegionEnergy)->Arg(100)->Arg(100000);

void BM_BubbleDistance(benchmark::State& state) {
  const MetricBackground bg(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bubble_distance(BubbleParams::make(1.0, 1e4), bg,
                                             static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_BubbleDistance)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
