#include <benchmark/benchmark.h>

#include "hyplant/hydrogen.hpp"
#include "hyplant/random_stream.hpp"
#include "hyplant/turbine.hpp"
#include "hyplant/weather.hpp"

namespace {

using namespace hyplant;

void BM_WindStep(benchmark::State& state) {
  WindParams p;
  WindState s{10.0, 0.5};
  RandomStream rng(1);
  for (auto _ : state) {
    s = step_wind(s, p, 1.0, rng.wiener(1.0), rng.wiener(1.0));
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_WindStep);

void BM_CloudStep(benchmark::State& state) {
  CloudParams p;
  RandomStream rng(1);
  double kappa = 0.4;
  for (auto _ : state) {
    kappa = step_cloud(kappa, p, 600.0, rng.wiener(600.0));
    benchmark::DoNotOptimize(kappa);
  }
}
BENCHMARK(BM_CloudStep);

void BM_CpLookup(benchmark::State& state) {
  auto surface = CpSurface::default_surface();
  double lam = 1.0;
  for (auto _ : state) {
    lam += 0.37;
    if (lam > 29.0) lam -= 28.0;
    benchmark::DoNotOptimize(surface.lookup(lam, 3.0));
  }
}
BENCHMARK(BM_CpLookup);

void BM_OptimizeStationary(benchmark::State& state) {
  TurbineParams p;
  auto surface = CpSurface::default_surface();
  double v = 3.0;
  for (auto _ : state) {
    v += 1.7;
    if (v > 25.0) v -= 22.0;
    benchmark::DoNotOptimize(optimize_stationary(v, p, surface));
  }
}
BENCHMARK(BM_OptimizeStationary);

void BM_StackInversion(benchmark::State& state) {
  ElectrolyzerParams p;
  double target = 1e5;
  for (auto _ : state) {
    target += 3.3e5;
    if (target > 2.4e6) target -= 2.3e6;
    benchmark::DoNotOptimize(current_from_power(target, p));
  }
}
BENCHMARK(BM_StackInversion);

}  // namespace
