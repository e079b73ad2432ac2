#include <benchmark/benchmark.h>

#include "hyplant/ocp.hpp"

namespace {

using namespace hyplant;

TranscribedOcp day_instance(std::size_t hours, DisturbanceTrajectory& d_out) {
  PlantModel model;
  model.thermal.ambient_k = 288.0;
  OcpConfig cfg;
  cfg.tf_s = 3600.0 * static_cast<double>(hours);

  std::size_t samples = hours * 6;
  DisturbanceTrajectory d;
  d.surplus_w.assign(samples, 0.0);
  d.deficit_w.assign(samples, 0.0);
  for (std::size_t k = 0; k < samples; ++k) {
    bool surplus_hour = (k / 6) % 2 == 0;
    d.surplus_w[k] = surplus_hour ? 2e6 : 0.0;
    d.deficit_w[k] = surplus_hour ? 0.0 : 1.5e6;
  }
  d.price_electricity_per_j.assign(samples, 50.0 / 3.6e9);
  d.price_heat_per_j.assign(samples, 20.0 / 3.6e9);
  d.price_hydrogen_per_kg.assign(samples, 4.0);
  d_out = d;
  return transcribe(model, cfg, d, {9e9, 700.0, 49603.0});
}

void BM_TranscribeDay(benchmark::State& state) {
  DisturbanceTrajectory d;
  for (auto _ : state) {
    benchmark::DoNotOptimize(day_instance(24, d));
  }
}
BENCHMARK(BM_TranscribeDay);

void BM_ConstraintEval(benchmark::State& state) {
  DisturbanceTrajectory d;
  auto ocp = day_instance(24, d);
  std::vector<double> c(ocp.problem.num_constraints);
  for (auto _ : state) {
    ocp.problem.constraints(ocp.problem.initial, c);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_ConstraintEval);

void BM_SolveSixHours(benchmark::State& state) {
  DisturbanceTrajectory d;
  auto ocp = day_instance(6, d);
  PlantModel model;
  model.thermal.ambient_k = 288.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ocp(ocp, d, model, {}));
  }
}
BENCHMARK(BM_SolveSixHours)->Unit(benchmark::kMillisecond);

}  // namespace
