#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hyplant/config.hpp"
#include "hyplant/nlp.hpp"
#include "hyplant/ocp.hpp"
#include "hyplant/solar.hpp"
#include "hyplant/turbine.hpp"
#include "hyplant/weather.hpp"

namespace hyplant {

/// Full description of one simulation-and-dispatch experiment. Defaults
/// are the reference plant: one 5 MW turbine, 6 MW PV park, 5 MWh battery,
/// 50 MWh thermal store, 2.4 MW electrolyzer, 1000 kg hydrogen tank, 4 MW
/// constant demand over three days at 10-min sampling / 1-h control.
struct ScenarioConfig {
  // drivers
  WindParams wind;
  CloudParams cloud;
  double initial_mean_wind_ms = 10.0;
  double initial_cloud_cover = 0.3;
  SolarSite site;
  RadiationParams radiation;

  // production
  int turbine_count = 1;
  TurbineParams turbine;
  std::string cp_table_path;  // empty = shipped parametric surface
  PvParams pv;

  // plant and market
  PlantModel plant;
  OcpConfig ocp;
  PriceGenConfig prices;
  double demand_w = 4e6;
  std::array<double, 3> initial_state{9e9, 700.0, 49603.0};  // E_b (J), T (K), n_H2 (mol)

  // run control
  std::uint64_t seed = 42;
  NlpOptions solver;
  std::filesystem::path output_dir = "out";

  /// Reads every recognized key and rejects unknown ones.
  static ScenarioConfig from_config(Config& cfg);
  static ScenarioConfig from_file(const std::filesystem::path& path);

  void validate() const;
};

struct RunReport {
  double profit = 0.0;
  double electricity_sold_mwh = 0.0;
  double electricity_bought_mwh = 0.0;
  double heat_sold_mwh = 0.0;
  double hydrogen_sold_kg = 0.0;
  double unserved_energy_mwh = 0.0;     // integral of the coverage residual
  double max_coverage_residual_w = 0.0;
  std::size_t deficit_samples = 0;
  std::size_t saturated_samples = 0;
  double max_state_bound_violation = 0.0;
  // solver diagnostics
  bool solver_converged = false;
  double kkt_residual = 0.0;
  double constraint_violation = 0.0;
  int outer_iterations = 0;
  long inner_iterations = 0;
  std::vector<std::filesystem::path> manifest;

  void write_json(const std::filesystem::path& path) const;
};

/// Weather -> production -> disturbances -> OCP -> open-loop replay ->
/// CSV artifacts + report.json under cfg.output_dir.
RunReport run_scenario(const ScenarioConfig& cfg);

/// Standalone artifact commands backing the CLI.
std::filesystem::path cmd_weather(const ScenarioConfig& cfg);
std::filesystem::path cmd_power_curve(const ScenarioConfig& cfg);
std::filesystem::path cmd_electrolyzer_curve(const ScenarioConfig& cfg);

/// Per-sample total production: turbines on the simulated wind plus PV on
/// the simulated irradiance. Exposed for tests.
struct ProductionTrace {
  std::vector<double> total_w;
  IrradianceTrace irradiance;
};
ProductionTrace compute_production(const ScenarioConfig& cfg, const WeatherTrace& weather,
                                   const CpSurface& surface);

}  // namespace hyplant
