#include "hyplant/scenario.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hyplant/csv.hpp"
#include "hyplant/hydrogen.hpp"
#include "hyplant/random_stream.hpp"

namespace hyplant {

namespace {

constexpr double kJoulePerMwh = 3.6e9;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

/// Stage-labeled rethrow so a failed run names the phase that broke.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(name) + ": " + e.what());
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  wind.validate();
  cloud.validate();
  site.validate();
  radiation.validate();
  turbine.validate();
  pv.validate();
  plant.validate();
  ocp.validate();
  if (turbine_count < 0) throw std::invalid_argument("turbine count must be >= 0");
  if (!(demand_w >= 0.0)) throw std::invalid_argument("demand must be >= 0");
}

ScenarioConfig ScenarioConfig::from_file(const std::filesystem::path& path) {
  Config cfg = Config::parse_file(path);
  return from_config(cfg);
}

ScenarioConfig ScenarioConfig::from_config(Config& cfg) {
  ScenarioConfig sc;

  sc.wind.turbulence_length_m = cfg.get_double("wind.turbulence_length_m", sc.wind.turbulence_length_m);
  sc.wind.turbulence_intensity = cfg.get_double("wind.turbulence_intensity", sc.wind.turbulence_intensity);
  sc.wind.mean_diffusion = cfg.get_double("wind.mean_diffusion", sc.wind.mean_diffusion);
  if (auto v = cfg.get_optional_double("wind.fixed_mean_speed_ms")) sc.wind.fixed_mean_speed = v;
  sc.initial_mean_wind_ms = cfg.get_double("wind.initial_mean_speed_ms", sc.initial_mean_wind_ms);

  sc.cloud.reversion_rate = cfg.get_double("cloud.reversion_rate_per_h", sc.cloud.reversion_rate);
  sc.cloud.diffusion = cfg.get_double("cloud.diffusion_per_sqrt_h", sc.cloud.diffusion);
  if (cfg.has("cloud.legendre_coeffs")) {
    auto coeffs = cfg.get_double_list("cloud.legendre_coeffs");
    if (coeffs.size() != 7) throw std::runtime_error("cloud.legendre_coeffs needs 7 values");
    std::copy(coeffs.begin(), coeffs.end(), sc.cloud.legendre_coeffs.begin());
  }
  if (auto v = cfg.get_optional_double("cloud.fixed_mean")) sc.cloud.fixed_mean = v;
  sc.initial_cloud_cover = cfg.get_double("cloud.initial_cover", sc.initial_cloud_cover);

  sc.site.latitude_rad = cfg.get_double("site.latitude_deg", sc.site.latitude_rad / kDegToRad) * kDegToRad;
  sc.site.longitude_rad = cfg.get_double("site.longitude_deg", sc.site.longitude_rad / kDegToRad) * kDegToRad;
  sc.site.day_of_year = static_cast<int>(cfg.get_int("site.day_of_year", sc.site.day_of_year));
  sc.site.utc_offset_h = cfg.get_double("site.utc_offset_h", sc.site.utc_offset_h);

  auto rad = [&](const char* key, double fallback) {
    return cfg.get_double(std::string("solar.") + key, fallback);
  };
  auto& rp = sc.radiation;
  rp.direct_clear_a = rad("direct_clear_a", rp.direct_clear_a);
  rp.direct_clear_b = rad("direct_clear_b_per_deg", rp.direct_clear_b);
  rp.direct_noise_gain = rad("direct_noise_gain", rp.direct_noise_gain);
  rp.direct_logistic_center = rad("direct_logistic_center_okta", rp.direct_logistic_center);
  rp.direct_season_base = rad("direct_season_base", rp.direct_season_base);
  rp.direct_season_amp = rad("direct_season_amp", rp.direct_season_amp);
  rp.direct_season_phase = rad("direct_season_phase", rp.direct_season_phase);
  rp.diffuse_clear_a = rad("diffuse_clear_a", rp.diffuse_clear_a);
  rp.diffuse_clear_b = rad("diffuse_clear_b_per_deg", rp.diffuse_clear_b);
  rp.diffuse_clear_c = rad("diffuse_clear_c", rp.diffuse_clear_c);
  rp.diffuse_a0_base = rad("diffuse_a0_base", rp.diffuse_a0_base);
  rp.diffuse_a0_amp = rad("diffuse_a0_amp", rp.diffuse_a0_amp);
  rp.diffuse_a0_phase = rad("diffuse_a0_phase", rp.diffuse_a0_phase);
  rp.diffuse_a1_base = rad("diffuse_a1_base", rp.diffuse_a1_base);
  rp.diffuse_a1_amp = rad("diffuse_a1_amp", rp.diffuse_a1_amp);
  rp.diffuse_a1_phase = rad("diffuse_a1_phase", rp.diffuse_a1_phase);
  rp.diffuse_a2 = rad("diffuse_a2", rp.diffuse_a2);
  rp.diffuse_shape = rad("diffuse_shape", rp.diffuse_shape);
  rp.diffuse_noise_gain = rad("diffuse_noise_gain", rp.diffuse_noise_gain);
  rp.min_elevation_rad = rad("min_elevation_deg", rp.min_elevation_rad / kDegToRad) * kDegToRad;
  auto load_var_table = [&](const char* key, std::array<double, 9>& table) {
    if (!cfg.has(key)) return;
    auto vals = cfg.get_double_list(key);
    if (vals.size() == 1) {
      table.fill(vals[0]);
    } else if (vals.size() == 9) {
      std::copy(vals.begin(), vals.end(), table.begin());
    } else {
      throw std::runtime_error(std::string(key) + " needs 1 or 9 values");
    }
  };
  load_var_table("solar.direct_noise_var_by_okta", rp.direct_noise_var_by_okta);
  load_var_table("solar.diffuse_noise_var_by_okta", rp.diffuse_noise_var_by_okta);

  sc.turbine_count = static_cast<int>(cfg.get_int("turbine.count", sc.turbine_count));
  auto& tb = sc.turbine;
  tb.air_density = cfg.get_double("turbine.air_density", tb.air_density);
  tb.rotor_radius_m = cfg.get_double("turbine.rotor_radius_m", tb.rotor_radius_m);
  tb.generator_efficiency = cfg.get_double("turbine.generator_efficiency", tb.generator_efficiency);
  tb.cut_in_ms = cfg.get_double("turbine.cut_in_ms", tb.cut_in_ms);
  tb.rated_ms = cfg.get_double("turbine.rated_ms", tb.rated_ms);
  tb.cut_out_ms = cfg.get_double("turbine.cut_out_ms", tb.cut_out_ms);
  tb.rotor_speed_min_rad_s = rpm_to_rad_s(cfg.get_double("turbine.rotor_speed_min_rpm", 6.9));
  tb.rotor_speed_max_rad_s = rpm_to_rad_s(cfg.get_double("turbine.rotor_speed_max_rpm", 12.1));
  tb.pitch_min_deg = cfg.get_double("turbine.pitch_min_deg", tb.pitch_min_deg);
  tb.pitch_max_deg = cfg.get_double("turbine.pitch_max_deg", tb.pitch_max_deg);
  tb.rated_power_w = cfg.get_double("turbine.rated_power_w", tb.rated_power_w);
  sc.cp_table_path = cfg.get_string("turbine.cp_table_csv", sc.cp_table_path);

  sc.pv.area_m2 = cfg.get_double("pv.area_m2", sc.pv.area_m2);
  sc.pv.efficiency = cfg.get_double("pv.efficiency", sc.pv.efficiency);

  auto& bat = sc.plant.battery;
  bat.self_discharge_per_s = cfg.get_double("battery.self_discharge_per_s", bat.self_discharge_per_s);
  bat.charge_efficiency = cfg.get_double("battery.charge_efficiency", bat.charge_efficiency);
  bat.discharge_efficiency = cfg.get_double("battery.discharge_efficiency", bat.discharge_efficiency);
  bat.energy_min_j = cfg.get_double("battery.energy_min_j", bat.energy_min_j);
  bat.energy_max_j = cfg.get_double("battery.energy_max_j", bat.energy_max_j);

  auto& th = sc.plant.thermal;
  th.mass_kg = cfg.get_double("thermal.mass_kg", th.mass_kg);
  th.cp_const = cfg.get_double("thermal.cp_const", th.cp_const);
  th.cp_slope = cfg.get_double("thermal.cp_slope", th.cp_slope);
  th.heat_loss_w_per_k = cfg.get_double("thermal.heat_loss_w_per_k", th.heat_loss_w_per_k);
  th.charge_efficiency = cfg.get_double("thermal.charge_efficiency", th.charge_efficiency);
  th.temp_min_k = cfg.get_double("thermal.temp_min_k", th.temp_min_k);
  th.temp_max_k = cfg.get_double("thermal.temp_max_k", th.temp_max_k);
  th.ambient_k = cfg.get_double("thermal.ambient_k", th.ambient_k);

  auto& el = sc.plant.electrolyzer;
  el.ohmic_r1 = cfg.get_double("electrolyzer.r1_ohm_cm2", el.ohmic_r1);
  el.ohmic_r2 = cfg.get_double("electrolyzer.r2_ohm_cm2_per_c", el.ohmic_r2);
  el.activation_s = cfg.get_double("electrolyzer.s_v", el.activation_s);
  el.activation_t1 = cfg.get_double("electrolyzer.t1_cm2_per_a", el.activation_t1);
  el.activation_t2 = cfg.get_double("electrolyzer.t2_cm2_c_per_a", el.activation_t2);
  el.activation_t3 = cfg.get_double("electrolyzer.t3_cm2_c2_per_a", el.activation_t3);
  el.faraday_f1 = cfg.get_double("electrolyzer.f1_ma2_cm4", el.faraday_f1);
  el.faraday_f2 = cfg.get_double("electrolyzer.f2", el.faraday_f2);
  el.cell_area_cm2 = cfg.get_double("electrolyzer.cell_area_cm2", el.cell_area_cm2);
  el.cells_in_series = static_cast<int>(cfg.get_int("electrolyzer.cells_in_series", el.cells_in_series));
  el.temperature_c = cfg.get_double("electrolyzer.temperature_c", el.temperature_c);
  el.rated_power_w = cfg.get_double("electrolyzer.rated_power_w", el.rated_power_w);
  el.thermo.enthalpy_j_mol = cfg.get_double("electrolyzer.enthalpy_j_mol", el.thermo.enthalpy_j_mol);
  el.thermo.gibbs_j_mol = cfg.get_double("electrolyzer.gibbs_j_mol", el.thermo.gibbs_j_mol);

  auto& tank = sc.plant.tank;
  tank.volume_m3 = cfg.get_double("tank.volume_m3", tank.volume_m3);
  tank.temperature_k = cfg.get_double("tank.temperature_k", tank.temperature_k);
  tank.capacity_mol = cfg.get_double("tank.capacity_mol", tank.capacity_mol);
  tank.critical.temp_k = cfg.get_double("tank.critical_temp_k", tank.critical.temp_k);
  tank.critical.pressure_pa = cfg.get_double("tank.critical_pressure_pa", tank.critical.pressure_pa);
  tank.critical.acentric = cfg.get_double("tank.acentric_factor", tank.critical.acentric);

  auto& fc = sc.plant.fuel_cell;
  fc.efficiency = cfg.get_double("fuel_cell.efficiency", fc.efficiency);
  fc.molar_mass_kg_mol = cfg.get_double("fuel_cell.molar_mass_kg_mol", fc.molar_mass_kg_mol);
  fc.heating_value_j_kg = cfg.get_double("fuel_cell.heating_value_j_kg", fc.heating_value_j_kg);
  sc.plant.steam_efficiency = cfg.get_double("steam_turbine.efficiency", sc.plant.steam_efficiency);

  auto& ocp = sc.ocp;
  ocp.t0_s = cfg.get_double("ocp.t0_s", ocp.t0_s);
  ocp.tf_s = cfg.get_double("ocp.horizon_s", ocp.tf_s - ocp.t0_s) + ocp.t0_s;
  ocp.dt_sample_s = cfg.get_double("ocp.dt_sample_s", ocp.dt_sample_s);
  ocp.dt_control_s = cfg.get_double("ocp.dt_control_s", ocp.dt_control_s);
  ocp.state_min = {bat.energy_min_j, th.temp_min_k, 0.0};
  ocp.state_max = {bat.energy_max_j, th.temp_max_k, tank.capacity_mol};
  ocp.control_max[kPowerToBattery] = cfg.get_double("limits.battery_charge_w", 5e6);
  ocp.control_max[kPowerToThermal] = cfg.get_double("limits.thermal_charge_w", 12e6);
  ocp.control_max[kPowerToElectrolyzer] = el.rated_power_w;
  ocp.control_max[kBatterySell] = cfg.get_double("limits.battery_sell_w", 5e6);
  ocp.control_max[kBatteryBuy] = cfg.get_double("limits.grid_import_w", 2e6);
  ocp.control_max[kHeatSell] = cfg.get_double("limits.heat_sell_w", 12e6);
  ocp.control_max[kHydrogenSell] = cfg.get_double("limits.hydrogen_sell_mol_s", 20.0);
  ocp.control_max[kStackCurrent] = current_from_power(el.rated_power_w, el);
  ocp.control_max[kBatteryToDemand] = cfg.get_double("limits.battery_to_demand_w", 5e6);
  ocp.control_max[kThermalToDemand] = cfg.get_double("limits.thermal_to_demand_w", 5e6);
  ocp.control_max[kHydrogenToFuelCell] = cfg.get_double("limits.fuel_cell_mol_s", 30.0);
  ocp.control_max[kDemandSlack] = cfg.get_double("limits.slack_w", 2e7);
  ocp.slack_penalty_per_j = cfg.get_double("ocp.slack_penalty_per_j", ocp.slack_penalty_per_j);
  if (cfg.has("ocp.terminal_value_per_mwh")) {
    auto v = cfg.get_double_list("ocp.terminal_value_per_mwh");
    if (v.size() != 3) throw std::runtime_error("ocp.terminal_value_per_mwh needs 3 values");
    ocp.terminal_value_per_j = {v[0] / kJoulePerMwh, v[1] / kJoulePerMwh, v[2] / kJoulePerMwh};
  }

  auto& pr = sc.prices;
  pr.electricity_mean_per_mwh = cfg.get_double("prices.electricity_mean_per_mwh", pr.electricity_mean_per_mwh);
  pr.electricity_std_per_mwh = cfg.get_double("prices.electricity_std_per_mwh", pr.electricity_std_per_mwh);
  pr.heat_mean_per_mwh = cfg.get_double("prices.heat_mean_per_mwh", pr.heat_mean_per_mwh);
  pr.heat_std_per_mwh = cfg.get_double("prices.heat_std_per_mwh", pr.heat_std_per_mwh);
  pr.hydrogen_mean_per_kg = cfg.get_double("prices.hydrogen_mean_per_kg", pr.hydrogen_mean_per_kg);
  pr.hydrogen_std_per_kg = cfg.get_double("prices.hydrogen_std_per_kg", pr.hydrogen_std_per_kg);
  pr.hold_interval_s = cfg.get_double("prices.hold_interval_s", pr.hold_interval_s);

  sc.demand_w = cfg.get_double("demand.constant_w", sc.demand_w);
  sc.initial_state[0] = cfg.get_double("initial.battery_j", sc.initial_state[0]);
  sc.initial_state[1] = cfg.get_double("initial.thermal_k", sc.initial_state[1]);
  sc.initial_state[2] = cfg.get_double("initial.hydrogen_mol", sc.initial_state[2]);

  sc.seed = static_cast<std::uint64_t>(cfg.get_int("run.seed", static_cast<std::int64_t>(sc.seed)));
  sc.output_dir = cfg.get_string("run.output_dir", sc.output_dir.string());
  sc.solver.constraint_tol = cfg.get_double("solver.constraint_tol", sc.solver.constraint_tol);
  sc.solver.kkt_tol = cfg.get_double("solver.kkt_tol", sc.solver.kkt_tol);
  sc.solver.max_outer_iterations =
      static_cast<int>(cfg.get_int("solver.max_outer_iterations", sc.solver.max_outer_iterations));
  sc.solver.max_inner_iterations =
      static_cast<int>(cfg.get_int("solver.max_inner_iterations", sc.solver.max_inner_iterations));

  cfg.ensure_fully_consumed();
  sc.validate();
  return sc;
}

ProductionTrace compute_production(const ScenarioConfig& cfg, const WeatherTrace& weather,
                                   const CpSurface& surface) {
  ProductionTrace out;
  std::size_t n = weather.samples();
  out.total_w.reserve(n);
  out.irradiance.time_s.reserve(n);

  RandomStream solar_rng(cfg.seed + 1);
  double dt = n >= 2 ? weather.time_s[1] - weather.time_s[0] : 600.0;

  for (std::size_t k = 0; k < n; ++k) {
    double t = weather.time_s[k];
    double seconds_of_day = std::fmod(t, 86400.0);
    SolarSite site = cfg.site;
    site.day_of_year = 1 + (cfg.site.day_of_year - 1 + static_cast<int>(t / 86400.0)) % 365;

    double h = sun_elevation(site, seconds_of_day);
    double okta = weather.okta[k];
    double dw_n = solar_rng.wiener(dt);
    double dw_d = solar_rng.wiener(dt);
    double i_n = direct_radiation(okta, h, site.day_of_year, cfg.radiation, dw_n);
    double i_d = diffuse_radiation(okta, h, site.day_of_year, cfg.radiation, dw_d);
    double i_g = global_radiation(i_n, i_d, h);
    double p_s = pv_power(i_g, cfg.pv);

    out.irradiance.time_s.push_back(t);
    out.irradiance.elevation_rad.push_back(h);
    out.irradiance.direct.push_back(i_n);
    out.irradiance.diffuse.push_back(i_d);
    out.irradiance.global.push_back(i_g);
    out.irradiance.pv_power_w.push_back(p_s);

    double wind_power =
        cfg.turbine_count *
        optimize_stationary(weather.wind_speed[k], cfg.turbine, surface).electrical_power_w;
    out.total_w.push_back(wind_power + p_s);
  }
  return out;
}

RunReport run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);

  double horizon = cfg.ocp.tf_s - cfg.ocp.t0_s;
  double dt = cfg.ocp.dt_sample_s;

  auto weather = stage("weather", [&] {
    return simulate_weather(cfg.wind, cfg.cloud, cfg.initial_mean_wind_ms,
                            cfg.initial_cloud_cover, horizon, dt, cfg.seed);
  });

  CpSurface surface = stage("cp-table", [&] {
    return cfg.cp_table_path.empty() ? CpSurface::default_surface()
                                     : CpSurface::from_csv(cfg.cp_table_path);
  });

  auto production = stage("production", [&] { return compute_production(cfg, weather, surface); });

  std::size_t samples = weather.samples() - 1;  // left endpoints drive each interval
  auto prices = stage("prices", [&] { return generate_prices(cfg.prices, samples, dt, cfg.seed + 2); });

  auto dist = stage("disturbances", [&] {
    std::vector<double> prod(production.total_w.begin(), production.total_w.begin() + samples);
    std::vector<double> demand(samples, cfg.demand_w);
    auto raw = build_disturbances(prod, demand, prices);
    // Hour-mean blocking keeps the per-sample dispatch equalities
    // consistent with hour-held controls.
    auto spc = static_cast<std::size_t>(std::llround(cfg.ocp.dt_control_s / cfg.ocp.dt_sample_s));
    return average_over_control_intervals(raw, spc);
  });

  auto ocp = stage("transcription", [&] { return transcribe(cfg.plant, cfg.ocp, dist, cfg.initial_state); });
  auto solution = stage("solve", [&] { return solve_ocp(ocp, dist, cfg.plant, cfg.solver); });
  auto open_loop = stage("open-loop", [&] {
    return simulate_open_loop(cfg.plant, cfg.ocp, ocp.layout, solution.trajectories.controls,
                              dist, cfg.initial_state);
  });

  RunReport report;
  auto out = [&](const char* name) { return cfg.output_dir / name; };
  stage("outputs", [&] {
    write_weather_csv(weather, out("weather.csv"));
    write_irradiance_csv(production.irradiance, out("irradiance.csv"));
    write_solution_csv(ocp.layout, solution.trajectories, out("solution.csv"));
    {
      CsvWriter csv(out("storage_trace.csv"), {"t_s", "E_b_J", "T_K", "sat_b", "sat_t"});
      for (std::size_t k = 0; k <= samples; ++k) {
        double sat_b = k > 0 && open_loop.battery_saturated[k - 1] ? 1.0 : 0.0;
        double sat_t = k > 0 && open_loop.thermal_saturated[k - 1] ? 1.0 : 0.0;
        csv.row({static_cast<double>(k) * dt, open_loop.trajectories.states[k][0],
                 open_loop.trajectories.states[k][1], sat_b, sat_t});
      }
    }
    {
      CsvWriter csv(out("tank_trace.csv"), {"t_s", "n_mol", "P_Pa"});
      for (std::size_t k = 0; k <= samples; ++k) {
        csv.row({static_cast<double>(k) * dt, open_loop.trajectories.states[k][2],
                 open_loop.tank_pressure_pa[k]});
      }
    }
    {
      std::ofstream log(out("solver.log"));
      log << solution.nlp.log;
    }
    report.manifest = {out("weather.csv"), out("irradiance.csv"), out("solution.csv"),
                       out("storage_trace.csv"), out("tank_trace.csv"), out("solver.log"),
                       out("report.json")};
    return 0;
  });

  report.profit = solution.profit;
  for (std::size_t i = 0; i < ocp.layout.num_intervals; ++i) {
    const auto& u = solution.trajectories.controls[i];
    double dt_i = dt * static_cast<double>(ocp.layout.samples_per_control);
    report.electricity_sold_mwh += u[kBatterySell] * dt_i / kJoulePerMwh;
    report.electricity_bought_mwh += u[kBatteryBuy] * dt_i / kJoulePerMwh;
    report.heat_sold_mwh += u[kHeatSell] * dt_i / kJoulePerMwh;
    report.hydrogen_sold_kg += u[kHydrogenSell] * cfg.plant.fuel_cell.molar_mass_kg_mol * dt_i;
  }
  for (std::size_t k = 0; k < samples; ++k) {
    if (dist.deficit_w[k] > 0.0) ++report.deficit_samples;
    double resid = std::max(open_loop.coverage_residual_w[k], 0.0);
    report.unserved_energy_mwh += resid * dt / kJoulePerMwh;
    report.max_coverage_residual_w = std::max(report.max_coverage_residual_w, resid);
    if (open_loop.battery_saturated[k] || open_loop.thermal_saturated[k] ||
        open_loop.tank_saturated[k]) {
      ++report.saturated_samples;
    }
  }
  report.max_state_bound_violation = open_loop.max_state_bound_violation;
  report.solver_converged = solution.nlp.converged();
  report.kkt_residual = solution.nlp.kkt_residual;
  report.constraint_violation = solution.nlp.constraint_violation;
  report.outer_iterations = solution.nlp.outer_iterations;
  report.inner_iterations = solution.nlp.inner_iterations;

  stage("report", [&] {
    report.write_json(cfg.output_dir / "report.json");
    return 0;
  });
  return report;
}

void RunReport::write_json(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["profit"] = profit;
  j["electricity_sold_mwh"] = electricity_sold_mwh;
  j["electricity_bought_mwh"] = electricity_bought_mwh;
  j["heat_sold_mwh"] = heat_sold_mwh;
  j["hydrogen_sold_kg"] = hydrogen_sold_kg;
  j["unserved_energy_mwh"] = unserved_energy_mwh;
  j["max_coverage_residual_w"] = max_coverage_residual_w;
  j["deficit_samples"] = deficit_samples;
  j["saturated_samples"] = saturated_samples;
  j["max_state_bound_violation"] = max_state_bound_violation;
  j["solver"] = {{"converged", solver_converged},
                 {"kkt_residual", kkt_residual},
                 {"constraint_violation", constraint_violation},
                 {"outer_iterations", outer_iterations},
                 {"inner_iterations", inner_iterations}};
  std::vector<std::string> files;
  for (const auto& p : manifest) files.push_back(p.filename().string());
  j["manifest"] = files;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path.string());
  out << j.dump(2) << '\n';
}

std::filesystem::path cmd_weather(const ScenarioConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  double horizon = cfg.ocp.tf_s - cfg.ocp.t0_s;
  auto weather = stage("weather", [&] {
    return simulate_weather(cfg.wind, cfg.cloud, cfg.initial_mean_wind_ms,
                            cfg.initial_cloud_cover, horizon, cfg.ocp.dt_sample_s, cfg.seed);
  });
  CpSurface surface = CpSurface::default_surface();
  auto production = stage("production", [&] { return compute_production(cfg, weather, surface); });
  write_weather_csv(weather, cfg.output_dir / "weather.csv");
  write_irradiance_csv(production.irradiance, cfg.output_dir / "irradiance.csv");
  return cfg.output_dir / "weather.csv";
}

std::filesystem::path cmd_power_curve(const ScenarioConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  CpSurface surface = stage("cp-table", [&] {
    return cfg.cp_table_path.empty() ? CpSurface::default_surface()
                                     : CpSurface::from_csv(cfg.cp_table_path);
  });
  std::vector<double> grid;
  for (int k = 0; k <= 270; ++k) grid.push_back(k / 10.0);  // hits 11.4 exactly
  auto curve = stage("power-curve", [&] { return power_curve(cfg.turbine, surface, grid); });
  write_power_curve_csv(curve, cfg.output_dir / "power_curve.csv");
  return cfg.output_dir / "power_curve.csv";
}

std::filesystem::path cmd_electrolyzer_curve(const ScenarioConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  double i_max = current_from_power(cfg.plant.electrolyzer.rated_power_w, cfg.plant.electrolyzer);
  std::vector<double> currents;
  for (int k = 0; k <= 200; ++k) currents.push_back(i_max * k / 200.0);
  write_electrolyzer_curve_csv(cfg.plant.electrolyzer, currents,
                               cfg.output_dir / "electrolyzer_curve.csv");
  return cfg.output_dir / "electrolyzer_curve.csv";
}

}  // namespace hyplant
