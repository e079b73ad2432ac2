#include "hyplant/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hyplant/csv.hpp"
#include "hyplant/random_stream.hpp"

namespace hyplant {

namespace {

constexpr double kJoulePerMwh = 3.6e9;

/// d(eta_F(I) * I)/dI for the tank-inflow Jacobian.
double hydrogen_rate_derivative(double current_a, const ElectrolyzerParams& p) {
  double per_amp = 1000.0 / p.cell_area_cm2;  // mA/cm^2 per A
  double i_ma = per_amp * current_a;
  double q = i_ma * i_ma;
  double denom = p.faraday_f1 + q;
  double eta = q / denom * p.faraday_f2;
  double deta_dI = p.faraday_f2 * p.faraday_f1 * 2.0 * i_ma * per_amp / (denom * denom);
  return p.cells_in_series * (eta + current_a * deta_dI) /
         (p.thermo.electrons * p.thermo.faraday_c_mol);
}

/// d(stack_power)/dI for the consistency-row Jacobian.
double stack_power_derivative(double current_a, const ElectrolyzerParams& p) {
  double density = current_a / p.cell_area_cm2;
  double t_coef = p.activation_t1 + p.activation_t2 / p.temperature_c +
                  p.activation_t3 / (p.temperature_c * p.temperature_c);
  double du = (p.ohmic_r1 + p.ohmic_r2 * p.temperature_c) / p.cell_area_cm2 +
              p.activation_s / std::log(10.0) * (t_coef / p.cell_area_cm2) /
                  (t_coef * density + 1.0);
  return p.cells_in_series * (cell_voltage(current_a, p) + current_a * du);
}

}  // namespace

void PlantModel::validate() const {
  battery.validate();
  thermal.validate();
  electrolyzer.validate();
  tank.validate();
  fuel_cell.validate();
  if (!(steam_efficiency > 0.0 && steam_efficiency <= 1.0)) {
    throw std::invalid_argument("steam turbine efficiency must lie in (0,1]");
  }
}

void DisturbanceTrajectory::validate() const {
  std::size_t n = surplus_w.size();
  if (deficit_w.size() != n || price_electricity_per_j.size() != n ||
      price_heat_per_j.size() != n || price_hydrogen_per_kg.size() != n) {
    throw std::invalid_argument("disturbance arrays must have equal lengths");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(surplus_w[k] >= 0.0) || !(deficit_w[k] >= 0.0)) {
      throw std::invalid_argument("surplus/deficit must be >= 0");
    }
    if (surplus_w[k] > 0.0 && deficit_w[k] > 0.0) {
      throw std::invalid_argument("surplus and deficit are mutually exclusive per sample");
    }
  }
}

DisturbanceTrajectory build_disturbances(std::span<const double> production_w,
                                         std::span<const double> demand_w,
                                         const PriceSeries& prices) {
  if (production_w.size() != demand_w.size()) {
    throw std::invalid_argument("production and demand series must have equal lengths");
  }
  if (prices.electricity_per_j.size() != production_w.size() ||
      prices.heat_per_j.size() != production_w.size() ||
      prices.hydrogen_per_kg.size() != production_w.size()) {
    throw std::invalid_argument("price series must match the sample count");
  }
  DisturbanceTrajectory d;
  d.price_electricity_per_j = prices.electricity_per_j;
  d.price_heat_per_j = prices.heat_per_j;
  d.price_hydrogen_per_kg = prices.hydrogen_per_kg;
  d.surplus_w.resize(production_w.size());
  d.deficit_w.resize(production_w.size());
  for (std::size_t k = 0; k < production_w.size(); ++k) {
    d.surplus_w[k] = std::max(production_w[k] - demand_w[k], 0.0);
    d.deficit_w[k] = std::max(demand_w[k] - production_w[k], 0.0);
  }
  return d;
}

PriceSeries generate_prices(const PriceGenConfig& cfg, std::size_t samples, double dt_sample_s,
                            std::uint64_t seed) {
  if (!(dt_sample_s > 0.0)) throw std::invalid_argument("dt must be > 0");
  RandomStream rng(seed);
  PriceSeries out;
  out.electricity_per_j.reserve(samples);
  out.heat_per_j.reserve(samples);
  out.hydrogen_per_kg.reserve(samples);
  auto hold = static_cast<std::size_t>(std::max(1.0, std::round(cfg.hold_interval_s / dt_sample_s)));
  double e = 0.0, h = 0.0, h2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    if (k % hold == 0) {
      e = std::max(cfg.electricity_mean_per_mwh + rng.gaussian(cfg.electricity_std_per_mwh), 0.0);
      h = std::max(cfg.heat_mean_per_mwh + rng.gaussian(cfg.heat_std_per_mwh), 0.0);
      h2 = std::max(cfg.hydrogen_mean_per_kg + rng.gaussian(cfg.hydrogen_std_per_kg), 0.0);
    }
    out.electricity_per_j.push_back(e / kJoulePerMwh);
    out.heat_per_j.push_back(h / kJoulePerMwh);
    out.hydrogen_per_kg.push_back(h2);
  }
  return out;
}

DisturbanceTrajectory average_over_control_intervals(const DisturbanceTrajectory& d,
                                                     std::size_t samples_per_control) {
  if (samples_per_control == 0) throw std::invalid_argument("need samples_per_control >= 1");
  if (d.samples() % samples_per_control != 0) {
    throw std::invalid_argument("sample count must be a multiple of samples_per_control");
  }
  DisturbanceTrajectory out = d;
  for (std::size_t start = 0; start < d.samples(); start += samples_per_control) {
    double net = 0.0;
    for (std::size_t k = start; k < start + samples_per_control; ++k) {
      net += d.surplus_w[k] - d.deficit_w[k];
    }
    net /= static_cast<double>(samples_per_control);
    for (std::size_t k = start; k < start + samples_per_control; ++k) {
      out.surplus_w[k] = std::max(net, 0.0);
      out.deficit_w[k] = std::max(-net, 0.0);
    }
  }
  return out;
}

void OcpConfig::validate() const {
  if (!(dt_sample_s > 0.0) || !(dt_control_s > 0.0)) {
    throw std::invalid_argument("sampling and control intervals must be > 0");
  }
  double ratio = dt_control_s / dt_sample_s;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw std::invalid_argument("control interval must be a multiple of the sampling interval");
  }
  double horizon = tf_s - t0_s;
  if (horizon < 0.0) throw std::invalid_argument("need tf >= t0");
  double intervals = horizon / dt_control_s;
  if (std::abs(intervals - std::round(intervals)) > 1e-9) {
    throw std::invalid_argument("horizon must be a multiple of the control interval");
  }
  for (int j = 0; j < 3; ++j) {
    if (!(state_min[j] <= state_max[j])) throw std::invalid_argument("infeasible state bounds");
  }
  for (int j = 0; j < kNumControls; ++j) {
    if (!(control_min[j] <= control_max[j])) throw std::invalid_argument("infeasible control bounds");
    if (!(control_min[j] >= 0.0)) throw std::invalid_argument("controls are non-negative");
  }
}

OcpTrajectories OcpLayout::unpack(std::span<const double> point) const {
  if (point.size() != num_vars()) throw std::invalid_argument("point size mismatch");
  OcpTrajectories traj;
  traj.controls.resize(num_intervals);
  for (std::size_t i = 0; i < num_intervals; ++i) {
    for (int j = 0; j < kNumControls; ++j) {
      traj.controls[i][static_cast<std::size_t>(j)] = point[control_index(i, j)];
    }
  }
  traj.states.resize(num_samples + 1);
  for (std::size_t k = 0; k <= num_samples; ++k) {
    for (int j = 0; j < 3; ++j) {
      traj.states[k][static_cast<std::size_t>(j)] = point[state_index(k, j)];
    }
  }
  return traj;
}

TranscribedOcp transcribe(const PlantModel& model, const OcpConfig& cfg,
                          const DisturbanceTrajectory& d, const std::array<double, 3>& x0) {
  model.validate();
  cfg.validate();
  d.validate();

  OcpLayout layout;
  layout.dt_sample_s = cfg.dt_sample_s;
  layout.samples_per_control =
      static_cast<std::size_t>(std::llround(cfg.dt_control_s / cfg.dt_sample_s));
  layout.num_samples = static_cast<std::size_t>(std::llround((cfg.tf_s - cfg.t0_s) / cfg.dt_sample_s));
  layout.num_intervals = layout.num_samples / layout.samples_per_control;
  layout.fuel_cell_w_per_mol = model.fuel_cell.heating_value_j_kg * model.fuel_cell.efficiency *
                               model.fuel_cell.molar_mass_kg_mol;
  if (d.samples() != layout.num_samples) {
    throw std::invalid_argument("disturbance length must equal the number of samples");
  }
  for (int j = 0; j < 3; ++j) {
    if (!(x0[static_cast<std::size_t>(j)] >= cfg.state_min[static_cast<std::size_t>(j)] &&
          x0[static_cast<std::size_t>(j)] <= cfg.state_max[static_cast<std::size_t>(j)])) {
      throw std::invalid_argument("initial state outside the state bounds");
    }
  }

  double max_price_e = 0.0, mean_price_e = 0.0;
  for (double c : d.price_electricity_per_j) {
    max_price_e = std::max(max_price_e, c);
    mean_price_e += c;
  }
  if (!d.price_electricity_per_j.empty()) {
    mean_price_e /= static_cast<double>(d.price_electricity_per_j.size());
  }
  layout.slack_penalty_per_j =
      cfg.slack_penalty_per_j > 0.0 ? cfg.slack_penalty_per_j : 10.0 * max_price_e;
  layout.terminal_value_per_j =
      cfg.terminal_value_per_j.value_or(std::array<double, 3>{mean_price_e, mean_price_e, mean_price_e});

  const std::size_t ns = layout.num_samples;
  const std::size_t nc = layout.num_intervals;
  const double dt = cfg.dt_sample_s;

  NlpProblem nlp;
  nlp.num_vars = static_cast<int>(layout.num_vars());
  nlp.lower.assign(layout.num_vars(), 0.0);
  nlp.upper.assign(layout.num_vars(), 0.0);
  nlp.initial.assign(layout.num_vars(), 0.0);
  nlp.variable_scale.assign(layout.num_vars(), 1.0);

  for (std::size_t i = 0; i < nc; ++i) {
    for (int j = 0; j < kNumControls; ++j) {
      auto idx = layout.control_index(i, j);
      nlp.lower[idx] = cfg.control_min[static_cast<std::size_t>(j)];
      nlp.upper[idx] = cfg.control_max[static_cast<std::size_t>(j)];
      nlp.initial[idx] = cfg.control_min[static_cast<std::size_t>(j)];
      nlp.variable_scale[idx] = std::max(1.0, cfg.control_max[static_cast<std::size_t>(j)]);
    }
  }
  std::array<double, 3> state_scale{};
  for (int j = 0; j < 3; ++j) {
    state_scale[static_cast<std::size_t>(j)] =
        std::max(1.0, cfg.state_max[static_cast<std::size_t>(j)]);
  }
  for (std::size_t k = 0; k <= ns; ++k) {
    for (int j = 0; j < 3; ++j) {
      auto idx = layout.state_index(k, j);
      nlp.lower[idx] = cfg.state_min[static_cast<std::size_t>(j)];
      nlp.upper[idx] = cfg.state_max[static_cast<std::size_t>(j)];
      nlp.variable_scale[idx] = state_scale[static_cast<std::size_t>(j)];
    }
  }
  // Pin the initial state.
  for (int j = 0; j < 3; ++j) {
    auto idx = layout.state_index(0, j);
    nlp.lower[idx] = x0[static_cast<std::size_t>(j)];
    nlp.upper[idx] = x0[static_cast<std::size_t>(j)];
  }
  // Initial guess: zero controls, states propagated with the plant drift.
  {
    std::array<double, 3> x = x0;
    for (int j = 0; j < 3; ++j) nlp.initial[layout.state_index(0, j)] = x[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < ns; ++k) {
      x[0] += dt * battery_rhs(x[0], 0.0, 0.0, model.battery);
      x[1] += dt * thermal_rhs(x[1], 0.0, 0.0, model.thermal);
      for (int j = 0; j < 3; ++j) {
        auto idx = layout.state_index(k + 1, j);
        nlp.initial[idx] = std::clamp(x[static_cast<std::size_t>(j)],
                                      cfg.state_min[static_cast<std::size_t>(j)],
                                      cfg.state_max[static_cast<std::size_t>(j)]);
        x[static_cast<std::size_t>(j)] = nlp.initial[idx];
      }
    }
  }

  // Constraint rows: per sample [defect_E, defect_T, defect_n, dispatch,
  // withdrawal], then one stack-consistency row per control interval.
  nlp.num_constraints = static_cast<int>(5 * ns + nc);
  nlp.constraint_scale.assign(static_cast<std::size_t>(nlp.num_constraints), 1.0);
  for (std::size_t k = 0; k < ns; ++k) {
    // Defect rows scale with their state so the scaled Jacobian stays O(1).
    nlp.constraint_scale[5 * k + 0] = state_scale[0];
    nlp.constraint_scale[5 * k + 1] = state_scale[1];
    nlp.constraint_scale[5 * k + 2] = state_scale[2];
    nlp.constraint_scale[5 * k + 3] = std::max(1.0, d.surplus_w[k]);
    nlp.constraint_scale[5 * k + 4] = std::max(1.0, d.deficit_w[k]);
  }
  for (std::size_t i = 0; i < nc; ++i) {
    nlp.constraint_scale[5 * ns + i] = std::max(1.0, model.electrolyzer.rated_power_w);
  }

  // Plain copies for the callbacks.
  const BatteryParams bat = model.battery;
  const ThermalParams th = model.thermal;
  const ElectrolyzerParams el = model.electrolyzer;
  const double steam_eff = model.steam_efficiency;
  const double fc_w_per_mol = layout.fuel_cell_w_per_mol;
  const double zf = el.thermo.electrons * el.thermo.faraday_c_mol;
  const OcpLayout lay = layout;
  std::vector<double> surplus = d.surplus_w;
  std::vector<double> deficit = d.deficit_w;

  nlp.constraints = [=](std::span<const double> z, std::span<double> out) {
    for (std::size_t k = 0; k < ns; ++k) {
      std::size_t i = lay.interval_of_sample(k);
      double eb = z[lay.state_index(k, 0)];
      double tk = z[lay.state_index(k, 1)];
      double nk = z[lay.state_index(k, 2)];
      double p_b_in = z[lay.control_index(i, kPowerToBattery)];
      double p_t_in = z[lay.control_index(i, kPowerToThermal)];
      double p_el = z[lay.control_index(i, kPowerToElectrolyzer)];
      double p_b_out = z[lay.control_index(i, kBatterySell)];
      double p_b_bo = z[lay.control_index(i, kBatteryBuy)];
      double q_t_out = z[lay.control_index(i, kHeatSell)];
      double f_out = z[lay.control_index(i, kHydrogenSell)];
      double current = z[lay.control_index(i, kStackCurrent)];
      double d_b = z[lay.control_index(i, kBatteryToDemand)];
      double d_t = z[lay.control_index(i, kThermalToDemand)];
      double d_h2 = z[lay.control_index(i, kHydrogenToFuelCell)];
      double slack = z[lay.control_index(i, kDemandSlack)];

      double e_rhs = -bat.self_discharge_per_s * eb + bat.charge_efficiency * (p_b_in + p_b_bo) -
                     (p_b_out + d_b) / bat.discharge_efficiency;
      double t_rhs = (th.charge_efficiency * p_t_in -
                      th.heat_loss_w_per_k * (tk - th.ambient_k) - q_t_out - d_t / steam_eff) /
                     (th.mass_kg * th.specific_heat(tk));
      double i_ma = 1000.0 * current / el.cell_area_cm2;
      double eta_f = i_ma * i_ma / (el.faraday_f1 + i_ma * i_ma) * el.faraday_f2;
      double n_rhs = el.cells_in_series * eta_f * current / zf - f_out - d_h2;

      out[5 * k + 0] = z[lay.state_index(k + 1, 0)] - eb - dt * e_rhs;
      out[5 * k + 1] = z[lay.state_index(k + 1, 1)] - tk - dt * t_rhs;
      out[5 * k + 2] = z[lay.state_index(k + 1, 2)] - nk - dt * n_rhs;
      out[5 * k + 3] = p_b_in + p_t_in + p_el - surplus[k];
      out[5 * k + 4] = d_b + d_t + fc_w_per_mol * d_h2 + slack - deficit[k];
    }
    for (std::size_t i = 0; i < nc; ++i) {
      double current = z[lay.control_index(i, kStackCurrent)];
      out[5 * ns + i] = z[lay.control_index(i, kPowerToElectrolyzer)] -
                        current * el.cells_in_series * cell_voltage(current, el);
    }
  };

  // Jacobian pattern, built in the same order the values callback fills it.
  std::vector<int> rows, cols;
  auto entry = [&](std::size_t row, std::size_t col) {
    rows.push_back(static_cast<int>(row));
    cols.push_back(static_cast<int>(col));
  };
  for (std::size_t k = 0; k < ns; ++k) {
    std::size_t i = lay.interval_of_sample(k);
    std::size_t r = 5 * k;
    entry(r, lay.state_index(k + 1, 0));
    entry(r, lay.state_index(k, 0));
    entry(r, lay.control_index(i, kPowerToBattery));
    entry(r, lay.control_index(i, kBatteryBuy));
    entry(r, lay.control_index(i, kBatterySell));
    entry(r, lay.control_index(i, kBatteryToDemand));
    entry(r + 1, lay.state_index(k + 1, 1));
    entry(r + 1, lay.state_index(k, 1));
    entry(r + 1, lay.control_index(i, kPowerToThermal));
    entry(r + 1, lay.control_index(i, kHeatSell));
    entry(r + 1, lay.control_index(i, kThermalToDemand));
    entry(r + 2, lay.state_index(k + 1, 2));
    entry(r + 2, lay.state_index(k, 2));
    entry(r + 2, lay.control_index(i, kStackCurrent));
    entry(r + 2, lay.control_index(i, kHydrogenSell));
    entry(r + 2, lay.control_index(i, kHydrogenToFuelCell));
    entry(r + 3, lay.control_index(i, kPowerToBattery));
    entry(r + 3, lay.control_index(i, kPowerToThermal));
    entry(r + 3, lay.control_index(i, kPowerToElectrolyzer));
    entry(r + 4, lay.control_index(i, kBatteryToDemand));
    entry(r + 4, lay.control_index(i, kThermalToDemand));
    entry(r + 4, lay.control_index(i, kHydrogenToFuelCell));
    entry(r + 4, lay.control_index(i, kDemandSlack));
  }
  for (std::size_t i = 0; i < nc; ++i) {
    entry(5 * ns + i, lay.control_index(i, kPowerToElectrolyzer));
    entry(5 * ns + i, lay.control_index(i, kStackCurrent));
  }
  nlp.jacobian_rows = std::move(rows);
  nlp.jacobian_cols = std::move(cols);

  nlp.jacobian_values = [=](std::span<const double> z, std::span<double> vals) {
    std::size_t p = 0;
    for (std::size_t k = 0; k < ns; ++k) {
      std::size_t i = lay.interval_of_sample(k);
      // battery defect
      vals[p++] = 1.0;
      vals[p++] = -1.0 + dt * bat.self_discharge_per_s;
      vals[p++] = -dt * bat.charge_efficiency;
      vals[p++] = -dt * bat.charge_efficiency;
      vals[p++] = dt / bat.discharge_efficiency;
      vals[p++] = dt / bat.discharge_efficiency;
      // thermal defect
      double tk = z[lay.state_index(k, 1)];
      double mcp = th.mass_kg * th.specific_heat(tk);
      double t_rhs = (th.charge_efficiency * z[lay.control_index(i, kPowerToThermal)] -
                      th.heat_loss_w_per_k * (tk - th.ambient_k) -
                      z[lay.control_index(i, kHeatSell)] -
                      z[lay.control_index(i, kThermalToDemand)] / steam_eff) /
                     mcp;
      double drhs_dt = (-th.heat_loss_w_per_k - t_rhs * th.mass_kg * th.cp_slope) / mcp;
      vals[p++] = 1.0;
      vals[p++] = -1.0 - dt * drhs_dt;
      vals[p++] = -dt * th.charge_efficiency / mcp;
      vals[p++] = dt / mcp;
      vals[p++] = dt / (steam_eff * mcp);
      // tank defect
      double current = z[lay.control_index(i, kStackCurrent)];
      vals[p++] = 1.0;
      vals[p++] = -1.0;
      vals[p++] = -dt * hydrogen_rate_derivative(current, el);
      vals[p++] = dt;
      vals[p++] = dt;
      // dispatch balance
      vals[p++] = 1.0;
      vals[p++] = 1.0;
      vals[p++] = 1.0;
      // withdrawal balance
      vals[p++] = 1.0;
      vals[p++] = 1.0;
      vals[p++] = fc_w_per_mol;
      vals[p++] = 1.0;
    }
    for (std::size_t i = 0; i < nc; ++i) {
      vals[p++] = 1.0;
      vals[p++] = -stack_power_derivative(z[lay.control_index(i, kStackCurrent)], el);
    }
  };

  // Objective: minimize -(profit). Per-interval price quadrature weights.
  std::vector<double> w_e(nc, 0.0), w_h(nc, 0.0), w_h2(nc, 0.0);
  for (std::size_t k = 0; k < ns; ++k) {
    std::size_t i = lay.interval_of_sample(k);
    w_e[i] += dt * d.price_electricity_per_j[k];
    w_h[i] += dt * d.price_heat_per_j[k];
    w_h2[i] += dt * d.price_hydrogen_per_kg[k];
  }
  const double slack_w = layout.slack_penalty_per_j;
  const double mm_h2 = model.fuel_cell.molar_mass_kg_mol;
  const std::array<double, 3> vterm = layout.terminal_value_per_j;
  const double bat_eta_out = model.battery.discharge_efficiency;
  const double fc_eta = model.fuel_cell.efficiency;
  const double hhv = model.fuel_cell.heating_value_j_kg;
  const double t_min = model.thermal.temp_min_k;

  nlp.objective = [=](std::span<const double> z, std::span<double> grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    if (ns == 0) return 0.0;
    double profit = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
      profit += w_e[i] * (z[lay.control_index(i, kBatterySell)] -
                          z[lay.control_index(i, kBatteryBuy)]);
      profit += w_h[i] * z[lay.control_index(i, kHeatSell)];
      profit += w_h2[i] * mm_h2 * z[lay.control_index(i, kHydrogenSell)];
      profit -= slack_w * dt * static_cast<double>(lay.samples_per_control) *
                z[lay.control_index(i, kDemandSlack)];
      grad[lay.control_index(i, kBatterySell)] = -w_e[i];
      grad[lay.control_index(i, kBatteryBuy)] = w_e[i];
      grad[lay.control_index(i, kHeatSell)] = -w_h[i];
      grad[lay.control_index(i, kHydrogenSell)] = -w_h2[i] * mm_h2;
      grad[lay.control_index(i, kDemandSlack)] =
          slack_w * dt * static_cast<double>(lay.samples_per_control);
    }
    // Terminal valuation of what is left in storage.
    double e_n = z[lay.state_index(ns, 0)];
    double t_n = z[lay.state_index(ns, 1)];
    double n_n = z[lay.state_index(ns, 2)];
    double heat_above_min = th.mass_kg * (th.cp_const * (t_n - t_min) +
                                          0.5 * th.cp_slope * (t_n * t_n - t_min * t_min));
    profit += vterm[0] * bat_eta_out * e_n;
    profit += vterm[1] * steam_eff * heat_above_min;
    profit += vterm[2] * hhv * fc_eta * mm_h2 * n_n;
    grad[lay.state_index(ns, 0)] = -vterm[0] * bat_eta_out;
    grad[lay.state_index(ns, 1)] = -vterm[1] * steam_eff * th.mass_kg * th.specific_heat(t_n);
    grad[lay.state_index(ns, 2)] = -vterm[2] * hhv * fc_eta * mm_h2;
    return -profit;
  };

  // Objective scale: the largest scaled gradient entry at the initial
  // point; the objective is affine in everything except (rarely) T_n, so
  // this is a global slope estimate.
  {
    std::vector<double> g(layout.num_vars());
    nlp.objective(nlp.initial, g);
    double gmax = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      gmax = std::max(gmax, std::abs(g[j]) * nlp.variable_scale[j]);
    }
    nlp.objective_scale = std::max(1.0, gmax);
  }

  return {std::move(nlp), layout};
}

double ocp_objective(const OcpTrajectories& traj, const DisturbanceTrajectory& d,
                     const OcpLayout& layout, const PlantModel& model) {
  if (layout.num_samples == 0) return 0.0;
  if (traj.controls.size() != layout.num_intervals ||
      traj.states.size() != layout.num_samples + 1 || d.samples() != layout.num_samples) {
    throw std::invalid_argument("trajectory/disturbance lengths inconsistent with layout");
  }
  double dt = layout.dt_sample_s;
  double profit = 0.0;
  for (std::size_t k = 0; k < layout.num_samples; ++k) {
    const auto& u = traj.controls[layout.interval_of_sample(k)];
    profit += dt * d.price_electricity_per_j[k] * (u[kBatterySell] - u[kBatteryBuy]);
    profit += dt * d.price_heat_per_j[k] * u[kHeatSell];
    profit += dt * d.price_hydrogen_per_kg[k] * model.fuel_cell.molar_mass_kg_mol * u[kHydrogenSell];
    profit -= dt * layout.slack_penalty_per_j * u[kDemandSlack];
  }
  const auto& xn = traj.states.back();
  const auto& th = model.thermal;
  double t_min = th.temp_min_k;
  double heat_above_min = th.mass_kg * (th.cp_const * (xn[1] - t_min) +
                                        0.5 * th.cp_slope * (xn[1] * xn[1] - t_min * t_min));
  profit += layout.terminal_value_per_j[0] * model.battery.discharge_efficiency * xn[0];
  profit += layout.terminal_value_per_j[1] * model.steam_efficiency * heat_above_min;
  profit += layout.terminal_value_per_j[2] * model.fuel_cell.heating_value_j_kg *
            model.fuel_cell.efficiency * model.fuel_cell.molar_mass_kg_mol * xn[2];
  return profit;
}

OcpSolution solve_ocp(const TranscribedOcp& ocp, const DisturbanceTrajectory& d,
                      const PlantModel& model, const NlpOptions& options) {
  OcpSolution sol;
  sol.nlp = solve_nlp(ocp.problem, options);
  sol.trajectories = ocp.layout.unpack(sol.nlp.point);
  sol.profit = ocp_objective(sol.trajectories, d, ocp.layout, model);
  return sol;
}

OpenLoopResult simulate_open_loop(const PlantModel& model, const OcpConfig& cfg,
                                  const OcpLayout& layout,
                                  const std::vector<std::array<double, kNumControls>>& controls,
                                  const DisturbanceTrajectory& d, const std::array<double, 3>& x0) {
  if (controls.size() != layout.num_intervals || d.samples() != layout.num_samples) {
    throw std::invalid_argument("controls/disturbances inconsistent with layout");
  }
  double dt = layout.dt_sample_s;
  OpenLoopResult res;
  res.trajectories.controls = controls;
  res.trajectories.states.resize(layout.num_samples + 1);
  res.trajectories.states[0] = x0;
  res.coverage_residual_w.resize(layout.num_samples);
  res.tank_pressure_pa.resize(layout.num_samples + 1);
  res.battery_saturated.assign(layout.num_samples, false);
  res.thermal_saturated.assign(layout.num_samples, false);
  res.tank_saturated.assign(layout.num_samples, false);

  auto pressure = [&](double n) {
    return n > 0.0 ? tank_pressure(n, model.tank) : 0.0;
  };
  res.tank_pressure_pa[0] = pressure(x0[2]);

  std::array<double, 3> x = x0;
  for (std::size_t k = 0; k < layout.num_samples; ++k) {
    const auto& u = controls[layout.interval_of_sample(k)];
    auto eb = step_battery(x[0], u[kPowerToBattery] + u[kBatteryBuy],
                           u[kBatterySell] + u[kBatteryToDemand], dt, model.battery);
    auto tk = step_thermal(x[1], u[kPowerToThermal],
                           u[kHeatSell] + u[kThermalToDemand] / model.steam_efficiency, dt,
                           model.thermal);
    auto nk = tank_step(x[2], hydrogen_rate(u[kStackCurrent], model.electrolyzer),
                        u[kHydrogenSell] + u[kHydrogenToFuelCell], dt, model.tank);
    x = {eb.value, tk.value, nk.value};
    res.battery_saturated[k] = eb.saturated;
    res.thermal_saturated[k] = tk.saturated;
    res.tank_saturated[k] = nk.saturated;
    res.trajectories.states[k + 1] = x;
    res.tank_pressure_pa[k + 1] = pressure(x[2]);

    double delivered = u[kBatteryToDemand] + u[kThermalToDemand] +
                       layout.fuel_cell_w_per_mol * u[kHydrogenToFuelCell];
    res.coverage_residual_w[k] = d.deficit_w[k] - delivered;

    for (int j = 0; j < 3; ++j) {
      double lo = cfg.state_min[static_cast<std::size_t>(j)];
      double hi = cfg.state_max[static_cast<std::size_t>(j)];
      double scale = std::max(1.0, hi);
      double over = std::max({lo - x[static_cast<std::size_t>(j)],
                              x[static_cast<std::size_t>(j)] - hi, 0.0});
      res.max_state_bound_violation = std::max(res.max_state_bound_violation, over / scale);
    }
  }
  return res;
}

void write_solution_csv(const OcpLayout& layout, const OcpTrajectories& traj,
                        const std::filesystem::path& path) {
  CsvWriter csv(path, {"t_s", "E_b", "T", "n_H2", "P_b_in", "P_t_in", "P_el", "P_b_out",
                       "P_b_bo", "Q_t_out", "f_H2_out", "I", "d_b", "d_t", "d_fc", "s_d"});
  for (std::size_t k = 0; k <= layout.num_samples; ++k) {
    std::size_t i = layout.num_samples == 0
                        ? 0
                        : layout.interval_of_sample(std::min(k, layout.num_samples - 1));
    std::array<double, kNumControls> u{};
    if (!traj.controls.empty()) u = traj.controls[i];
    double d_fc = layout.fuel_cell_w_per_mol * u[kHydrogenToFuelCell];
    csv.row({static_cast<double>(k) * layout.dt_sample_s, traj.states[k][0], traj.states[k][1],
             traj.states[k][2], u[kPowerToBattery], u[kPowerToThermal], u[kPowerToElectrolyzer],
             u[kBatterySell], u[kBatteryBuy], u[kHeatSell], u[kHydrogenSell], u[kStackCurrent],
             u[kBatteryToDemand], u[kThermalToDemand], d_fc, u[kDemandSlack]});
  }
}

}  // namespace hyplant
