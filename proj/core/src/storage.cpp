#include "hyplant/storage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyplant {

namespace {

void check_flows(double in_w, double out_w) {
  if (!(in_w >= 0.0) || !(out_w >= 0.0)) {
    throw std::invalid_argument("storage flows must be >= 0");
  }
  if (!std::isfinite(in_w) || !std::isfinite(out_w)) {
    throw std::invalid_argument("storage flows must be finite");
  }
}

ClampedStep clamp_step(double value, double lo, double hi) {
  double clamped = std::clamp(value, lo, hi);
  return {clamped, clamped != value};
}

}  // namespace

void BatteryParams::validate() const {
  if (!(self_discharge_per_s >= 0.0)) throw std::invalid_argument("self-discharge must be >= 0");
  if (!(charge_efficiency > 0.0 && charge_efficiency <= 1.0) ||
      !(discharge_efficiency > 0.0 && discharge_efficiency <= 1.0)) {
    throw std::invalid_argument("battery efficiencies must lie in (0,1]");
  }
  if (!(energy_min_j < energy_max_j)) throw std::invalid_argument("need E_min < E_max");
}

void ThermalParams::validate() const {
  if (!(mass_kg > 0.0)) throw std::invalid_argument("storage mass must be > 0");
  if (!(heat_loss_w_per_k >= 0.0)) throw std::invalid_argument("UA must be >= 0");
  if (!(charge_efficiency > 0.0 && charge_efficiency <= 1.0)) {
    throw std::invalid_argument("thermal charge efficiency must lie in (0,1]");
  }
  if (!(temp_min_k < temp_max_k)) throw std::invalid_argument("need T_min < T_max");
  if (!(specific_heat(temp_min_k) > 0.0) || !(specific_heat(temp_max_k) > 0.0)) {
    throw std::invalid_argument("cp(T) must be > 0 on [T_min, T_max]");
  }
}

double battery_rhs(double energy_j, double power_in_w, double power_out_w,
                   const BatteryParams& params) {
  check_flows(power_in_w, power_out_w);
  return -params.self_discharge_per_s * energy_j +
         params.charge_efficiency * power_in_w -
         power_out_w / params.discharge_efficiency;
}

ClampedStep step_battery(double energy_j, double power_in_w, double power_out_w,
                         double dt_s, const BatteryParams& params) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
  double next = energy_j + dt_s * battery_rhs(energy_j, power_in_w, power_out_w, params);
  return clamp_step(next, params.energy_min_j, params.energy_max_j);
}

double thermal_rhs(double temp_k, double power_in_w, double heat_out_w,
                   const ThermalParams& params) {
  check_flows(power_in_w, heat_out_w);
  double numerator = params.charge_efficiency * power_in_w -
                     params.heat_loss_w_per_k * (temp_k - params.ambient_k) - heat_out_w;
  return numerator / (params.mass_kg * params.specific_heat(temp_k));
}

ClampedStep step_thermal(double temp_k, double power_in_w, double heat_out_w,
                         double dt_s, const ThermalParams& params) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
  double next = temp_k + dt_s * thermal_rhs(temp_k, power_in_w, heat_out_w, params);
  return clamp_step(next, params.temp_min_k, params.temp_max_k);
}

double specific_storage_capacity(const ThermalParams& params) {
  if (!(params.temp_min_k < params.temp_max_k)) {
    throw std::invalid_argument("need T_min < T_max");
  }
  double dt = params.temp_max_k - params.temp_min_k;
  double sq = params.temp_max_k * params.temp_max_k - params.temp_min_k * params.temp_min_k;
  return params.cp_const * dt + 0.5 * params.cp_slope * sq;
}

}  // namespace hyplant
