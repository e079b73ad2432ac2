#pragma once

namespace hyplant {

struct BatteryParams {
  double self_discharge_per_s = 1e-7;   // alpha_b
  double charge_efficiency = 0.95;      // eta_in
  double discharge_efficiency = 0.95;   // eta_out
  double energy_min_j = 0.0;
  double energy_max_j = 1.8e10;         // 5 MWh

  void validate() const;
};

/// Sensible thermal storage with specific heat affine in temperature:
/// cp(T) = cp_const + cp_slope * T.
struct ThermalParams {
  double mass_kg = 393443.0;
  double cp_const = 1500.0;       // J/(kg K), solar-salt-like
  double cp_slope = 0.0;          // J/(kg K^2)
  double heat_loss_w_per_k = 500.0;  // (UA)_t
  double charge_efficiency = 0.99;   // eta_t,in
  double temp_min_k = 533.0;
  double temp_max_k = 838.0;
  double ambient_k = 288.0;

  double specific_heat(double temp_k) const { return cp_const + cp_slope * temp_k; }
  void validate() const;
};

/// Result of one clamped Euler step; saturated is set iff the raw step
/// left the admissible interval and was clamped back.
struct ClampedStep {
  double value;
  bool saturated;
};

/// dE/dt = -alpha_b E + eta_in P_in - P_out / eta_out. Powers in W.
double battery_rhs(double energy_j, double power_in_w, double power_out_w,
                   const BatteryParams& params);

ClampedStep step_battery(double energy_j, double power_in_w, double power_out_w,
                         double dt_s, const BatteryParams& params);

/// dT/dt = [eta_in P_in - UA (T - T_a) - Q_out] / (m cp(T)).
double thermal_rhs(double temp_k, double power_in_w, double heat_out_w,
                   const ThermalParams& params);

ClampedStep step_thermal(double temp_k, double power_in_w, double heat_out_w,
                         double dt_s, const ThermalParams& params);

/// Specific storage capacity: integral of cp over [T_min, T_max], exact
/// for the affine cp model. J/kg.
double specific_storage_capacity(const ThermalParams& params);

}  // namespace hyplant
