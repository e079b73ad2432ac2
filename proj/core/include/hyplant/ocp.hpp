#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "hyplant/hydrogen.hpp"
#include "hyplant/nlp.hpp"
#include "hyplant/storage.hpp"

namespace hyplant {

/// Everything the dispatch problem needs to know about the plant hardware.
struct PlantModel {
  BatteryParams battery;
  ThermalParams thermal;
  ElectrolyzerParams electrolyzer;
  TankParams tank;
  FuelCellParams fuel_cell;
  double steam_efficiency = 0.4;  // heat -> electricity via the steam turbine

  void validate() const;
};

/// Controls per interval. The first eight are the manipulated variables of
/// the continuous problem; d_b, d_t, d_H2 are the free withdrawal splits
/// it references, and s_d is the demand slack of the softened withdrawal
/// balance.
enum Control : int {
  kPowerToBattery = 0,   // P_b,in
  kPowerToThermal,       // P_t,in
  kPowerToElectrolyzer,  // P_el
  kBatterySell,          // P_b,out
  kBatteryBuy,           // P_b,bo
  kHeatSell,             // Q_t,out
  kHydrogenSell,         // f_H2,out (mol/s)
  kStackCurrent,         // I (A)
  kBatteryToDemand,      // d_b
  kThermalToDemand,      // d_t
  kHydrogenToFuelCell,   // d_H2 (mol/s)
  kDemandSlack,          // s_d
  kNumControls
};

/// Per-sample exogenous inputs: prices and the surplus/deficit split of
/// production against demand. Surplus and deficit are mutually exclusive
/// per sample.
struct DisturbanceTrajectory {
  std::vector<double> price_electricity_per_j;  // c_e
  std::vector<double> price_heat_per_j;         // c_h
  std::vector<double> price_hydrogen_per_kg;    // c_H2
  std::vector<double> surplus_w;                // P_sto
  std::vector<double> deficit_w;                // d_sto

  std::size_t samples() const { return surplus_w.size(); }
  void validate() const;
};

struct PriceSeries {
  std::vector<double> electricity_per_j;
  std::vector<double> heat_per_j;
  std::vector<double> hydrogen_per_kg;
};

/// P_sto = max(P_tot - d_el, 0), d_sto = max(d_el - P_tot, 0).
DisturbanceTrajectory build_disturbances(std::span<const double> production_w,
                                         std::span<const double> demand_w,
                                         const PriceSeries& prices);

struct PriceGenConfig {
  double electricity_mean_per_mwh = 50.0;
  double electricity_std_per_mwh = 10.0;
  double heat_mean_per_mwh = 20.0;
  double heat_std_per_mwh = 4.0;
  double hydrogen_mean_per_kg = 4.0;
  double hydrogen_std_per_kg = 0.8;
  double hold_interval_s = 3600.0;  // one draw per interval, held constant
};

/// Gaussian draws per hold interval, floored at 0, expanded to the sample
/// grid. Deterministic per seed.
PriceSeries generate_prices(const PriceGenConfig& cfg, std::size_t samples, double dt_sample_s,
                            std::uint64_t seed);

/// Replaces surplus/deficit inside each control interval by their interval
/// means, so the per-sample dispatch equalities are consistent with
/// zero-order-hold controls. Interval totals of surplus and deficit energy
/// are preserved.
DisturbanceTrajectory average_over_control_intervals(const DisturbanceTrajectory& d,
                                                     std::size_t samples_per_control);

struct OcpConfig {
  double t0_s = 0.0;
  double tf_s = 259200.0;       // 3 days
  double dt_sample_s = 600.0;   // 10 min
  double dt_control_s = 3600.0; // 1 h
  std::array<double, 3> state_min{0.0, 533.0, 0.0};             // E_b, T, n_H2
  std::array<double, 3> state_max{1.8e10, 838.0, 496032.0};
  std::array<double, kNumControls> control_min{};  // all zero
  std::array<double, kNumControls> control_max{
      5e6, 12e6, 2.4e6, 5e6, 2e6, 12e6, 20.0, 1.1e3, 5e6, 5e6, 30.0, 2e7};
  /// Penalty on the demand slack, currency/J. <= 0 means "derive as
  /// 10 x the maximum electricity price".
  double slack_penalty_per_j = -1.0;
  /// Terminal valuation (currency/J) of usable battery energy, steam-
  /// convertible heat and fuel-cell-convertible hydrogen; unset means
  /// "mean electricity price" for all three.
  std::optional<std::array<double, 3>> terminal_value_per_j;

  void validate() const;
};

struct OcpTrajectories {
  std::vector<std::array<double, 3>> states;                 // samples + 1
  std::vector<std::array<double, kNumControls>> controls;    // control intervals
};

/// Index bookkeeping for the flattened NLP plus the effective economic
/// coefficients the transcription settled on.
struct OcpLayout {
  std::size_t num_samples = 0;
  std::size_t num_intervals = 0;
  std::size_t samples_per_control = 1;
  double dt_sample_s = 600.0;
  double slack_penalty_per_j = 0.0;
  std::array<double, 3> terminal_value_per_j{};
  double fuel_cell_w_per_mol = 0.0;  // d_fc = this * d_H2

  std::size_t control_index(std::size_t interval, int control) const {
    return interval * kNumControls + static_cast<std::size_t>(control);
  }
  std::size_t state_index(std::size_t sample, int component) const {
    return num_intervals * kNumControls + sample * 3 + static_cast<std::size_t>(component);
  }
  std::size_t num_vars() const { return num_intervals * kNumControls + (num_samples + 1) * 3; }
  std::size_t interval_of_sample(std::size_t sample) const { return sample / samples_per_control; }

  OcpTrajectories unpack(std::span<const double> point) const;
};

struct TranscribedOcp {
  NlpProblem problem;
  OcpLayout layout;
};

/// Direct transcription: piecewise-constant controls per control interval,
/// states at every sample, explicit-Euler defect equalities per sample,
/// per-sample dispatch and (slack-softened) withdrawal balances, and one
/// stack-power consistency equality per control interval.
TranscribedOcp transcribe(const PlantModel& model, const OcpConfig& cfg,
                          const DisturbanceTrajectory& d, const std::array<double, 3>& x0);

/// Economic objective (maximization sense): revenue from sold electricity,
/// heat and hydrogen, minus bought electricity and the slack penalty, plus
/// the terminal valuation of what is left in storage.
double ocp_objective(const OcpTrajectories& traj, const DisturbanceTrajectory& d,
                     const OcpLayout& layout, const PlantModel& model);

struct OcpSolution {
  OcpTrajectories trajectories;
  double profit = 0.0;
  NlpSolution nlp;
};

OcpSolution solve_ocp(const TranscribedOcp& ocp, const DisturbanceTrajectory& d,
                      const PlantModel& model, const NlpOptions& options = {});

/// Forward simulation with the solved controls and the same Euler scheme,
/// through the clamped storage steppers. Reports how far each sample's
/// demand remained uncovered and how far any state strayed from its box.
struct OpenLoopResult {
  OcpTrajectories trajectories;     // re-integrated states, same controls
  std::vector<double> coverage_residual_w;  // d_sto - (d_b + d_t + d_fc) per sample
  std::vector<double> tank_pressure_pa;     // per sample
  std::vector<bool> battery_saturated;
  std::vector<bool> thermal_saturated;
  std::vector<bool> tank_saturated;
  double max_state_bound_violation = 0.0;   // relative to each state's scale
};

OpenLoopResult simulate_open_loop(const PlantModel& model, const OcpConfig& cfg,
                                  const OcpLayout& layout,
                                  const std::vector<std::array<double, kNumControls>>& controls,
                                  const DisturbanceTrajectory& d, const std::array<double, 3>& x0);

/// Columns: t_s,E_b,T,n_H2,P_b_in,P_t_in,P_el,P_b_out,P_b_bo,Q_t_out,
/// f_H2_out,I,d_b,d_t,d_fc,s_d
void write_solution_csv(const OcpLayout& layout, const OcpTrajectories& traj,
                        const std::filesystem::path& path);

}  // namespace hyplant
