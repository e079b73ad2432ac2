#pragma once

#include <filesystem>
#include <span>

#include "hyplant/storage.hpp"  // ClampedStep

namespace hyplant {

/// Water-splitting thermodynamics at standard conditions.
struct ThermoConstants {
  double enthalpy_j_mol = 285800.0;  // dH0
  double gibbs_j_mol = 237200.0;     // dG0
  double electrons = 2.0;            // z
  double faraday_c_mol = 96485.0;    // F

  void validate() const;
};

/// U_rev = dG / (zF); 1.229 V at standard conditions.
double reversible_voltage(const ThermoConstants& c);

/// U_tn = dH / (zF); 1.481 V at standard conditions.
double thermoneutral_voltage(const ThermoConstants& c);

/// Alkaline electrolyzer, Ulleberg-style U-I model. The empirical r/s/t
/// coefficients take the current density in A/cm2 and the temperature in
/// degC; the Faraday-efficiency f1 compares against mA/cm2.
struct ElectrolyzerParams {
  double ohmic_r1 = 0.8;        // Ohm cm^2
  double ohmic_r2 = -0.00763;   // Ohm cm^2 / degC
  double activation_s = 0.1795; // V
  double activation_t1 = 20.0;    // cm^2/A
  double activation_t2 = 0.1;     // cm^2 degC / A
  double activation_t3 = 3.5e5;   // cm^2 degC^2 / A
  double faraday_f1 = 250.0;    // mA^2 cm^-4, at 80 degC
  double faraday_f2 = 0.980;    // -, at 80 degC
  double cell_area_cm2 = 2500.0;
  int cells_in_series = 1526;
  double temperature_c = 80.0;  // held constant by the cooling loop
  double rated_power_w = 2.4e6;
  ThermoConstants thermo;

  void validate() const;
};

/// U_cell = U_rev + U_ohm + U_act (concentration overvoltage omitted;
/// negligible for alkaline cells).
double cell_voltage(double current_a, const ElectrolyzerParams& p);

/// P_el = I n_c U_cell(I); strictly increasing in I.
double stack_power(double current_a, const ElectrolyzerParams& p);

/// Inverse of stack_power by bracketed bisection (unique root: the stack
/// power is strictly increasing); |P(I) - P| <= 1e-9 max(P, 1).
double current_from_power(double power_w, const ElectrolyzerParams& p);

/// eta_F = (i^2 / (f1 + i^2)) f2 with i = current density in mA/cm2.
double faraday_efficiency(double current_a, const ElectrolyzerParams& p);

/// f_H2 = n_c eta_F I / (zF), mol/s.
double hydrogen_rate(double current_a, const ElectrolyzerParams& p);

/// Stoichiometry: f_O2 = f_H2 / 2.
double oxygen_rate(double current_a, const ElectrolyzerParams& p);

/// Q_gen = n_c (U_cell - U_tn) I; the overvoltage heat a cooling loop
/// has to remove.
double generated_heat(double current_a, const ElectrolyzerParams& p);

struct CriticalConstants {
  double temp_k = 33.19;      // T_c of H2
  double pressure_pa = 1.313e6;
  double acentric = -0.216;
};

struct TankParams {
  double volume_m3 = 30.0;
  double temperature_k = 298.15;
  double capacity_mol = 496032.0;  // 1000 kg of H2
  CriticalConstants critical;

  void validate() const;
};

/// Mass balance n' = n + dt (f_in - f_out), clamped to [0, capacity].
ClampedStep tank_step(double stored_mol, double flow_in_mol_s, double flow_out_mol_s,
                      double dt_s, const TankParams& p);

/// Peng-Robinson pressure, explicit in molar volume:
///   P = RT/(Vm - b) - a alpha(T) / (Vm^2 + 2 b Vm - b^2)
double peng_robinson_pressure(double molar_volume_m3_mol, double temp_k,
                              const CriticalConstants& c);

/// Tank pressure at the stored amount; requires n > 0 and Vm > b.
double tank_pressure(double stored_mol, const TankParams& p);

struct FuelCellParams {
  double efficiency = 0.6;
  double molar_mass_kg_mol = 0.002016;      // MM_H2
  double heating_value_j_kg = 1.418e8;      // 141800 kJ/kg (HHV)

  void validate() const;
};

/// d_fc = HHV * eta_fc * MM_H2 * d_H2, W from mol/s.
double fuel_cell_power(double h2_mol_s, const FuelCellParams& p);

/// Columns: I_A,U_cell_V,P_el_W,eta_F,f_H2_mol_s,Q_gen_W
void write_electrolyzer_curve_csv(const ElectrolyzerParams& p, std::span<const double> currents_a,
                                  const std::filesystem::path& path);

}  // namespace hyplant
