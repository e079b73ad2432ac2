#include "hyplant/hydrogen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyplant/csv.hpp"

namespace hyplant {

namespace {

constexpr double kGasConstant = 8.314462618;  // J/(mol K)

void check_current(double current_a) {
  if (!(current_a >= 0.0) || !std::isfinite(current_a)) {
    throw std::invalid_argument("current must be finite and >= 0");
  }
}

}  // namespace

void ThermoConstants::validate() const {
  if (!(enthalpy_j_mol > gibbs_j_mol && gibbs_j_mol > 0.0)) {
    throw std::invalid_argument("need dH > dG > 0");
  }
}

void ElectrolyzerParams::validate() const {
  thermo.validate();
  if (!(cell_area_cm2 > 0.0)) throw std::invalid_argument("cell area must be > 0");
  if (cells_in_series < 1) throw std::invalid_argument("need at least one cell");
  if (!(faraday_f2 > 0.0 && faraday_f2 <= 1.0)) {
    throw std::invalid_argument("f2 must lie in (0,1]");
  }
  if (!(faraday_f1 >= 0.0)) throw std::invalid_argument("f1 must be >= 0");
  if (!(rated_power_w > 0.0)) throw std::invalid_argument("rated power must be > 0");
}

double reversible_voltage(const ThermoConstants& c) {
  return c.gibbs_j_mol / (c.electrons * c.faraday_c_mol);
}

double thermoneutral_voltage(const ThermoConstants& c) {
  return c.enthalpy_j_mol / (c.electrons * c.faraday_c_mol);
}

double cell_voltage(double current_a, const ElectrolyzerParams& p) {
  check_current(current_a);
  double density = current_a / p.cell_area_cm2;  // A/cm^2
  double ohmic = (p.ohmic_r1 + p.ohmic_r2 * p.temperature_c) * density;
  double t_coef = p.activation_t1 + p.activation_t2 / p.temperature_c +
                  p.activation_t3 / (p.temperature_c * p.temperature_c);
  double activation = p.activation_s * std::log10(t_coef * density + 1.0);
  return reversible_voltage(p.thermo) + ohmic + activation;
}

double stack_power(double current_a, const ElectrolyzerParams& p) {
  return current_a * p.cells_in_series * cell_voltage(current_a, p);
}

double current_from_power(double power_w, const ElectrolyzerParams& p) {
  if (!(power_w >= 0.0) || !std::isfinite(power_w)) {
    throw std::invalid_argument("power must be finite and >= 0");
  }
  if (power_w == 0.0) return 0.0;

  double tol = 1e-9 * std::max(power_w, 1.0);
  // U_cell >= U_rev makes P / (n_c U_rev) an upper bracket for the current.
  double hi = power_w / (p.cells_in_series * reversible_voltage(p.thermo));
  double lo = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    double err = stack_power(mid, p) - power_w;
    if (std::abs(err) <= tol) return mid;
    (err > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double faraday_efficiency(double current_a, const ElectrolyzerParams& p) {
  check_current(current_a);
  double density_ma = 1000.0 * current_a / p.cell_area_cm2;  // mA/cm^2
  double sq = density_ma * density_ma;
  return sq / (p.faraday_f1 + sq) * p.faraday_f2;
}

double hydrogen_rate(double current_a, const ElectrolyzerParams& p) {
  check_current(current_a);
  return p.cells_in_series * faraday_efficiency(current_a, p) * current_a /
         (p.thermo.electrons * p.thermo.faraday_c_mol);
}

double oxygen_rate(double current_a, const ElectrolyzerParams& p) {
  return 0.5 * hydrogen_rate(current_a, p);
}

double generated_heat(double current_a, const ElectrolyzerParams& p) {
  check_current(current_a);
  return p.cells_in_series * (cell_voltage(current_a, p) - thermoneutral_voltage(p.thermo)) *
         current_a;
}

void TankParams::validate() const {
  if (!(volume_m3 > 0.0)) throw std::invalid_argument("tank volume must be > 0");
  if (!(temperature_k > 0.0)) throw std::invalid_argument("tank temperature must be > 0");
  if (!(capacity_mol > 0.0)) throw std::invalid_argument("tank capacity must be > 0");
}

ClampedStep tank_step(double stored_mol, double flow_in_mol_s, double flow_out_mol_s,
                      double dt_s, const TankParams& p) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(flow_in_mol_s >= 0.0) || !(flow_out_mol_s >= 0.0)) {
    throw std::invalid_argument("tank flows must be >= 0");
  }
  double next = stored_mol + dt_s * (flow_in_mol_s - flow_out_mol_s);
  double clamped = std::clamp(next, 0.0, p.capacity_mol);
  return {clamped, clamped != next};
}

double peng_robinson_pressure(double molar_volume_m3_mol, double temp_k,
                              const CriticalConstants& c) {
  double a = 0.45724 * kGasConstant * kGasConstant * c.temp_k * c.temp_k / c.pressure_pa;
  double b = 0.07780 * kGasConstant * c.temp_k / c.pressure_pa;
  if (!(molar_volume_m3_mol > b)) {
    throw std::invalid_argument("molar volume below covolume: unphysical density");
  }
  double kappa = 0.37464 + 1.54226 * c.acentric - 0.26992 * c.acentric * c.acentric;
  double root = std::sqrt(temp_k / c.temp_k);
  double alpha = (1.0 + kappa * (1.0 - root)) * (1.0 + kappa * (1.0 - root));
  double vm = molar_volume_m3_mol;
  return kGasConstant * temp_k / (vm - b) -
         a * alpha / (vm * vm + 2.0 * b * vm - b * b);
}

double tank_pressure(double stored_mol, const TankParams& p) {
  if (!(stored_mol > 0.0)) throw std::invalid_argument("tank pressure needs n > 0");
  return peng_robinson_pressure(p.volume_m3 / stored_mol, p.temperature_k, p.critical);
}

void FuelCellParams::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("fuel cell efficiency must lie in (0,1]");
  }
  if (!(molar_mass_kg_mol > 0.0) || !(heating_value_j_kg > 0.0)) {
    throw std::invalid_argument("molar mass and heating value must be > 0");
  }
}

double fuel_cell_power(double h2_mol_s, const FuelCellParams& p) {
  if (!(h2_mol_s >= 0.0)) throw std::invalid_argument("hydrogen flow must be >= 0");
  return p.heating_value_j_kg * p.efficiency * p.molar_mass_kg_mol * h2_mol_s;
}

void write_electrolyzer_curve_csv(const ElectrolyzerParams& p, std::span<const double> currents_a,
                                  const std::filesystem::path& path) {
  CsvWriter csv(path, {"I_A", "U_cell_V", "P_el_W", "eta_F", "f_H2_mol_s", "Q_gen_W"});
  for (double current : currents_a) {
    csv.row({current, cell_voltage(current, p), stack_power(current, p),
             faraday_efficiency(current, p), hydrogen_rate(current, p),
             generated_heat(current, p)});
  }
}

}  // namespace hyplant
