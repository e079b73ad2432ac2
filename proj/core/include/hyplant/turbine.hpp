#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace hyplant {

/// Betz limit 16/27; no power coefficient may exceed it.
inline constexpr double kBetzLimit = 16.0 / 27.0;

double rpm_to_rad_s(double rpm);

/// NREL 5MW-class turbine parameters and operating constraints.
struct TurbineParams {
  double air_density = 1.225;          // kg/m^3
  double rotor_radius_m = 62.94;
  double generator_efficiency = 0.944;
  double cut_in_ms = 3.0;
  double rated_ms = 11.4;
  double cut_out_ms = 25.0;
  double rotor_speed_min_rad_s = 0.7225663103256524;  // 6.9 rpm
  double rotor_speed_max_rad_s = 1.2671090369478832;  // 12.1 rpm
  double pitch_min_deg = -5.0;
  double pitch_max_deg = 25.0;
  double rated_power_w = 5e6;  // generator-side rating

  void validate() const;
};

/// Tabulated power coefficient C_P(lambda, pitch) with bilinear
/// interpolation. Queries outside the grid clamp to the boundary; values
/// are floored at 0 on use and must respect the Betz limit at load.
class CpSurface {
 public:
  CpSurface(std::vector<double> lambda_grid, std::vector<double> pitch_grid_deg,
            std::vector<std::vector<double>> values);

  /// Parametric surface sampled onto a dense grid, shipped as the default
  /// because the NREL table is proprietary. Pitch below zero reuses the
  /// zero-pitch column (the parametric form is only calibrated for
  /// non-negative pitch and would breach the Betz limit otherwise).
  static CpSurface default_surface();

  /// CSV layout: first row is an empty cell followed by the lambda grid;
  /// each further row is a pitch value followed by that row of C_P.
  static CpSurface from_csv(const std::filesystem::path& path);
  void to_csv(const std::filesystem::path& path) const;

  double lookup(double lambda, double pitch_deg) const;
  double max_value() const;

  const std::vector<double>& lambda_grid() const { return lambda_grid_; }
  const std::vector<double>& pitch_grid_deg() const { return pitch_grid_; }

 private:
  std::vector<double> lambda_grid_;
  std::vector<double> pitch_grid_;
  std::vector<std::vector<double>> values_;  // values_[pitch][lambda]
};

/// Stationary optimum for one wind speed: argmax of C_P over the pitch box
/// and the lambda box implied by the rotor-speed limits.
struct OperatingPoint {
  double wind_ms = 0.0;
  double pitch_deg = 0.0;          // theta*
  double tip_speed_ratio = 0.0;    // lambda*
  double cp = 0.0;                 // C_P*
  double rotor_speed_rad_s = 0.0;  // Omega*
  double rotor_power_w = 0.0;      // P_r
  double electrical_power_w = 0.0; // P_g = eta_g * P_r
  double rotor_torque_nm = 0.0;    // Q_r = P_r / Omega*
};

/// Available power in the wind, 1/2 rho pi R^2 v^3.
double available_power(double wind_ms, const TurbineParams& params);

/// lambda = R Omega / v. Throws if v <= 0.
double tip_speed_ratio(double rotor_speed_rad_s, double wind_ms, double rotor_radius_m);

/// Grid scan (>= 256 points per axis) plus local refinement over the
/// feasible box. Outside [cut-in, cut-out] returns a zero-power point. At
/// and above rated speed the generator tracks its rating, emulating pitch
/// regulation, so P_g = rated there.
OperatingPoint optimize_stationary(double wind_ms, const TurbineParams& params,
                                   const CpSurface& surface);

std::vector<OperatingPoint> power_curve(const TurbineParams& params, const CpSurface& surface,
                                        std::span<const double> wind_grid);

/// Columns: v,theta_star,lambda_star,cp_star,omega_star_rpm,P_g_W
void write_power_curve_csv(std::span<const OperatingPoint> curve,
                           const std::filesystem::path& path);

}  // namespace hyplant
