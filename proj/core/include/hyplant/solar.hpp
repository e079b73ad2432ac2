#pragma once

#include <array>
#include <filesystem>
#include <vector>

namespace hyplant {

struct SolarSite {
  double latitude_rad = 0.9721;  // 55.7 deg N
  double longitude_rad = 0.2191; // 12.55 deg E
  int day_of_year = 172;
  double utc_offset_h = 1.0;

  void validate() const;
};

/// Direct/diffuse radiation model parameters. The okta-indexed noise
/// tables hold variances; entries are interpolated at continuous okta.
struct RadiationParams {
  // direct block
  double direct_clear_a = 842.3;   // a_N, W/m^2
  double direct_clear_b = 0.0614;  // b_N, per degree of elevation
  double direct_noise_gain = 1.0430;   // r_N
  double direct_logistic_center = 4.6368;  // alpha_N, okta
  double direct_season_base = 1.1354;      // a'
  double direct_season_amp = 0.1965;       // b'
  double direct_season_phase = -0.2571;    // c'
  // diffuse block
  double diffuse_clear_a = 161.1;  // a_D
  double diffuse_clear_b = 0.0333; // b_D, per degree
  double diffuse_clear_c = 3.68;   // c_D
  double diffuse_a0_base = 0.7067;   // r_1
  double diffuse_a0_amp = -0.2456;   // r_2
  double diffuse_a0_phase = 0.5625;  // r_3
  double diffuse_a1_base = 0.1946;   // k_1
  double diffuse_a1_amp = 0.1549;    // k_2
  double diffuse_a1_phase = 0.6034;  // k_3
  double diffuse_a2 = 6.7033;        // a_2
  double diffuse_shape = 2.2993;     // alpha_D
  double diffuse_noise_gain = 1.0170;  // r_D
  // okta-indexed noise variances (source tables are not public; constants
  // by default, overridable in config)
  std::array<double, 9> direct_noise_var_by_okta{0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05};
  std::array<double, 9> diffuse_noise_var_by_okta{0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05};
  /// Below this elevation all radiation is zero and the 1/sin^2(h) noise
  /// factor is frozen, so variance stays bounded at sunrise/sunset.
  double min_elevation_rad = 0.08726646259971647;  // 5 deg

  void validate() const;
};

struct PvParams {
  double area_m2 = 30000.0;
  double efficiency = 0.2;

  void validate() const;
};

/// Sun elevation above the horizon (rad) at the given second of day.
/// Negative at night.
double sun_elevation(const SolarSite& site, double seconds_of_day);

/// Clear-sky direct radiation a_N (1 - exp(-b_N h_deg)); zero for h <= 0.
double clear_sky_direct(double elevation_rad, const RadiationParams& params);

/// Clear-sky diffuse radiation c_D + a_D (1 - exp(-b_D h_deg)); zero for h <= 0.
double clear_sky_diffuse(double elevation_rad, const RadiationParams& params);

/// Direct radiation at continuous okta. dw ~ N(0, dt) carries the noise;
/// pass 0 for the deterministic part. Clipped to [0, 1.2 * clear-sky].
double direct_radiation(double okta, double elevation_rad, int day_of_year,
                        const RadiationParams& params, double dw);

/// Diffuse radiation at continuous okta, clipped at 0.
double diffuse_radiation(double okta, double elevation_rad, int day_of_year,
                         const RadiationParams& params, double dw);

/// I_G = I_N sin(h) + I_D, floored at 0.
double global_radiation(double direct, double diffuse, double elevation_rad);

/// P_s = eta_s A_s I_G.
double pv_power(double global, const PvParams& params);

struct IrradianceTrace {
  std::vector<double> time_s;
  std::vector<double> elevation_rad;
  std::vector<double> direct;
  std::vector<double> diffuse;
  std::vector<double> global;
  std::vector<double> pv_power_w;

  std::size_t samples() const { return time_s.size(); }
};

/// Columns: t_s,h_rad,I_N,I_D,I_G,P_s
void write_irradiance_csv(const IrradianceTrace& trace, const std::filesystem::path& path);

}  // namespace hyplant
