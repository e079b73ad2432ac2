#include "hyplant/solar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hyplant/csv.hpp"

namespace hyplant {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegPerRad = 180.0 / kPi;

double season_angle(int day_of_year) { return 2.0 * kPi * day_of_year / 365.0; }

/// Linear interpolation of an okta-indexed table at continuous okta.
double okta_table(const std::array<double, 9>& table, double okta) {
  double clamped = std::clamp(okta, 0.0, 8.0);
  auto lo = static_cast<std::size_t>(clamped);
  if (lo >= 8) return table[8];
  double frac = clamped - static_cast<double>(lo);
  return table[lo] * (1.0 - frac) + table[lo + 1] * frac;
}

void check_okta(double okta) {
  if (!(okta >= 0.0 && okta <= 8.0)) {
    throw std::invalid_argument("okta must lie in [0,8]");
  }
}

}  // namespace

void SolarSite::validate() const {
  if (!(std::abs(latitude_rad) <= kPi / 2.0)) {
    throw std::invalid_argument("latitude must lie in [-pi/2, pi/2]");
  }
  if (day_of_year < 1 || day_of_year > 365) {
    throw std::invalid_argument("day of year must lie in 1..365");
  }
}

void RadiationParams::validate() const {
  if (!(direct_clear_a > 0.0 && direct_clear_b > 0.0)) {
    throw std::invalid_argument("direct clear-sky coefficients must be > 0");
  }
  if (!(diffuse_clear_a > 0.0 && diffuse_clear_b > 0.0)) {
    throw std::invalid_argument("diffuse clear-sky coefficients must be > 0");
  }
  for (double v : direct_noise_var_by_okta) {
    if (!(v >= 0.0)) throw std::invalid_argument("noise variance entries must be >= 0");
  }
  for (double v : diffuse_noise_var_by_okta) {
    if (!(v >= 0.0)) throw std::invalid_argument("noise variance entries must be >= 0");
  }
}

void PvParams::validate() const {
  if (!(area_m2 >= 0.0)) throw std::invalid_argument("PV area must be >= 0");
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("PV efficiency must lie in [0,1]");
  }
}

double sun_elevation(const SolarSite& site, double seconds_of_day) {
  if (!(seconds_of_day >= 0.0 && seconds_of_day < 86400.0)) {
    throw std::invalid_argument("seconds_of_day must lie in [0, 86400)");
  }
  double declination = (23.45 / kDegPerRad) * std::sin(season_angle(284 + site.day_of_year));
  // Solar time: local clock shifted by the longitude vs time-zone meridian.
  double solar_s = seconds_of_day +
                   (12.0 * site.longitude_rad / kPi - site.utc_offset_h) * 3600.0;
  double hour_angle = (solar_s - 43200.0) * (2.0 * kPi / 86400.0);
  double s = std::sin(site.latitude_rad) * std::sin(declination) +
             std::cos(site.latitude_rad) * std::cos(declination) * std::cos(hour_angle);
  return std::asin(std::clamp(s, -1.0, 1.0));
}

double clear_sky_direct(double elevation_rad, const RadiationParams& params) {
  if (elevation_rad <= 0.0) return 0.0;
  return params.direct_clear_a * (1.0 - std::exp(-params.direct_clear_b * elevation_rad * kDegPerRad));
}

double clear_sky_diffuse(double elevation_rad, const RadiationParams& params) {
  if (elevation_rad <= 0.0) return 0.0;
  return params.diffuse_clear_c +
         params.diffuse_clear_a * (1.0 - std::exp(-params.diffuse_clear_b * elevation_rad * kDegPerRad));
}

double direct_radiation(double okta, double elevation_rad, int day_of_year,
                        const RadiationParams& params, double dw) {
  check_okta(okta);
  if (elevation_rad <= params.min_elevation_rad) return 0.0;

  double clear = clear_sky_direct(elevation_rad, params);
  double season = params.direct_season_base +
                  params.direct_season_amp * std::cos(season_angle(day_of_year) + params.direct_season_phase);
  double fraction = season / (1.0 + std::exp(okta - params.direct_logistic_center));
  // Noise std per unit Wiener increment; the 1/(sin(h) I_0N) structure makes
  // the I_N sin(h) contribution's variance independent of elevation.
  double sin_h = std::max(std::sin(elevation_rad), std::sin(params.min_elevation_rad));
  double noise_std = params.direct_noise_gain *
                     std::sqrt(okta_table(params.diffuse_noise_var_by_okta, okta)) /
                     (sin_h * clear);
  double value = clear * (fraction + noise_std * dw);
  return std::clamp(value, 0.0, 1.2 * clear);
}

double diffuse_radiation(double okta, double elevation_rad, int day_of_year,
                         const RadiationParams& params, double dw) {
  check_okta(okta);
  if (elevation_rad <= params.min_elevation_rad) return 0.0;

  double clear = clear_sky_diffuse(elevation_rad, params);
  double a0 = params.diffuse_a0_base +
              params.diffuse_a0_amp * std::cos(season_angle(day_of_year) + params.diffuse_a0_phase);
  double a1 = params.diffuse_a1_base +
              params.diffuse_a1_amp * std::cos(season_angle(day_of_year) + params.diffuse_a1_phase);
  double shade = okta / 8.0;
  double fraction = a0 + a1 * (1.0 - shade) +
                    params.diffuse_a2 * std::pow(shade, params.diffuse_shape) * (1.0 - shade);
  double noise_std = params.diffuse_noise_gain *
                     std::sqrt(okta_table(params.direct_noise_var_by_okta, okta));
  double value = clear * (fraction + noise_std * dw);
  return std::max(value, 0.0);
}

double global_radiation(double direct, double diffuse, double elevation_rad) {
  if (!(direct >= 0.0 && diffuse >= 0.0)) {
    throw std::invalid_argument("radiation components must be >= 0");
  }
  return std::max(direct * std::sin(elevation_rad) + diffuse, 0.0);
}

double pv_power(double global, const PvParams& params) {
  if (!(global >= 0.0)) throw std::invalid_argument("global radiation must be >= 0");
  return params.efficiency * params.area_m2 * global;
}

void write_irradiance_csv(const IrradianceTrace& trace, const std::filesystem::path& path) {
  CsvWriter csv(path, {"t_s", "h_rad", "I_N", "I_D", "I_G", "P_s"});
  for (std::size_t i = 0; i < trace.samples(); ++i) {
    csv.row({trace.time_s[i], trace.elevation_rad[i], trace.direct[i], trace.diffuse[i],
             trace.global[i], trace.pv_power_w[i]});
  }
}

}  // namespace hyplant
