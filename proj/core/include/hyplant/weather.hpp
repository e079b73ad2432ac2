#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace hyplant {

/// Wind speed model: v(t) = v_m(t) + v_t(t) with
///   dv_t = -(pi v_m / 2L) v_t dt + sqrt(pi v_m^3 t_i^2 / L) dW1
///   dv_m = sigma2 dW2
struct WindParams {
  double turbulence_length_m = 170.1;
  double turbulence_intensity = 0.2;
  double mean_diffusion = 0.0816496580927726;  // sqrt(4/600), m s^-3/2
  /// When set, the mean wind is pinned to this value instead of random-walking.
  std::optional<double> fixed_mean_speed;

  void validate() const;
};

struct WindState {
  double mean_speed = 10.0;       // v_m, m/s
  double turbulent_speed = 0.0;   // v_t, m/s

  /// Total wind speed, floored at zero before use downstream.
  double total() const { return mean_speed + turbulent_speed > 0.0 ? mean_speed + turbulent_speed : 0.0; }
};

/// Mean-reverting cloud cover on [0,1]:
///   dk = theta(k) [mu(k) - k] dt + sigma k (1-k) dW
/// with theta(k) = theta_tilde sqrt(k(1-k)) and mu(k) a logistic of a
/// degree-1..7 Legendre combination. Rates are per hour; steps take dt in
/// seconds and rescale internally.
struct CloudParams {
  double reversion_rate = 0.187;  // theta_tilde, 1/h
  double diffusion = 0.835;       // sigma, 1/sqrt(h)
  std::array<double, 7> legendre_coeffs = {-53.1, 14.6, -42.3, 8.8, -58.1, -30.3, -45.7};
  /// When set, mu(k) is held at this value instead of the Legendre logistic.
  std::optional<double> fixed_mean;

  void validate() const;
};

/// One Euler-Maruyama step of the wind SDE pair. dw1, dw2 are Wiener
/// increments ~ N(0, dt). The mean wind is clamped at zero.
WindState step_wind(const WindState& state, const WindParams& params, double dt_s,
                    double dw1, double dw2);

/// Reversion target mu(kappa), strictly inside (0,1).
double cloud_mean(double kappa, const CloudParams& params);

/// One Euler-Maruyama step of the cloud SDE. dw ~ N(0, dt). The result is
/// clamped to [1e-9, 1 - 1e-9] so the sqrt drift stays real.
double step_cloud(double kappa, const CloudParams& params, double dt_s, double dw);

/// Continuous Okta scale: 0 = clear sky, 8 = overcast.
double to_okta(double kappa);

struct WeatherTrace {
  std::vector<double> time_s;
  std::vector<double> mean_wind;
  std::vector<double> turbulent_wind;
  std::vector<double> wind_speed;   // max(v_m + v_t, 0)
  std::vector<double> cloud_cover;  // kappa in [0,1]
  std::vector<double> okta;

  std::size_t samples() const { return time_s.size(); }
};

/// Simulates wind and cloud jointly on a fixed grid of horizon/dt steps
/// (horizon/dt + 1 samples including t0). Deterministic per seed.
WeatherTrace simulate_weather(const WindParams& wind, const CloudParams& cloud,
                              double initial_mean_wind, double initial_cloud,
                              double horizon_s, double dt_s, std::uint64_t seed);

/// Columns: t_s,v_m,v_t,v,kappa,okta
void write_weather_csv(const WeatherTrace& trace, const std::filesystem::path& path);

}  // namespace hyplant
