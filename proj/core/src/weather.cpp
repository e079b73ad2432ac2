#include "hyplant/weather.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hyplant/csv.hpp"
#include "hyplant/random_stream.hpp"

namespace hyplant {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCloudEps = 1e-9;
constexpr double kSecondsPerHour = 3600.0;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("non-finite ") + what);
  }
}

/// Legendre polynomial of degree k on [-1,1], by the Bonnet recurrence.
double legendre(int degree, double x) {
  double prev = 1.0;  // L_0
  double cur = x;     // L_1
  if (degree == 0) return prev;
  for (int n = 1; n < degree; ++n) {
    double next = ((2 * n + 1) * x * cur - n * prev) / (n + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

void WindParams::validate() const {
  if (!(turbulence_length_m > 0.0)) throw std::invalid_argument("turbulence length must be > 0");
  if (!(turbulence_intensity > 0.0)) throw std::invalid_argument("turbulence intensity must be > 0");
  if (!(mean_diffusion >= 0.0)) throw std::invalid_argument("mean wind diffusion must be >= 0");
}

void CloudParams::validate() const {
  if (!(reversion_rate >= 0.0)) throw std::invalid_argument("cloud reversion rate must be >= 0");
  if (!(diffusion >= 0.0)) throw std::invalid_argument("cloud diffusion must be >= 0");
}

WindState step_wind(const WindState& state, const WindParams& params, double dt_s,
                    double dw1, double dw2) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
  require_finite(state.mean_speed, "mean wind speed");
  require_finite(state.turbulent_speed, "turbulent wind speed");
  require_finite(dw1, "wind noise increment");
  require_finite(dw2, "wind noise increment");

  double v_m = state.mean_speed;
  double drift = -(kPi * v_m / (2.0 * params.turbulence_length_m)) * state.turbulent_speed;
  double diffusion = std::sqrt(kPi * v_m * v_m * v_m *
                               params.turbulence_intensity * params.turbulence_intensity /
                               params.turbulence_length_m);

  WindState next;
  next.turbulent_speed = state.turbulent_speed + drift * dt_s + diffusion * dw1;
  if (params.fixed_mean_speed) {
    next.mean_speed = *params.fixed_mean_speed;
  } else {
    next.mean_speed = std::max(v_m + params.mean_diffusion * dw2, 0.0);
  }
  return next;
}

double cloud_mean(double kappa, const CloudParams& params) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument("cloud cover must lie in [0,1]");
  }
  if (params.fixed_mean) return *params.fixed_mean;
  // Degrees 1..7 on the standard Legendre domain, reached by x = 2k - 1.
  double x = 2.0 * kappa - 1.0;
  double p7 = 0.0;
  for (int k = 1; k <= 7; ++k) {
    p7 += params.legendre_coeffs[static_cast<std::size_t>(k - 1)] * legendre(k, x);
  }
  // Logistic written via exp(-|p7|) so large |p7| cannot overflow; the
  // result is kept strictly inside (0,1) even where the logistic would
  // round to an endpoint in double precision.
  double mu;
  if (p7 >= 0.0) {
    mu = 1.0 / (1.0 + std::exp(-p7));
  } else {
    double e = std::exp(p7);
    mu = e / (1.0 + e);
  }
  return std::clamp(mu, 1e-12, 1.0 - 1e-12);
}

double step_cloud(double kappa, const CloudParams& params, double dt_s, double dw) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument("cloud cover must lie in [0,1]");
  }
  if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
  require_finite(dw, "cloud noise increment");

  // Rates are per hour; rescale the step and the increment accordingly.
  double dt_h = dt_s / kSecondsPerHour;
  double dw_h = dw / std::sqrt(kSecondsPerHour);

  double spread = kappa * (1.0 - kappa);
  double theta = params.reversion_rate * std::sqrt(std::max(spread, 0.0));
  double mu = cloud_mean(kappa, params);
  double next = kappa + theta * (mu - kappa) * dt_h + params.diffusion * spread * dw_h;
  return std::clamp(next, kCloudEps, 1.0 - kCloudEps);
}

double to_okta(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument("cloud cover must lie in [0,1]");
  }
  return 8.0 * kappa;
}

WeatherTrace simulate_weather(const WindParams& wind, const CloudParams& cloud,
                              double initial_mean_wind, double initial_cloud,
                              double horizon_s, double dt_s, std::uint64_t seed) {
  wind.validate();
  cloud.validate();
  if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (horizon_s < 0.0) throw std::invalid_argument("horizon must be >= 0");
  double steps_real = horizon_s / dt_s;
  auto steps = static_cast<std::uint64_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * std::max(1.0, steps_real)) {
    throw std::invalid_argument("dt must divide horizon");
  }
  if (steps > 100'000'000ull) throw std::invalid_argument("horizon/dt too large");

  RandomStream rng(seed);
  WeatherTrace trace;
  trace.time_s.reserve(steps + 1);
  trace.mean_wind.reserve(steps + 1);
  trace.turbulent_wind.reserve(steps + 1);
  trace.wind_speed.reserve(steps + 1);
  trace.cloud_cover.reserve(steps + 1);
  trace.okta.reserve(steps + 1);

  WindState w{wind.fixed_mean_speed.value_or(initial_mean_wind), 0.0};
  double kappa = std::clamp(initial_cloud, kCloudEps, 1.0 - kCloudEps);

  auto record = [&](double t) {
    trace.time_s.push_back(t);
    trace.mean_wind.push_back(w.mean_speed);
    trace.turbulent_wind.push_back(w.turbulent_speed);
    trace.wind_speed.push_back(w.total());
    trace.cloud_cover.push_back(kappa);
    trace.okta.push_back(to_okta(kappa));
  };

  // The turbulence OU relaxes in ~2L/(pi v_m) seconds (about 11 s at
  // 10 m/s), so an explicit step at the trace spacing would be unstable.
  // Integrate on <= 1 s substeps and record every dt_s.
  auto substeps = static_cast<std::uint64_t>(std::ceil(dt_s));
  double dt_sub = dt_s / static_cast<double>(substeps);

  record(0.0);
  for (std::uint64_t k = 0; k < steps; ++k) {
    for (std::uint64_t s = 0; s < substeps; ++s) {
      double dw1 = rng.wiener(dt_sub);
      double dw2 = rng.wiener(dt_sub);
      double dw3 = rng.wiener(dt_sub);
      w = step_wind(w, wind, dt_sub, dw1, dw2);
      kappa = step_cloud(kappa, cloud, dt_sub, dw3);
    }
    record(static_cast<double>(k + 1) * dt_s);
  }
  return trace;
}

void write_weather_csv(const WeatherTrace& trace, const std::filesystem::path& path) {
  CsvWriter csv(path, {"t_s", "v_m", "v_t", "v", "kappa", "okta"});
  for (std::size_t i = 0; i < trace.samples(); ++i) {
    csv.row({trace.time_s[i], trace.mean_wind[i], trace.turbulent_wind[i],
             trace.wind_speed[i], trace.cloud_cover[i], trace.okta[i]});
  }
}

}  // namespace hyplant
