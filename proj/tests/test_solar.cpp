#include "hyplant/solar.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "hyplant/csv.hpp"
#include "hyplant/random_stream.hpp"

namespace hyplant {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

SolarSite site_at(double lat_deg, int day) {
  SolarSite s;
  s.latitude_rad = lat_deg * kDeg;
  s.longitude_rad = 0.0;
  s.utc_offset_h = 0.0;
  s.day_of_year = day;
  return s;
}

TEST(SunElevation, OverheadAtEquatorEquinoxNoon) {
  auto h = sun_elevation(site_at(0.0, 81), 43200.0);
  EXPECT_NEAR(h, kPi / 2.0, 0.02);
}

TEST(SunElevation, NegativeAtLocalMidnight) {
  EXPECT_LT(sun_elevation(site_at(55.7, 172), 0.0), 0.0);
  EXPECT_LT(sun_elevation(site_at(0.0, 81), 0.0), 0.0);
}

TEST(SunElevation, SolsticeNoonMatchesLatitudeGeometry) {
  // Noon elevation = 90 - phi + declination; declination from the same
  // 23.45 sin(2 pi (284 + d) / 365) convention, evaluated independently.
  double decl_deg = 23.45 * std::sin(2.0 * kPi * (284 + 172) / 365.0);
  double expected = (90.0 - 55.7 + decl_deg) * kDeg;
  auto h = sun_elevation(site_at(55.7, 172), 43200.0);
  EXPECT_NEAR(h, expected, 1e-9);
  EXPECT_NEAR(h, 57.7 * kDeg, 0.02);
}

TEST(SunElevation, LongitudeShiftsSolarNoon) {
  SolarSite east = site_at(45.0, 100);
  east.longitude_rad = 15.0 * kDeg;  // one hour east of the UTC meridian
  double h_noon_utc = sun_elevation(east, 43200.0);
  double h_solar_noon = sun_elevation(east, 43200.0 - 3600.0);
  EXPECT_GT(h_noon_utc, 0.0);
  EXPECT_GT(h_solar_noon, h_noon_utc);
}

TEST(ClearSkyDirect, ZeroBelowHorizonAndSaturatesToTableValue) {
  RadiationParams p;
  EXPECT_DOUBLE_EQ(clear_sky_direct(0.0, p), 0.0);
  EXPECT_DOUBLE_EQ(clear_sky_direct(-0.2, p), 0.0);
  double near_zenith = clear_sky_direct(kPi / 2.0, p);
  EXPECT_NEAR(near_zenith / 842.3, 1.0, 0.005);
}

TEST(ClearSkyDirect, HandEvaluatedAtHalfRadian) {
  RadiationParams p;
  // 842.3 (1 - exp(-0.0614 * 28.6479 deg)) evaluated independently.
  double expected = 842.3 * (1.0 - std::exp(-0.0614 * (0.5 / kDeg)));
  EXPECT_NEAR(expected, 697.24, 0.05);
  EXPECT_NEAR(clear_sky_direct(0.5, p), expected, 1e-9);
}

TEST(DirectRadiation, ZeroAtAndBelowMinimumElevation) {
  RadiationParams p;
  EXPECT_DOUBLE_EQ(direct_radiation(3.0, -0.1, 172, p, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(direct_radiation(3.0, 0.03, 172, p, 0.0), 0.0);  // below 5 deg
}

TEST(DirectRadiation, ClearSkyNoiselessMatchesHandFormula) {
  RadiationParams p;
  double h = 0.8;
  // f_N(0) at d_t = 172 with Table values, computed independently.
  double numerator = 1.1354 + 0.1965 * std::cos(2.0 * kPi * 172.0 / 365.0 - 0.2571);
  double f_n = numerator / (1.0 + std::exp(0.0 - 4.6368));
  double expected = clear_sky_direct(h, p) * f_n;
  EXPECT_NEAR(direct_radiation(0.0, h, 172, p, 0.0), expected, 1e-9);
  // exp(-4.6368) is ~0.0097, so f_N is close to its numerator.
  EXPECT_NEAR(f_n, numerator, 0.01);
}

TEST(DirectRadiation, MonotoneNonIncreasingInOkta) {
  RadiationParams p;
  double prev = direct_radiation(0.0, 0.7, 200, p, 0.0);
  for (double okta = 0.5; okta <= 8.0; okta += 0.5) {
    double cur = direct_radiation(okta, 0.7, 200, p, 0.0);
    EXPECT_LE(cur, prev + 1e-12);
    prev = cur;
  }
  EXPECT_LT(direct_radiation(8.0, 0.7, 200, p, 0.0), direct_radiation(0.0, 0.7, 200, p, 0.0));
}

TEST(DirectRadiation, ClippedToClearSkyEnvelope) {
  RadiationParams p;
  double h = 0.5;
  double clear = clear_sky_direct(h, p);
  EXPECT_LE(direct_radiation(0.0, h, 172, p, 1e6), 1.2 * clear);
  EXPECT_GE(direct_radiation(8.0, h, 172, p, -1e6), 0.0);
}

TEST(DiffuseRadiation, OvercastLeavesOnlyTheA0Term) {
  RadiationParams p;
  double h = 0.6;
  int day = 80;
  double a0 = 0.7067 + -0.2456 * std::cos(2.0 * kPi * day / 365.0 + 0.5625);
  double expected = clear_sky_diffuse(h, p) * a0;
  EXPECT_NEAR(diffuse_radiation(8.0, h, day, p, 0.0), expected, 1e-9);
}

TEST(DiffuseRadiation, HandEvaluatedMidCover) {
  RadiationParams p;
  double h = 0.5;
  int day = 1;
  double okta = 4.0;
  double a0 = 0.7067 + -0.2456 * std::cos(2.0 * kPi * day / 365.0 + 0.5625);
  double a1 = 0.1946 + 0.1549 * std::cos(2.0 * kPi * day / 365.0 + 0.6034);
  double shade = okta / 8.0;
  double f_d = a0 + a1 * (1.0 - shade) + 6.7033 * std::pow(shade, 2.2993) * (1.0 - shade);
  double i0d = 3.68 + 161.1 * (1.0 - std::exp(-0.0333 * (h / kDeg)));
  EXPECT_NEAR(diffuse_radiation(okta, h, day, p, 0.0), i0d * f_d, 1e-9);
  EXPECT_DOUBLE_EQ(diffuse_radiation(okta, -0.1, day, p, 0.0), 0.0);
}

TEST(GlobalRadiation, CombinesComponents) {
  EXPECT_DOUBLE_EQ(global_radiation(0.0, 100.0, 0.3), 100.0);
  EXPECT_DOUBLE_EQ(global_radiation(500.0, 100.0, kPi / 2.0), 600.0);
  EXPECT_NEAR(global_radiation(500.0, 100.0, kPi / 6.0), 350.0, 1e-9);
  EXPECT_THROW(global_radiation(-1.0, 0.0, 0.3), std::invalid_argument);
}

TEST(PvPower, ScalesWithAreaAndEfficiency) {
  PvParams p;  // 30000 m^2 at 0.2
  EXPECT_DOUBLE_EQ(pv_power(0.0, p), 0.0);
  EXPECT_DOUBLE_EQ(pv_power(1000.0, p), 6e6);  // the 6 MW park at 1 kW/m^2
  PvParams unit{1.0, 1.0};
  EXPECT_DOUBLE_EQ(pv_power(842.3, unit), 842.3);
}

// The 1/(sin h I_0N) variance structure makes the I_N sin(h) noise level
// independent of elevation.
TEST(DirectRadiation, GlobalContributionNoiseIndependentOfElevation) {
  RadiationParams p;
  double dt = 600.0;
  auto std_at = [&](double h, std::uint64_t seed) {
    RandomStream rng(seed);
    std::size_t n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = direct_radiation(3.0, h, 172, p, rng.wiener(dt)) * std::sin(h);
      sum += v;
      sum2 += v * v;
    }
    double mean = sum / n;
    return std::sqrt(sum2 / n - mean * mean);
  };
  double low = std_at(0.3, 5);
  double high = std_at(1.2, 6);
  EXPECT_NEAR(low / high, 1.0, 0.10);
}

TEST(IrradianceCsv, SchemaHolds) {
  IrradianceTrace trace;
  trace.time_s = {0.0};
  trace.elevation_rad = {0.5};
  trace.direct = {100.0};
  trace.diffuse = {50.0};
  trace.global = {97.9};
  trace.pv_power_w = {1000.0};
  auto path = std::filesystem::temp_directory_path() / "hyplant_irr_test.csv";
  write_irradiance_csv(trace, path);
  EXPECT_EQ(read_header_line(path), "t_s,h_rad,I_N,I_D,I_G,P_s");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace hyplant
