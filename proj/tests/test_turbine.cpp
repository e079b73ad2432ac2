#include "hyplant/turbine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "hyplant/csv.hpp"

namespace hyplant {
namespace {

constexpr double kPi = std::numbers::pi;

CpSurface tiny_surface() {
  return CpSurface({1.0, 2.0}, {0.0, 1.0}, {{0.1, 0.2}, {0.3, 0.4}});
}

TEST(AvailablePower, HandArithmeticAndCubicLaw) {
  TurbineParams p;
  EXPECT_DOUBLE_EQ(available_power(0.0, p), 0.0);
  // 0.5 * 1.225 * pi * 62.94^2 * 10^3, evaluated independently.
  double expected = 0.5 * 1.225 * kPi * 62.94 * 62.94 * 1000.0;
  EXPECT_NEAR(expected, 7.623e6, 0.001 * 7.623e6);
  EXPECT_NEAR(available_power(10.0, p), expected, 1e-6);
  EXPECT_NEAR(available_power(20.0, p) / available_power(10.0, p), 8.0, 1e-12);
  EXPECT_THROW(available_power(-1.0, p), std::invalid_argument);
}

TEST(TipSpeedRatio, HandArithmeticAndLinearity) {
  EXPECT_DOUBLE_EQ(tip_speed_ratio(0.0, 10.0, 62.94), 0.0);
  EXPECT_NEAR(tip_speed_ratio(1.26711, 11.4, 62.94), 6.996, 1e-3);
  EXPECT_DOUBLE_EQ(tip_speed_ratio(2.0, 10.0, 62.94), 2.0 * tip_speed_ratio(1.0, 10.0, 62.94));
  EXPECT_THROW(tip_speed_ratio(1.0, 0.0, 62.94), std::invalid_argument);
}

TEST(RpmConversion, TableValues) {
  EXPECT_NEAR(rpm_to_rad_s(6.9), 0.72257, 1e-5);
  EXPECT_NEAR(rpm_to_rad_s(12.1), 1.26711, 1e-5);
}

TEST(CpSurfaceLookup, GridNodeIdentityAndBilinearMidpoint) {
  auto s = tiny_surface();
  EXPECT_DOUBLE_EQ(s.lookup(1.0, 0.0), 0.1);
  EXPECT_DOUBLE_EQ(s.lookup(2.0, 1.0), 0.4);
  EXPECT_DOUBLE_EQ(s.lookup(1.5, 0.5), 0.25);  // average of the 4 corners
  // out-of-grid clamps to the boundary
  EXPECT_DOUBLE_EQ(s.lookup(0.0, 0.5), s.lookup(1.0, 0.5));
  EXPECT_DOUBLE_EQ(s.lookup(5.0, 2.0), 0.4);
}

TEST(CpSurfaceLoad, RejectsDegenerateAndSuperBetzTables) {
  EXPECT_THROW(CpSurface({1.0}, {0.0, 1.0}, {{0.1}, {0.2}}), std::invalid_argument);
  EXPECT_THROW(CpSurface({1.0, 2.0}, {0.0}, {{0.1, 0.2}}), std::invalid_argument);
  EXPECT_THROW(CpSurface({1.0, 2.0}, {0.0, 1.0}, {{0.1, 0.2}, {0.3, 0.7}}),
               std::invalid_argument);
  EXPECT_THROW(CpSurface({2.0, 1.0}, {0.0, 1.0}, {{0.1, 0.2}, {0.3, 0.4}}),
               std::invalid_argument);
}

TEST(CpSurfaceDefault, RespectsBetzEverywhere) {
  auto surface = CpSurface::default_surface();
  EXPECT_LE(surface.max_value(), kBetzLimit);
  EXPECT_GT(surface.max_value(), 0.4);  // the classic parametric optimum ~0.48
}

TEST(CpSurfaceCsv, RoundTripsThroughTheDocumentedLayout) {
  auto surface = CpSurface::default_surface();
  auto path = std::filesystem::temp_directory_path() / "hyplant_cp_test.csv";
  surface.to_csv(path);
  auto loaded = CpSurface::from_csv(path);
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> lam(1.0, 30.0), pit(-5.0, 25.0);
  for (int i = 0; i < 200; ++i) {
    double l = lam(gen), t = pit(gen);
    EXPECT_NEAR(surface.lookup(l, t), loaded.lookup(l, t), 1e-12);
  }
  std::filesystem::remove(path);
}

TEST(OptimizeStationary, FeasibleAndCappedAtBetz) {
  TurbineParams p;
  auto surface = CpSurface::default_surface();
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> wind(3.0, 25.0);
  for (int i = 0; i < 10; ++i) {
    double v = wind(gen);
    auto pt = optimize_stationary(v, p, surface);
    EXPECT_GE(pt.pitch_deg, p.pitch_min_deg);
    EXPECT_LE(pt.pitch_deg, p.pitch_max_deg);
    double lam_lo = p.rotor_radius_m * p.rotor_speed_min_rad_s / v;
    double lam_hi = p.rotor_radius_m * p.rotor_speed_max_rad_s / v;
    EXPECT_GE(pt.tip_speed_ratio, lam_lo - 1e-9);
    EXPECT_LE(pt.tip_speed_ratio, lam_hi + 1e-9);
    EXPECT_LE(pt.cp, kBetzLimit);
    EXPECT_LE(pt.electrical_power_w,
              p.generator_efficiency * available_power(v, p) + 1e-6);
    EXPECT_NEAR(pt.rotor_torque_nm * pt.rotor_speed_rad_s, pt.rotor_power_w, 1e-6);
  }
}

// Brute-force oracle: a 1000x1000 scan of the same table must not beat the
// optimizer by more than 1e-3 in C_P.
TEST(OptimizeStationary, GridOracleFindsNothingBetter) {
  TurbineParams p;
  auto surface = CpSurface::default_surface();
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> wind(3.0, 25.0);
  for (int trial = 0; trial < 10; ++trial) {
    double v = wind(gen);
    auto pt = optimize_stationary(v, p, surface);
    double lam_lo = p.rotor_radius_m * p.rotor_speed_min_rad_s / v;
    double lam_hi = p.rotor_radius_m * p.rotor_speed_max_rad_s / v;
    double best = 0.0;
    for (int i = 0; i < 1000; ++i) {
      double lam = lam_lo + (lam_hi - lam_lo) * i / 999.0;
      for (int j = 0; j < 1000; ++j) {
        double pit = p.pitch_min_deg + (p.pitch_max_deg - p.pitch_min_deg) * j / 999.0;
        best = std::max(best, surface.lookup(lam, pit));
      }
    }
    EXPECT_LE(best - pt.cp, 1e-3) << "v = " << v;
  }
}

TEST(PowerCurve, CutRegionsRatedCapAndMonotonicity) {
  TurbineParams p;
  auto surface = CpSurface::default_surface();

  EXPECT_DOUBLE_EQ(optimize_stationary(2.0, p, surface).electrical_power_w, 0.0);
  EXPECT_DOUBLE_EQ(optimize_stationary(26.0, p, surface).electrical_power_w, 0.0);
  EXPECT_DOUBLE_EQ(optimize_stationary(11.4, p, surface).electrical_power_w, 5e6);
  EXPECT_DOUBLE_EQ(optimize_stationary(20.0, p, surface).electrical_power_w, 5e6);

  std::vector<double> grid;
  for (double v = 3.0; v <= 11.4 + 1e-9; v += 0.1) grid.push_back(v);
  auto curve = power_curve(p, surface, grid);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_GE(curve[i].electrical_power_w, curve[i - 1].electrical_power_w - 1e-6)
        << "at v = " << curve[i].wind_ms;
  }
}

TEST(PowerCurve, LambdaBoxShrinksWithWindSpeed) {
  TurbineParams p;
  double prev = 1e9;
  for (double v = 3.0; v <= 25.0; v += 1.0) {
    double lam_hi = p.rotor_radius_m * p.rotor_speed_max_rad_s / v;
    EXPECT_LT(lam_hi, prev);
    prev = lam_hi;
  }
}

TEST(PowerCurve, CsvSchemaHolds) {
  TurbineParams p;
  auto surface = CpSurface::default_surface();
  std::vector<double> grid{5.0, 10.0};
  auto curve = power_curve(p, surface, grid);
  auto path = std::filesystem::temp_directory_path() / "hyplant_curve_test.csv";
  write_power_curve_csv(curve, path);
  EXPECT_EQ(read_header_line(path), "v,theta_star,lambda_star,cp_star,omega_star_rpm,P_g_W");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace hyplant
