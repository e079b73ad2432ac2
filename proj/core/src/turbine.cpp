#include "hyplant/turbine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hyplant/csv.hpp"

namespace hyplant {

namespace {

constexpr double kPi = std::numbers::pi;

void check_grid(const std::vector<double>& grid, const char* name) {
  if (grid.size() < 2) {
    throw std::invalid_argument(std::string(name) + " grid needs at least 2 points");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(name) + " grid must be strictly ascending");
    }
  }
}

/// Index of the cell containing x, clamped to the grid interior.
std::size_t cell_index(const std::vector<double>& grid, double x) {
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  auto idx = static_cast<std::size_t>(std::distance(grid.begin(), it));
  if (idx == 0) return 0;
  if (idx >= grid.size()) return grid.size() - 2;
  return idx - 1;
}

/// Heier-style parametric power coefficient; pitch in degrees.
double parametric_cp(double lambda, double pitch_deg) {
  constexpr double c1 = 0.5176, c2 = 116.0, c3 = 0.4, c4 = 5.0, c5 = 21.0, c6 = 0.0068;
  double pitch = std::max(pitch_deg, 0.0);
  double denom = lambda + 0.08 * pitch;
  if (denom <= 1e-12) return 0.0;
  double inv_li = 1.0 / denom - 0.035 / (pitch * pitch * pitch + 1.0);
  double value = c1 * (c2 * inv_li - c3 * pitch - c4) * std::exp(-c5 * inv_li) + c6 * lambda;
  return std::clamp(value, 0.0, kBetzLimit);
}

}  // namespace

double rpm_to_rad_s(double rpm) { return rpm * 2.0 * kPi / 60.0; }

void TurbineParams::validate() const {
  if (!(cut_in_ms < rated_ms && rated_ms < cut_out_ms)) {
    throw std::invalid_argument("need cut-in < rated < cut-out");
  }
  if (!(rotor_speed_min_rad_s < rotor_speed_max_rad_s)) {
    throw std::invalid_argument("need rotor speed min < max");
  }
  if (!(pitch_min_deg < pitch_max_deg)) {
    throw std::invalid_argument("need pitch min < max");
  }
  if (!(air_density > 0.0 && rotor_radius_m > 0.0 && rated_power_w > 0.0)) {
    throw std::invalid_argument("density, radius and rating must be > 0");
  }
  if (!(generator_efficiency > 0.0 && generator_efficiency <= 1.0)) {
    throw std::invalid_argument("generator efficiency must lie in (0,1]");
  }
}

CpSurface::CpSurface(std::vector<double> lambda_grid, std::vector<double> pitch_grid_deg,
                     std::vector<std::vector<double>> values)
    : lambda_grid_(std::move(lambda_grid)),
      pitch_grid_(std::move(pitch_grid_deg)),
      values_(std::move(values)) {
  check_grid(lambda_grid_, "lambda");
  check_grid(pitch_grid_, "pitch");
  if (values_.size() != pitch_grid_.size()) {
    throw std::invalid_argument("C_P table rows must match the pitch grid");
  }
  for (const auto& row : values_) {
    if (row.size() != lambda_grid_.size()) {
      throw std::invalid_argument("C_P table columns must match the lambda grid");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument("C_P table has non-finite entries");
      if (v > kBetzLimit + 1e-9) {
        throw std::invalid_argument("C_P table exceeds the Betz limit");
      }
    }
  }
}

CpSurface CpSurface::default_surface() {
  std::vector<double> lambda_grid;
  for (double lam = 1.0; lam <= 30.0 + 1e-9; lam += 0.05) lambda_grid.push_back(lam);
  std::vector<double> pitch_grid;
  for (double pitch = -5.0; pitch <= 25.0 + 1e-9; pitch += 0.25) pitch_grid.push_back(pitch);

  std::vector<std::vector<double>> values(pitch_grid.size(),
                                          std::vector<double>(lambda_grid.size()));
  for (std::size_t i = 0; i < pitch_grid.size(); ++i) {
    for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
      values[i][j] = parametric_cp(lambda_grid[j], pitch_grid[i]);
    }
  }
  return CpSurface(std::move(lambda_grid), std::move(pitch_grid), std::move(values));
}

CpSurface CpSurface::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open C_P table: " + path.string());

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty C_P table");
  auto head = split(line);
  if (head.size() < 3) throw std::runtime_error("C_P table header needs >= 2 lambda values");
  std::vector<double> lambda_grid;
  for (std::size_t i = 1; i < head.size(); ++i) lambda_grid.push_back(std::stod(head[i]));

  std::vector<double> pitch_grid;
  std::vector<std::vector<double>> values;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != head.size()) {
      throw std::runtime_error("C_P table row width mismatch");
    }
    pitch_grid.push_back(std::stod(cells[0]));
    std::vector<double> row;
    for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(std::stod(cells[i]));
    values.push_back(std::move(row));
  }
  return CpSurface(std::move(lambda_grid), std::move(pitch_grid), std::move(values));
}

void CpSurface::to_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write C_P table: " + path.string());
  for (double lam : lambda_grid_) out << ',' << format_double(lam);
  out << '\n';
  for (std::size_t i = 0; i < pitch_grid_.size(); ++i) {
    out << format_double(pitch_grid_[i]);
    for (double v : values_[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

double CpSurface::lookup(double lambda, double pitch_deg) const {
  double lam = std::clamp(lambda, lambda_grid_.front(), lambda_grid_.back());
  double pit = std::clamp(pitch_deg, pitch_grid_.front(), pitch_grid_.back());
  std::size_t j = cell_index(lambda_grid_, lam);
  std::size_t i = cell_index(pitch_grid_, pit);
  double tx = (lam - lambda_grid_[j]) / (lambda_grid_[j + 1] - lambda_grid_[j]);
  double ty = (pit - pitch_grid_[i]) / (pitch_grid_[i + 1] - pitch_grid_[i]);
  double v00 = values_[i][j], v01 = values_[i][j + 1];
  double v10 = values_[i + 1][j], v11 = values_[i + 1][j + 1];
  double v = (1.0 - ty) * ((1.0 - tx) * v00 + tx * v01) + ty * ((1.0 - tx) * v10 + tx * v11);
  return std::max(v, 0.0);
}

double CpSurface::max_value() const {
  double best = 0.0;
  for (const auto& row : values_) {
    for (double v : row) best = std::max(best, v);
  }
  return best;
}

double available_power(double wind_ms, const TurbineParams& params) {
  if (!(wind_ms >= 0.0)) throw std::invalid_argument("wind speed must be >= 0");
  double r2 = params.rotor_radius_m * params.rotor_radius_m;
  return 0.5 * params.air_density * kPi * r2 * wind_ms * wind_ms * wind_ms;
}

double tip_speed_ratio(double rotor_speed_rad_s, double wind_ms, double rotor_radius_m) {
  if (!(wind_ms > 0.0)) throw std::invalid_argument("tip speed ratio undefined at v <= 0");
  return rotor_radius_m * rotor_speed_rad_s / wind_ms;
}

OperatingPoint optimize_stationary(double wind_ms, const TurbineParams& params,
                                   const CpSurface& surface) {
  params.validate();
  if (!(wind_ms >= 0.0) || !std::isfinite(wind_ms)) {
    throw std::invalid_argument("wind speed must be finite and >= 0");
  }

  OperatingPoint point;
  point.wind_ms = wind_ms;
  if (wind_ms < params.cut_in_ms || wind_ms > params.cut_out_ms) {
    return point;  // parked
  }

  double lambda_lo = params.rotor_radius_m * params.rotor_speed_min_rad_s / wind_ms;
  double lambda_hi = params.rotor_radius_m * params.rotor_speed_max_rad_s / wind_ms;

  // Dense scan. Pitch runs high to low so ties between a flat pitch region
  // and its clamped extension resolve to the largest pitch in the tie.
  auto scan = [&](double llo, double lhi, double plo, double phi, int nl, int np) {
    double best = -1.0, best_lam = llo, best_pit = phi;
    for (int ip = np - 1; ip >= 0; --ip) {
      double pit = plo + (phi - plo) * ip / (np - 1);
      for (int il = 0; il < nl; ++il) {
        double lam = llo + (lhi - llo) * il / (nl - 1);
        double v = surface.lookup(lam, pit);
        if (v > best) {
          best = v;
          best_lam = lam;
          best_pit = pit;
        }
      }
    }
    return std::tuple{best, best_lam, best_pit};
  };

  auto [cp, lam, pit] = scan(lambda_lo, lambda_hi, params.pitch_min_deg, params.pitch_max_deg,
                             256, 256);
  // Local refinement: shrink a window around the incumbent a few times.
  double wl = (lambda_hi - lambda_lo) / 255.0;
  double wp = (params.pitch_max_deg - params.pitch_min_deg) / 255.0;
  for (int round = 0; round < 4; ++round) {
    double llo = std::max(lambda_lo, lam - wl), lhi = std::min(lambda_hi, lam + wl);
    double plo = std::max(params.pitch_min_deg, pit - wp), phi = std::min(params.pitch_max_deg, pit + wp);
    auto [c2, l2, p2] = scan(llo, lhi, plo, phi, 17, 17);
    if (c2 > cp) {
      cp = c2;
      lam = l2;
      pit = p2;
    }
    wl /= 8.0;
    wp /= 8.0;
  }

  point.pitch_deg = pit;
  point.tip_speed_ratio = lam;
  point.cp = cp;
  point.rotor_speed_rad_s = lam * wind_ms / params.rotor_radius_m;

  double wind_power = available_power(wind_ms, params);
  double rotor_rating = params.rated_power_w / params.generator_efficiency;
  if (wind_ms >= params.rated_ms) {
    // Above rated the controller sheds excess through pitch and holds the
    // rating; the tabulated surface alone cannot represent that regime.
    point.rotor_power_w = rotor_rating;
  } else {
    point.rotor_power_w = std::min(wind_power * cp, rotor_rating);
  }
  point.electrical_power_w = params.generator_efficiency * point.rotor_power_w;
  point.rotor_torque_nm = point.rotor_power_w / point.rotor_speed_rad_s;
  return point;
}

std::vector<OperatingPoint> power_curve(const TurbineParams& params, const CpSurface& surface,
                                        std::span<const double> wind_grid) {
  for (std::size_t i = 1; i < wind_grid.size(); ++i) {
    if (!(wind_grid[i] >= wind_grid[i - 1])) {
      throw std::invalid_argument("wind grid must be ascending");
    }
  }
  std::vector<OperatingPoint> curve;
  curve.reserve(wind_grid.size());
  for (double v : wind_grid) curve.push_back(optimize_stationary(v, params, surface));
  return curve;
}

void write_power_curve_csv(std::span<const OperatingPoint> curve,
                           const std::filesystem::path& path) {
  CsvWriter csv(path, {"v", "theta_star", "lambda_star", "cp_star", "omega_star_rpm", "P_g_W"});
  for (const auto& p : curve) {
    csv.row({p.wind_ms, p.pitch_deg, p.tip_speed_ratio, p.cp,
             p.rotor_speed_rad_s * 60.0 / (2.0 * kPi), p.electrical_power_w});
  }
}

}  // namespace hyplant
