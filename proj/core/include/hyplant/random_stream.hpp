#pragma once

#include <cstdint>
#include <random>

namespace hyplant {

/// Seedable Gaussian stream. Two streams built from the same seed produce
/// the same draw sequence, so every simulation is reproducible from its
/// seed alone. Streams are not thread-safe; use one stream per simulation.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// One draw from N(0, stddev^2).
  double gaussian(double stddev) { return draw() * stddev; }

  /// Wiener increment over dt seconds: one draw from N(0, dt).
  double wiener(double dt_s) { return draw() * std::sqrt(dt_s); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draw_count() const { return draws_; }

 private:
  double draw() {
    ++draws_;
    return normal_(engine_);
  }

  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace hyplant
