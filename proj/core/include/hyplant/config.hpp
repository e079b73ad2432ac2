#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hyplant {

/// Flat key-value configuration with dotted hierarchical keys:
///
///   # comment
///   wind.turbulence_length = 170.1       # m
///   cloud.legendre = -53.1, 14.6, -42.3
///
/// Every key that was parsed must be consumed by a getter before
/// ensure_fully_consumed() is called; leftovers (typos, stale keys) are
/// reported as errors.
class Config {
 public:
  static Config parse_file(const std::filesystem::path& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;

  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  std::int64_t get_int(const std::string& key);
  std::int64_t get_int(const std::string& key, std::int64_t fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::string get_string(const std::string& key, const std::string& fallback);
  std::vector<double> get_double_list(const std::string& key);
  std::optional<double> get_optional_double(const std::string& key);

  /// Throws listing every parsed key that no getter ever touched.
  void ensure_fully_consumed() const;

  std::vector<std::string> keys() const;

 private:
  const std::string& raw(const std::string& key);

  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
};

}  // namespace hyplant
