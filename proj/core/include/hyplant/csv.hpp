#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hyplant {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Line-oriented CSV writer with a fixed header. Doubles are written in
/// round-trip form so exported traces can be re-read bit-exactly.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
  }

  std::size_t columns() const { return columns_; }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

/// First line of a file, without the trailing newline. Used by tests to
/// check exported schemas.
std::string read_header_line(const std::filesystem::path& path);

}  // namespace hyplant
