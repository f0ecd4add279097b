#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bisz::cli {

enum class Format { Csv, Json };

struct OutputSpec {
  Format format = Format::Csv;
  std::string path;  // empty: standard output
  int precision = 9;
};

using Cell = std::variant<std::int64_t, double, std::string>;

/// Column-oriented record set plus free-form metadata. CSV writes only the
/// records (header always present); JSON writes {"command", "meta", "records"}.
class RecordSet {
 public:
  RecordSet(std::string command, std::vector<std::string> columns)
      : command_(std::move(command)), columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  void add_meta(std::string key, Cell value) { meta_.emplace_back(std::move(key), std::move(value)); }

  std::string render(const OutputSpec& spec) const;

 private:
  std::string command_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, Cell>> meta_;
};

/// Round to `precision` significant digits, as printed with %.*g.
double round_significant(double v, int precision);
std::string format_number(double v, int precision);

}  // namespace bisz::cli
