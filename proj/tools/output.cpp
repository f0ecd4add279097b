#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bisz::cli {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c, int precision) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d, precision);
  return csv_escape(std::get<std::string>(c));
}

nlohmann::ordered_json cell_json(const Cell& c, int precision) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return round_significant(*d, precision);
  }
  return std::get<std::string>(c);
}

}  // namespace

double round_significant(double v, int precision) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_number(v, precision));
}

std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

void RecordSet::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::logic_error("record width does not match the header");
  }
  rows_.push_back(std::move(row));
}

std::string RecordSet::render(const OutputSpec& spec) const {
  if (spec.format == Format::Csv) {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "," : "") << cell_text(row[i], spec.precision);
      }
      os << '\n';
    }
    return os.str();
  }
  nlohmann::ordered_json doc;
  doc["command"] = command_;
  auto meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta_) meta[k] = cell_json(v, spec.precision);
  doc["meta"] = meta;
  auto records = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) r[columns_[i]] = cell_json(row[i], spec.precision);
    records.push_back(std::move(r));
  }
  doc["records"] = records;
  return doc.dump(2) + "\n";
}

}  // namespace bisz::cli
