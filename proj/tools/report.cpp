#include "report.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace strichartz::cli {

namespace {

nlohmann::ordered_json to_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    // JSON has no inf/nan.
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

std::string to_csv(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match columns");
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_json(std::ostream& os, const RunReport& r) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = r.command;
  j["argv"] = r.argv;
  j["config"] = r.config;
  j["summary"] = r.summary;
  auto points = nlohmann::ordered_json::array();
  for (const auto& row : r.table.rows) {
    nlohmann::ordered_json p;
    for (std::size_t i = 0; i < row.size(); ++i) p[r.table.columns[i]] = to_json(row[i]);
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  os << j.dump(2) << '\n';
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << to_csv(row[i]);
    os << '\n';
  }
}

Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("CSV has no header row");
  t.columns = split_csv_line(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (const auto& field : split_csv_line(line)) {
      double v = 0.0;
      const auto* end = field.data() + field.size();
      const auto res = std::from_chars(field.data(), end, v);
      if (!field.empty() && res.ec == std::errc() && res.ptr == end)
        row.emplace_back(v);
      else
        row.emplace_back(field);
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace strichartz::cli
