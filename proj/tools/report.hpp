#pragma once

// Run reports: one table of plot-ready rows plus a small JSON summary.
// Reports hold no timing, so identical invocations serialize identically.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace strichartz::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

struct RunReport {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  Table table;
};

inline constexpr const char* kToolName = "strichartz-probe";
inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

void write_json(std::ostream& os, const RunReport& r);
void write_csv(std::ostream& os, const Table& t);

/// Parses CSV written by write_csv; numeric-looking cells come back as double.
Table read_csv(std::istream& is);

}  // namespace strichartz::cli
