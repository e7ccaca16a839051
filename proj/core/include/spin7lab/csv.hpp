#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spin7lab::report {

/// Shortest decimal representation of a binary64 value that round-trips
/// (std::to_chars with no precision argument). Infinities and NaN come out
/// as "inf"/"-inf"/"nan".
std::string format_double(double value);

/// A rectangular numeric table with '#'-prefixed comment lines (units and
/// provenance), a single header row, comma separators and '.' decimals.
/// Column names and order are part of the public schema.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  [[nodiscard]] std::optional<std::size_t> column_index(std::string_view name) const;
  [[nodiscard]] std::string to_string() const;
};

/// Parses text written by CsvTable::to_string (or any comma-separated
/// numeric table with one header row and optional '#' comments).
/// Throws std::runtime_error on malformed input.
CsvTable parse_csv(std::string_view text);

}  // namespace spin7lab::report
