#include "spin7lab/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace spin7lab::report {

std::string format_double(double value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, ptr);
}

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("CsvTable::add_row: arity mismatch");
  }
  rows.push_back(std::move(row));
}

std::optional<std::size_t> CsvTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  return std::nullopt;
}

std::string CsvTable::to_string() const {
  std::string out;
  for (const auto& c : comments) {
    out += "# ";
    out += c;
    out += '\n';
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

double parse_field(std::string_view field, std::size_t line_no) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
    field.remove_prefix(1);
  }
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                            field.back() == '\r')) {
    field.remove_suffix(1);
  }
  if (field == "inf") return HUGE_VAL;
  if (field == "-inf") return -HUGE_VAL;
  if (field == "nan" || field == "-nan") return NAN;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error("parse_csv: bad numeric field on line " +
                             std::to_string(line_no));
  }
  return value;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (start > text.size()) break;
      continue;
    }
    if (line.front() == '#') {
      std::string_view body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      table.comments.emplace_back(body);
      continue;
    }
    if (!have_header) {
      for (std::string_view f : split_line(line)) table.columns.emplace_back(f);
      have_header = true;
      continue;
    }
    const auto fields = split_line(line);
    if (fields.size() != table.columns.size()) {
      throw std::runtime_error("parse_csv: arity mismatch on line " +
                               std::to_string(line_no));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::string_view f : fields) row.push_back(parse_field(f, line_no));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("parse_csv: missing header row");
  return table;
}

}  // namespace spin7lab::report
