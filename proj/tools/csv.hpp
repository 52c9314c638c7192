#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace idr::cli {

/// Comma-separated table with a mandatory header row. Fields are kept as
/// text until a column is requested as numeric.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row

  std::size_t column_index(std::string_view name) const;  // throws std::invalid_argument
  bool has_column(std::string_view name) const;
  // Throws ParseError naming the line of the first missing or non-numeric entry.
  std::vector<double> numeric_column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::string& path);

std::string format_number(double v);
void write_text(const std::string& path, std::string_view text);

}  // namespace idr::cli
