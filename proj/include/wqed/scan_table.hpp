#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace wqed {

enum class ColumnType { Real, Integer, Text };

struct Column {
  std::string name;
  ColumnType type = ColumnType::Real;
};

// monostate marks a hole. Real holes may also be NaN.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct ScanTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  // Rows whose diagnostic is a numerical failure. Not emitted.
  std::size_t numerical_failures = 0;

  void set_meta(std::string key, std::string value);
  void add_column(std::string name, ColumnType type = ColumnType::Real);
  // Throws InvalidArgument on a width or type mismatch.
  void add_row(std::vector<Cell> row);
};

enum class Format { Csv, Json };

// 17 significant digits, "NaN" for NaN.
std::string format_real(double v);

std::string render(const ScanTable& table, Format format);

// "-" writes to stdout. Throws IoFailure.
void emit_table(const ScanTable& table, Format format, const std::string& destination);

}  // namespace wqed
