#include "wqed/scan_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "wqed/error.hpp"

namespace wqed {

namespace {

bool cell_matches(const Cell& cell, ColumnType type) {
  if (std::holds_alternative<std::monostate>(cell)) return true;
  switch (type) {
    case ColumnType::Real: return std::holds_alternative<double>(cell);
    case ColumnType::Integer: return std::holds_alternative<std::int64_t>(cell);
    case ColumnType::Text: return std::holds_alternative<std::string>(cell);
  }
  return false;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_real(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&cell)) return csv_escape(*s);
  return "NaN";
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  return nullptr;
}

std::string_view type_name(ColumnType t) {
  switch (t) {
    case ColumnType::Real: return "real";
    case ColumnType::Integer: return "integer";
    case ColumnType::Text: return "text";
  }
  return "unknown";
}

}  // namespace

void ScanTable::set_meta(std::string key, std::string value) {
  for (auto& kv : metadata) {
    if (kv.first == key) {
      kv.second = std::move(value);
      return;
    }
  }
  metadata.emplace_back(std::move(key), std::move(value));
}

void ScanTable::add_column(std::string name, ColumnType type) {
  if (!rows.empty()) throw Error(ErrorCode::InvalidArgument, "columns are fixed once rows exist");
  columns.push_back({std::move(name), type});
}

void ScanTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorCode::InvalidArgument, "row width does not match the column count");
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!cell_matches(row[i], columns[i].type)) {
      throw Error(ErrorCode::InvalidArgument, "cell type mismatch in column " + columns[i].name);
    }
  }
  rows.push_back(std::move(row));
}

std::string format_real(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string render(const ScanTable& table, Format format) {
  if (format == Format::Json) {
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.metadata) doc["meta"][k] = v;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const Column& c : table.columns) {
      doc["columns"].push_back({{"name", c.name}, {"type", type_name(c.type)}});
    }
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (const Cell& cell : row) r.push_back(json_cell(cell));
      doc["rows"].push_back(std::move(r));
    }
    return doc.dump(1) + "\n";
  }
  std::string out;
  for (const auto& [k, v] : table.metadata) out += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(table.columns[i].name);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

void emit_table(const ScanTable& table, Format format, const std::string& destination) {
  const std::string text = render(table, format);
  if (destination == "-") {
    std::cout.write(text.data(), static_cast<std::streamsize>(text.size()));
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::IoFailure, "failed to write to stdout");
    return;
  }
  std::ofstream f(destination, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + destination + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw Error(ErrorCode::IoFailure, "failed writing " + destination);
}

}  // namespace wqed
