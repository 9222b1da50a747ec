#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "support/errors.hpp"
#include "support/generators.hpp"
#include "wqed/scan_table.hpp"

using namespace wqed;
using wqed::testing::code_of;

namespace {

ScanTable sample_table() {
  ScanTable t;
  t.set_meta("tool", "wqed");
  t.set_meta("chi", "0.5");
  t.add_column("K");
  t.add_column("count", ColumnType::Integer);
  t.add_column("label", ColumnType::Text);
  t.add_row({0.25, std::int64_t{3}, std::string("upper-upper")});
  t.add_row({std::numeric_limits<double>::quiet_NaN(), std::int64_t{-1}, std::string("a,b")});
  t.add_row({std::monostate{}, std::monostate{}, std::monostate{}});
  return t;
}

}  // namespace

TEST_CASE("format_real") {
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(1e-20) == "9.9999999999999995e-21");
  CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "NaN");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("property: format_real round-trips") {
  testing::Draws d(71);
  for (int i = 0; i < 2000; ++i) {
    const double v = d.uniform(-1.0, 1.0) * std::pow(10.0, d.uniform(-30.0, 30.0));
    CHECK(std::stod(format_real(v)) == v);
  }
}

TEST_CASE("CSV rendering") {
  const std::string csv = render(sample_table(), Format::Csv);
  CHECK(csv ==
        "# tool=wqed\n"
        "# chi=0.5\n"
        "K,count,label\n"
        "0.25,3,upper-upper\n"
        "NaN,-1,\"a,b\"\n"
        "NaN,NaN,NaN\n");
}

TEST_CASE("JSON rendering") {
  const std::string text = render(sample_table(), Format::Json);
  CHECK(text.back() == '\n');
  const auto doc = nlohmann::ordered_json::parse(text);
  CHECK(doc["meta"]["tool"] == "wqed");
  CHECK(doc["meta"].begin().key() == "tool");
  REQUIRE(doc["columns"].size() == 3);
  CHECK(doc["columns"][1]["name"] == "count");
  CHECK(doc["columns"][1]["type"] == "integer");
  CHECK(doc["columns"][2]["type"] == "text");
  REQUIRE(doc["rows"].size() == 3);
  CHECK(doc["rows"][0][0] == 0.25);
  CHECK(doc["rows"][0][1] == 3);
  CHECK(doc["rows"][1][0].is_null());
  CHECK(doc["rows"][1][2] == "a,b");
  CHECK(doc["rows"][2][1].is_null());
}

TEST_CASE("table shape is enforced") {
  ScanTable t;
  t.add_column("a");
  t.add_column("n", ColumnType::Integer);
  CHECK(code_of([&] { t.add_row({1.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { t.add_row({1.0, 2.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { t.add_row({std::string("x"), std::int64_t{2}}); }) == ErrorCode::InvalidArgument);
  t.add_row({1.0, std::int64_t{2}});
  CHECK(code_of([&] { t.add_column("late"); }) == ErrorCode::InvalidArgument);
  t.set_meta("k", "1");
  t.set_meta("k", "2");
  REQUIRE(t.metadata.size() == 1);
  CHECK(t.metadata[0].second == "2");
}

TEST_CASE("emit_table") {
  const auto path = std::filesystem::temp_directory_path() / "wqed_scan_table_test.csv";
  emit_table(sample_table(), Format::Csv, path.string());
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == render(sample_table(), Format::Csv));
  std::filesystem::remove(path);

  CHECK(code_of([] { emit_table(sample_table(), Format::Csv, "/nonexistent-dir/x.csv"); }) ==
        ErrorCode::IoFailure);
}
