#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wqed/error.hpp"
#include "wqed/model.hpp"
#include "wqed/resonance.hpp"
#include "wqed/scan_table.hpp"

namespace wqed {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumerical = 4;

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 1;

  std::vector<double> values() const;
  std::string to_string() const;
};

struct RunConfig {
  std::string subcommand;
  CouplingConfig coupling;
  std::optional<double> K;
  std::optional<GridSpec> k_range;
  std::optional<GridSpec> omega_range;
  Format format = Format::Csv;
  std::string out = "-";
  double tol_unit = 1e-7;
  std::size_t lattice_n = 300;
  WindowPart window = WindowPart::Full;
  std::size_t grid = kDefaultQGrid;
  std::size_t bins = 200;
  std::size_t points = 2001;
  std::size_t delta_max = 40;
  bool strict = false;
  bool serial = false;
};

const std::vector<std::string>& subcommand_names();

// argv[0] is the program name. Throws Error(UsageError) naming the offending flag.
// Returns nullopt when help was requested and printed.
std::optional<RunConfig> parse_arguments(const std::vector<std::string>& args);

ScanTable run_subcommand(const RunConfig& rc);

int exit_code_for(ErrorCode code);

// Full front end: parse, run, emit. Returns the process exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace wqed
