#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wqed/parallel.hpp"

namespace wqed {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPoleTolerance = 1e-9;
inline constexpr std::size_t kDefaultQGrid = 4001;

// Coupling rates in units of the total decay rate, so gamma_r + gamma_l = 1.
struct CouplingConfig {
  double gamma_r = 0.5;
  double gamma_l = 0.5;
  double k0 = 1.2;

  static CouplingConfig from_chirality(double chi, double k0);
  static CouplingConfig from_rates(double gamma_r, double gamma_l, double k0);

  double chirality() const noexcept { return gamma_r; }
  bool is_chiral() const noexcept { return gamma_r == 0.0 || gamma_l == 0.0; }
  CouplingConfig mirrored() const noexcept { return {gamma_l, gamma_r, k0}; }

  // Throws InvalidConfig.
  void validate() const;
};

// Maps k onto (-pi, pi].
double wrap_to_zone(double k);

// Distance from k to the nearest active pole of the single-photon dispersion,
// measured around the circle. Inactive poles (zero rate) are ignored.
double pole_distance(double k, const CouplingConfig& cfg);

double single_photon_energy(double k, const CouplingConfig& cfg);
double free_pair_energy(double K, double q, const CouplingConfig& cfg);

// Upper band: the arc (-k0, k0). Lower band: the outer arc through +-pi.
enum class Band { Upper, Lower };
Band band_of(double k, double k0);

enum class BranchTag { UpperUpper, LowerLower, Mixed };
std::string_view to_string(BranchTag tag);

struct BandInterval {
  double lower = 0.0;
  double upper = 0.0;
  BranchTag branch_tag = BranchTag::Mixed;
  bool lower_unbounded = false;
  bool upper_unbounded = false;

  bool contains(double omega) const noexcept {
    return (lower_unbounded || omega >= lower) && (upper_unbounded || omega <= upper);
  }
};

struct EnergyWindow {
  double lower = 0.0;
  double upper = 0.0;

  double width() const noexcept { return upper - lower; }
  bool contains(double omega) const noexcept { return omega > lower && omega < upper; }
};

std::vector<BandInterval> continuum_bands(double K, const CouplingConfig& cfg,
                                          std::size_t grid_size = kDefaultQGrid,
                                          Exec exec = Exec::Serial);

// Finite energy windows not covered by any interval, ascending.
std::vector<EnergyWindow> uncovered_windows(std::span<const BandInterval> bands);

struct GapRegion {
  double k_lower = 0.0;
  double k_upper = 0.0;

  bool empty() const noexcept { return !(k_upper > k_lower); }
  // Open interval, tested on |K|.
  bool contains(double K) const noexcept;
};

GapRegion gap_region(const CouplingConfig& cfg);

// Widest uncovered window of the pair continuum at K, if any.
std::optional<EnergyWindow> gap_window(double K, const CouplingConfig& cfg,
                                       std::size_t grid_size = kDefaultQGrid);

struct DosHistogram {
  double k_momentum = 0.0;
  std::vector<double> bin_edges;
  std::vector<double> counts;
};

DosHistogram pair_density_of_states(double K, const CouplingConfig& cfg,
                                    std::size_t grid_size = kDefaultQGrid,
                                    std::size_t bins = 200,
                                    EnergyWindow range = {-5.0, 5.0});

// q_j = -2pi + 4pi j / n, one full period of the relative momentum.
inline double q_sample(std::size_t j, std::size_t n) {
  return -2.0 * kPi + 4.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
}

}  // namespace wqed
