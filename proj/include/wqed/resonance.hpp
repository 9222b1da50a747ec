#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/parallel.hpp"
#include "wqed/quartic.hpp"

namespace wqed {

// C |z_b>_N + |e^{iq}> + beta |e^{-iq}>, with |z_b>_N the normalized localized part.
struct ResonanceSolution {
  double k_momentum = 0.0;
  double energy = 0.0;
  cplx z_b;
  double q = 0.0;
  cplx weight_c;
  double phase_phi = 0.0;
  cplx beta;
  double residual = 0.0;   // largest constraint violation
  double condition = 0.0;  // Frobenius condition estimate of the 2x2 system
};

ResonanceSolution solve_resonance(double K, double omega, const CouplingConfig& cfg,
                                  double tol = kDefaultUnitTolerance);

enum class WindowPart { Full, Negative, Positive };
std::string_view to_string(WindowPart part);

// (min, max) of omega^K(+-1), optionally clipped to one side of omega = 0.
std::optional<EnergyWindow> resonance_window(double K, const CouplingConfig& cfg,
                                             WindowPart part = WindowPart::Full);

// The window split at omega = 0, keeping pieces whose midpoint is a resonance candidate.
std::vector<EnergyWindow> resonance_windows(double K, const CouplingConfig& cfg,
                                            double tol = kDefaultUnitTolerance);

struct ResonanceProfile {
  double k_momentum = 0.0;
  std::vector<double> omega_grid;
  std::vector<double> c_squared;      // NaN at holes
  std::vector<double> phi_unwrapped;  // NaN at holes
  std::vector<double> beta_modulus;   // NaN at holes
  std::vector<double> zb_modulus;     // NaN at holes

  bool valid(std::size_t j) const { return c_squared[j] == c_squared[j]; }
  std::size_t valid_count() const;
};

// Open grid: omega_j = lo + (hi - lo)(j + 1)/(points + 1).
ResonanceProfile resonance_scan(double K, double omega_lo, double omega_hi, std::size_t points,
                                const CouplingConfig& cfg, Exec exec = Exec::Parallel,
                                double tol = kDefaultUnitTolerance);

enum class PeakQuality { Sharp, Broad, NoPeak };
std::string_view to_string(PeakQuality quality);

struct PeakReport {
  double omega_peak = 0.0;
  double fwhm = 0.0;
  PeakQuality quality = PeakQuality::NoPeak;
  double c_squared_peak = 0.0;
  double reference = 0.0;  // higher of the two flanking minima
  double omega_left = 0.0;
  double omega_right = 0.0;
};

inline constexpr double kDefaultProminence = 1.25;

PeakReport locate_peak(const ResonanceProfile& profile, double prominence = kDefaultProminence);

// Rescans [left - fwhm, right + fwhm] with the same point count, keeping the
// coarse reference level.
PeakReport refine_peak(const ResonanceProfile& coarse, const PeakReport& report,
                       const CouplingConfig& cfg, std::size_t passes = 2,
                       Exec exec = Exec::Parallel, double tol = kDefaultUnitTolerance);

struct PeakSearch {
  std::size_t points = 2001;
  std::size_t refine_passes = 2;
  double prominence = kDefaultProminence;
  double tol = kDefaultUnitTolerance;
};

// Scan + locate + refine over one window of K.
PeakReport resonance_peak(double K, const EnergyWindow& window, const CouplingConfig& cfg,
                          const PeakSearch& search = {}, Exec exec = Exec::Parallel);

struct BranchPoint {
  double k_momentum = 0.0;
  double omega_peak = 0.0;
  double fwhm = 0.0;
  PeakQuality quality = PeakQuality::NoPeak;
  double c_squared_peak = 0.0;
  double zb_modulus = 0.0;
  EnergyWindow window;
  std::size_t branch_id = 0;
};

// Detected peaks over the grid, ordered by K then omega, with branch ids from
// nearest-neighbour continuation in omega between consecutive K.
std::vector<BranchPoint> resonance_branches(const CouplingConfig& cfg, std::span<const double> k_grid,
                                            const PeakSearch& search = {}, Exec exec = Exec::Parallel);

}  // namespace wqed
