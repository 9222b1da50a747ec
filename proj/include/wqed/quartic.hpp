#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <utility>

#include "wqed/model.hpp"

namespace wqed {

inline constexpr double kDefaultUnitTolerance = 1e-7;
inline constexpr double kDegenerateOmega = 1e-12;

struct QuarticCoefficients {
  cplx c4, c3, c2, c1, c0;
};

QuarticCoefficients quartic_coefficients(double K, double omega, const CouplingConfig& cfg);

// Roots of omega^K(z) = omega. Normally four, paired as (z, 1/z). Where one term
// of omega^K drops out (chiral limit, sin(k0 +- K) = 0) or both terms share a
// denominator (K = 0, pi), the cleared quartic only adds roots sitting exactly on
// poles, and the set holds the two genuine roots.
struct RootSet {
  std::array<cplx, 4> roots{};
  std::array<double, 4> magnitudes{};
  std::array<std::pair<std::size_t, std::size_t>, 2> pairing{};
  std::size_t count = 0;

  std::size_t pair_count() const noexcept { return count / 2; }
};

RootSet solve_reciprocal_quartic(double K, double omega, const CouplingConfig& cfg);

// The omega = 0 equation: z = 0 is a root, its partner is the point at infinity
// (stored with magnitude +inf), and the remaining pair comes from a quadratic.
RootSet solve_zero_energy(double K, const CouplingConfig& cfg);

// Dispatches to solve_zero_energy when |omega| is below the degenerate tolerance.
RootSet solve_roots(double K, double omega, const CouplingConfig& cfg);

enum class StateKind { Scattering, BoundCandidate, ResonanceCandidate, Degenerate };
std::string_view to_string(StateKind kind);

struct StateClass {
  StateKind kind = StateKind::Degenerate;
  std::size_t inside_count = 0;
  std::size_t unit_count = 0;
};

StateClass classify_roots(const RootSet& rs, double tol = kDefaultUnitTolerance);

// Quartic residual |p(w)| with w = z or 1/z, whichever lies in the closed unit disk.
double quartic_residual(const QuarticCoefficients& c, cplx z);

}  // namespace wqed
