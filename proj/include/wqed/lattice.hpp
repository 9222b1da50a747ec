#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/parallel.hpp"
#include "wqed/resonance.hpp"
#include "wqed/spectrum.hpp"

namespace wqed {

inline constexpr std::size_t kMinLatticeSize = 4;
inline constexpr std::size_t kMaxLatticeSize = 1000;
inline constexpr std::size_t kDefaultLatticeSize = 300;

// Relative-coordinate Hamiltonian on Delta = 1..N, dense row-major.
struct TruncatedHamiltonian {
  double k_momentum = 0.0;
  std::size_t size = 0;
  std::vector<cplx> entries;

  // 1-based, matching Delta.
  cplx at(std::size_t delta, std::size_t delta_prime) const {
    return entries[(delta - 1) * size + (delta_prime - 1)];
  }
};

TruncatedHamiltonian build_truncated_hamiltonian(double K, const CouplingConfig& cfg, std::size_t n,
                                                 Exec exec = Exec::Parallel);

// y = H x. Each row sums in the same order on both paths.
std::vector<cplx> apply(const TruncatedHamiltonian& h, std::span<const cplx> x,
                        Exec exec = Exec::Parallel);

struct DeltaWindow {
  std::size_t lo = 1;
  std::size_t hi = 100;
};

struct ResidualReport {
  double interior_max = 0.0;
  double boundary_max = 0.0;
  DeltaWindow window;
};

ResidualReport ansatz_image_residual(cplx z, double K, const CouplingConfig& cfg, std::size_t n,
                                     DeltaWindow window = {}, Exec exec = Exec::Parallel);

ResidualReport eigenstate_residual(const BoundState& state, const CouplingConfig& cfg,
                                   std::size_t n, DeltaWindow window = {},
                                   Exec exec = Exec::Parallel);

// The propagating components never decay, so the candidate is multiplied by a
// smooth taper that is 1 up to N/4 and falls to 0 at N. Requires window.hi <= N/4.
ResidualReport eigenstate_residual(const ResonanceSolution& state, const CouplingConfig& cfg,
                                   std::size_t n, DeltaWindow window = {},
                                   Exec exec = Exec::Parallel);

double taper(std::size_t delta, std::size_t n);

}  // namespace wqed
