#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wqed/error.hpp"
#include "wqed/model.hpp"
#include "wqed/parallel.hpp"
#include "wqed/quartic.hpp"

namespace wqed {

// omega^K(z), g+(z), g-(z): H|z> = omega^K |z> + i g+ |z0+> + i g- |z0->, with
// z0+- = exp(i(k0 +- K)).
struct AnsatzImage {
  cplx omega_z;
  cplx g_plus;
  cplx g_minus;
};

AnsatzImage ansatz_image(cplx z, double K, const CouplingConfig& cfg);

// <z|z'> summed over Delta >= 1.
cplx ansatz_overlap(cplx z, cplx z_prime);

// Real for opposite-sign real inside roots, purely imaginary for a conjugate pair.
cplx bound_determinant(double omega, double K, const CouplingConfig& cfg,
                       double tol = kDefaultUnitTolerance);

struct BoundState {
  double k_momentum = 0.0;
  double energy = 0.0;
  cplx z1;
  cplx z2;
  cplx amp_a;
  cplx amp_b;
  std::size_t components = 2;  // 1 for the closed-form single-root states
  bool degenerate = false;     // z = 0: the state is not normalizable as a decaying profile
};

struct BoundSearch {
  std::size_t samples = 512;
  double tol_unit = kDefaultUnitTolerance;
  std::size_t q_grid = kDefaultQGrid;
};

BoundState find_bound_state(double K, const CouplingConfig& cfg, const BoundSearch& search = {});

struct BoundPoint {
  double k_momentum = 0.0;
  std::optional<BoundState> state;
  std::optional<ErrorCode> failure;
};

// One record per grid entry, in grid order. Failures are recorded per point.
std::vector<BoundPoint> bound_dispersion(const CouplingConfig& cfg, std::span<const double> k_grid,
                                         const BoundSearch& search = {}, Exec exec = Exec::Parallel);

std::vector<double> bound_wavefunction(const BoundState& bs, std::size_t delta_max);

BoundState special_bound_k0(const CouplingConfig& cfg);
BoundState chiral_bound(double K, const CouplingConfig& cfg);

// max over both constraints of |A g(z1) + B g(z2)|.
double bound_constraint_residual(const BoundState& bs, const CouplingConfig& cfg);

}  // namespace wqed
