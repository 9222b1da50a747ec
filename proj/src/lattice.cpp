#include "wqed/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wqed/error.hpp"

namespace wqed {

namespace {

const cplx kI{0.0, 1.0};

void check_size(std::size_t n) {
  if (n < kMinLatticeSize || n > kMaxLatticeSize) {
    std::ostringstream msg;
    msg << "lattice size " << n << " outside [" << kMinLatticeSize << ", " << kMaxLatticeSize << "]";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

void check_window(DeltaWindow w, std::size_t limit) {
  if (w.lo < 1 || w.hi < w.lo || w.hi > limit) {
    std::ostringstream msg;
    msg << "window [" << w.lo << ", " << w.hi << "] must lie inside [1, " << limit << "]";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

ResidualReport residual_of(const TruncatedHamiltonian& h, std::span<const cplx> psi,
                           std::span<const cplx> expected, DeltaWindow window, Exec exec) {
  const std::vector<cplx> y = apply(h, psi, exec);
  ResidualReport r;
  r.window = window;
  for (std::size_t d = 1; d <= h.size; ++d) {
    const double e = std::abs(y[d - 1] - expected[d - 1]);
    if (d >= window.lo && d <= window.hi) {
      r.interior_max = std::max(r.interior_max, e);
    } else {
      r.boundary_max = std::max(r.boundary_max, e);
    }
  }
  return r;
}

// exp(-1/x) for x > 0, the usual C-infinity bump ingredient.
double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

TruncatedHamiltonian build_truncated_hamiltonian(double K, const CouplingConfig& cfg, std::size_t n,
                                                 Exec exec) {
  cfg.validate();
  check_size(n);
  // Entries only depend on |Delta +- Delta'| <= 2N.
  std::vector<cplx> phase(2 * n + 1);
  for (std::size_t m = 0; m <= 2 * n; ++m) {
    const double md = static_cast<double>(m);
    phase[m] = -kI * (cfg.gamma_r * std::polar(1.0, (cfg.k0 - K) * md) +
                      cfg.gamma_l * std::polar(1.0, (cfg.k0 + K) * md));
  }
  TruncatedHamiltonian h;
  h.k_momentum = K;
  h.size = n;
  h.entries.resize(n * n);
  for_each_index(exec, n, [&](std::size_t row) {
    const std::size_t d = row + 1;
    for (std::size_t col = 0; col < n; ++col) {
      const std::size_t dp = col + 1;
      const std::size_t diff = d > dp ? d - dp : dp - d;
      h.entries[row * n + col] = phase[d + dp] + phase[diff];
    }
  });
  return h;
}

std::vector<cplx> apply(const TruncatedHamiltonian& h, std::span<const cplx> x, Exec exec) {
  if (x.size() != h.size) throw Error(ErrorCode::InvalidArgument, "vector length does not match N");
  std::vector<cplx> y(h.size);
  for_each_index(exec, h.size, [&](std::size_t row) {
    const cplx* a = h.entries.data() + row * h.size;
    cplx acc{};
    for (std::size_t col = 0; col < h.size; ++col) acc += a[col] * x[col];
    y[row] = acc;
  });
  return y;
}

ResidualReport ansatz_image_residual(cplx z, double K, const CouplingConfig& cfg, std::size_t n,
                                     DeltaWindow window, Exec exec) {
  check_size(n);
  check_window(window, n / 2);
  if (std::abs(z) >= 1.0) throw Error(ErrorCode::DivergentAnsatz, "ansatz needs |z| < 1");
  const AnsatzImage img = ansatz_image(z, K, cfg);
  const cplx zp = std::polar(1.0, cfg.k0 + K);
  const cplx zm = std::polar(1.0, cfg.k0 - K);
  std::vector<cplx> psi(n);
  std::vector<cplx> expected(n);
  cplx pz = z;
  cplx pp = zp;
  cplx pm = zm;
  for (std::size_t d = 0; d < n; ++d) {
    psi[d] = pz;
    expected[d] = img.omega_z * pz + kI * img.g_plus * pp + kI * img.g_minus * pm;
    pz *= z;
    pp *= zp;
    pm *= zm;
  }
  return residual_of(build_truncated_hamiltonian(K, cfg, n, exec), psi, expected, window, exec);
}

ResidualReport eigenstate_residual(const BoundState& state, const CouplingConfig& cfg,
                                   std::size_t n, DeltaWindow window, Exec exec) {
  check_size(n);
  check_window(window, n);
  if (std::abs(state.z1) >= 1.0 || (state.components == 2 && std::abs(state.z2) >= 1.0)) {
    throw Error(ErrorCode::DivergentAnsatz, "bound state components need |z| < 1");
  }
  std::vector<cplx> psi(n);
  std::vector<cplx> expected(n);
  cplx p1 = state.z1;
  cplx p2 = state.z2;
  for (std::size_t d = 0; d < n; ++d) {
    psi[d] = state.amp_a * p1;
    if (state.components == 2) psi[d] += state.amp_b * p2;
    expected[d] = state.energy * psi[d];
    p1 *= state.z1;
    p2 *= state.z2;
  }
  return residual_of(build_truncated_hamiltonian(state.k_momentum, cfg, n, exec), psi, expected,
                     window, exec);
}

double taper(std::size_t delta, std::size_t n) {
  const double start = static_cast<double>(n) / 4.0;
  const double d = static_cast<double>(delta);
  if (d <= start) return 1.0;
  const double t = (d - start) / (static_cast<double>(n) - start);
  if (t >= 1.0) return 0.0;
  return bump(1.0 - t) / (bump(1.0 - t) + bump(t));
}

ResidualReport eigenstate_residual(const ResonanceSolution& state, const CouplingConfig& cfg,
                                   std::size_t n, DeltaWindow window, Exec exec) {
  check_size(n);
  check_window(window, n / 4);
  const double zb_abs = std::abs(state.z_b);
  if (zb_abs >= 1.0) throw Error(ErrorCode::DivergentAnsatz, "localized component needs |z_b| < 1");
  // C n_b z_b^Delta with n_b = sqrt(|z_b|^-2 - 1), written to stay finite as z_b -> 0.
  const cplx zb_phase = zb_abs > 0.0 ? state.z_b / zb_abs : cplx(1.0);
  const cplx local = state.weight_c * std::sqrt(1.0 - zb_abs * zb_abs) * zb_phase;
  const cplx fw = std::polar(1.0, state.q);
  const cplx bw = std::polar(1.0, -state.q);
  std::vector<cplx> psi(n);
  std::vector<cplx> expected(n);
  cplx pb{1.0};
  cplx pf = fw;
  cplx pw = bw;
  for (std::size_t d = 0; d < n; ++d) {
    const cplx v = local * pb + pf + state.beta * pw;
    psi[d] = v * taper(d + 1, n);
    expected[d] = state.energy * psi[d];
    pb *= state.z_b;
    pf *= fw;
    pw *= bw;
  }
  return residual_of(build_truncated_hamiltonian(state.k_momentum, cfg, n, exec), psi, expected,
                     window, exec);
}

}  // namespace wqed
