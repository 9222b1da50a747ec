#include "wqed/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wqed {

namespace {

constexpr double kDenominatorCutoff = 1e-12;
constexpr double kRealTolerance = 1e-9;
constexpr double kDeterminantGoal = 1e-14;
constexpr double kDeterminantAccept = 1e-8;
constexpr double kBisectionWidth = 1e-12;
constexpr double kConstraintTolerance = 1e-8;

cplx term(cplx z, double gamma, double cosine, cplx numerator) {
  const cplx den = 1.0 + z * z - 2.0 * z * cosine;
  if (std::abs(den) < kDenominatorCutoff) {
    std::ostringstream msg;
    msg << "z = " << z << " hits a pole of the ansatz image";
    throw Error(ErrorCode::PoleAtZ, msg.str());
  }
  return 2.0 * z * gamma * numerator / den;
}

// Inside roots of a bound candidate: either real with opposite signs (negative
// first) or a conjugate pair (negative imaginary part first). With that order
// D is real for the first kind and purely imaginary for the second.
struct InsidePair {
  cplx z1;
  cplx z2;
  bool conjugate = false;
};

std::optional<InsidePair> inside_pair(const RootSet& rs, double tol) {
  cplx inside[2];
  std::size_t n = 0;
  for (std::size_t i = 0; i < rs.count; ++i) {
    if (rs.magnitudes[i] < 1.0 - tol) {
      if (n == 2) return std::nullopt;
      inside[n++] = rs.roots[i];
    }
  }
  if (n != 2) return std::nullopt;
  const bool real0 = std::abs(inside[0].imag()) <= kRealTolerance;
  const bool real1 = std::abs(inside[1].imag()) <= kRealTolerance;
  if (real0 && real1) {
    if (inside[0].real() > inside[1].real()) std::swap(inside[0], inside[1]);
    if (!(inside[0].real() < 0.0 && inside[1].real() > 0.0)) return std::nullopt;
    return InsidePair{inside[0].real(), inside[1].real(), false};
  }
  if (real0 || real1) return std::nullopt;
  if (inside[0].imag() > inside[1].imag()) std::swap(inside[0], inside[1]);
  if (std::abs(inside[0] - std::conj(inside[1])) > kRealTolerance) return std::nullopt;
  // Snap to an exact conjugate pair so the state is real up to a global phase.
  const cplx z = 0.5 * (inside[0] + std::conj(inside[1]));
  return InsidePair{z, std::conj(z), true};
}

cplx determinant_of(cplx z1, cplx z2, double K, const CouplingConfig& cfg) {
  const AnsatzImage a = ansatz_image(z1, K, cfg);
  const AnsatzImage b = ansatz_image(z2, K, cfg);
  return a.g_minus * b.g_plus - a.g_plus * b.g_minus;
}

struct Sample {
  double value;  // Re D for a real pair, Im D for a conjugate pair
  bool conjugate;
};

// Nullopt when omega is not a bound candidate with a usable inside pair.
std::optional<Sample> sample_determinant(double omega, double K, const CouplingConfig& cfg,
                                         double tol) {
  if (std::abs(omega) < kDegenerateOmega) return std::nullopt;
  try {
    const RootSet rs = solve_reciprocal_quartic(K, omega, cfg);
    if (classify_roots(rs, tol).kind != StateKind::BoundCandidate) return std::nullopt;
    const auto pair = inside_pair(rs, tol);
    if (!pair) return std::nullopt;
    const cplx d = determinant_of(pair->z1, pair->z2, K, cfg);
    return Sample{pair->conjugate ? d.imag() : d.real(), pair->conjugate};
  } catch (const Error&) {
    return std::nullopt;
  }
}

double state_norm(const BoundState& bs) {
  double n2 = std::norm(bs.amp_a) * ansatz_overlap(bs.z1, bs.z1).real();
  if (bs.components == 2) {
    n2 += std::norm(bs.amp_b) * ansatz_overlap(bs.z2, bs.z2).real();
    n2 += 2.0 * (std::conj(bs.amp_a) * bs.amp_b * ansatz_overlap(bs.z1, bs.z2)).real();
  }
  return std::sqrt(n2);
}

}  // namespace

AnsatzImage ansatz_image(cplx z, double K, const CouplingConfig& cfg) {
  const double sp = std::sin(cfg.k0 + K);
  const double sm = std::sin(cfg.k0 - K);
  const double cp = std::cos(cfg.k0 + K);
  const double cm = std::cos(cfg.k0 - K);
  AnsatzImage img{};
  if (cfg.gamma_l > 0.0) {
    img.omega_z += term(z, cfg.gamma_l, cp, sp);
    img.g_plus = term(z, cfg.gamma_l, cp, z - cp);
  }
  if (cfg.gamma_r > 0.0) {
    img.omega_z += term(z, cfg.gamma_r, cm, sm);
    img.g_minus = term(z, cfg.gamma_r, cm, z - cm);
  }
  return img;
}

cplx ansatz_overlap(cplx z, cplx z_prime) {
  const cplx w = std::conj(z) * z_prime;
  return w / (1.0 - w);
}

cplx bound_determinant(double omega, double K, const CouplingConfig& cfg, double tol) {
  const RootSet rs = solve_roots(K, omega, cfg);
  if (classify_roots(rs, tol).kind != StateKind::BoundCandidate) {
    throw Error(ErrorCode::NotBoundCandidate, "roots at this (K, omega) are not a bound candidate");
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < rs.count; ++i) {
    if (rs.magnitudes[i] < 1.0 - tol) ++n;
  }
  if (n == 1) {
    // Reduced root sets carry a single localized root; the 2x2 system is one column.
    return 0.0;
  }
  const auto pair = inside_pair(rs, tol);
  if (!pair) {
    throw Error(ErrorCode::NotBoundCandidate, "inside roots are neither opposite-sign reals nor a conjugate pair");
  }
  return determinant_of(pair->z1, pair->z2, K, cfg);
}

BoundState find_bound_state(double K, const CouplingConfig& cfg, const BoundSearch& search) {
  const GapRegion region = gap_region(cfg);
  if (!region.contains(K)) {
    std::ostringstream msg;
    msg << "K = " << K << " lies outside the gap regime (" << region.k_lower << ", "
        << region.k_upper << ")";
    throw Error(ErrorCode::NotInGap, msg.str());
  }
  if (search.samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples");
  const auto window = gap_window(K, cfg, search.q_grid);
  if (!window) throw Error(ErrorCode::NoBoundState, "continuum leaves no window at this K");

  const std::size_t n = search.samples;
  std::vector<double> omegas(n);
  std::vector<std::optional<Sample>> dets(n);
  for (std::size_t i = 0; i < n; ++i) {
    omegas[i] = window->lower + window->width() * (static_cast<double>(i) + 0.5) /
                                    static_cast<double>(n);
    dets[i] = sample_determinant(omegas[i], K, cfg, search.tol_unit);
  }

  std::optional<double> root;
  for (std::size_t i = 0; i + 1 < n && !root; ++i) {
    if (!dets[i] || !dets[i + 1]) continue;
    if (dets[i]->conjugate != dets[i + 1]->conjugate) continue;
    if (omegas[i] * omegas[i + 1] <= 0.0) continue;
    const bool conjugate = dets[i]->conjugate;
    double lo = omegas[i];
    double hi = omegas[i + 1];
    double dlo = dets[i]->value;
    const double dhi = dets[i + 1]->value;
    if (dlo == 0.0) {
      root = lo;
      break;
    }
    if ((dlo > 0.0) == (dhi > 0.0)) continue;
    double mid = 0.5 * (lo + hi);
    std::optional<Sample> dmid = sample_determinant(mid, K, cfg, search.tol_unit);
    while (dmid && dmid->conjugate == conjugate && std::abs(dmid->value) > kDeterminantGoal &&
           hi - lo > kBisectionWidth) {
      if ((dmid->value > 0.0) == (dlo > 0.0)) {
        lo = mid;
        dlo = dmid->value;
      } else {
        hi = mid;
      }
      mid = 0.5 * (lo + hi);
      dmid = sample_determinant(mid, K, cfg, search.tol_unit);
    }
    if (dmid && dmid->conjugate == conjugate && std::abs(dmid->value) < kDeterminantAccept) root = mid;
  }
  if (!root) {
    std::ostringstream msg;
    msg << "no sign change of the determinant inside the gap window at K = " << K;
    throw Error(ErrorCode::NoBoundState, msg.str());
  }

  const RootSet rs = solve_reciprocal_quartic(K, *root, cfg);
  const auto pair = inside_pair(rs, search.tol_unit);
  if (!pair) throw Error(ErrorCode::NoConvergence, "bound candidate lost after bisection");
  BoundState bs;
  bs.k_momentum = K;
  bs.energy = *root;
  bs.z1 = pair->z1;
  bs.z2 = pair->z2;
  const AnsatzImage a = ansatz_image(bs.z1, K, cfg);
  const AnsatzImage b = ansatz_image(bs.z2, K, cfg);
  // Null vector of the better-conditioned row of [[g+(z1), g+(z2)], [g-(z1), g-(z2)]].
  const bool plus_row = std::norm(a.g_plus) + std::norm(b.g_plus) >=
                        std::norm(a.g_minus) + std::norm(b.g_minus);
  const cplx r1 = plus_row ? a.g_plus : a.g_minus;
  const cplx r2 = plus_row ? b.g_plus : b.g_minus;
  bs.amp_a = r2;
  bs.amp_b = -r1;
  const double norm = state_norm(bs);
  bs.amp_a /= norm;
  bs.amp_b /= norm;
  const double residual = bound_constraint_residual(bs, cfg);
  if (!(residual < kConstraintTolerance)) {
    std::ostringstream msg;
    msg << "bound state constraints violated by " << residual << " at K = " << K;
    throw Error(ErrorCode::NoConvergence, msg.str());
  }
  return bs;
}

std::vector<BoundPoint> bound_dispersion(const CouplingConfig& cfg, std::span<const double> k_grid,
                                         const BoundSearch& search, Exec exec) {
  std::vector<BoundPoint> out(k_grid.size());
  for_each_index(exec, k_grid.size(), [&](std::size_t i) {
    BoundPoint p;
    p.k_momentum = k_grid[i];
    try {
      p.state = find_bound_state(k_grid[i], cfg, search);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::ChiralNoGap) throw;
      p.failure = e.code();
    }
    out[i] = p;
  });
  return out;
}

std::vector<double> bound_wavefunction(const BoundState& bs, std::size_t delta_max) {
  if (delta_max < 1) throw Error(ErrorCode::InvalidArgument, "delta_max must be at least 1");
  std::vector<cplx> psi(delta_max);
  cplx p1 = bs.z1;
  cplx p2 = bs.z2;
  for (std::size_t d = 0; d < delta_max; ++d) {
    psi[d] = bs.amp_a * p1;
    if (bs.components == 2) psi[d] += bs.amp_b * p2;
    p1 *= bs.z1;
    p2 *= bs.z2;
  }
  std::size_t peak = 0;
  for (std::size_t d = 1; d < delta_max; ++d) {
    if (std::abs(psi[d]) > std::abs(psi[peak])) peak = d;
  }
  const double mag = std::abs(psi[peak]);
  const cplx phase = mag > 0.0 ? std::conj(psi[peak]) / mag : cplx(1.0);
  std::vector<double> out(delta_max);
  for (std::size_t d = 0; d < delta_max; ++d) {
    const cplx v = psi[d] * phase;
    if (std::abs(v.imag()) > kRealTolerance) {
      std::ostringstream msg;
      msg << "imaginary residue " << v.imag() << " at Delta = " << d + 1;
      throw Error(ErrorCode::NotRealizable, msg.str());
    }
    out[d] = v.real();
  }
  return out;
}

namespace {

BoundState single_component(double K, double z, const CouplingConfig& cfg) {
  if (1.0 - std::abs(z) < kDenominatorCutoff) {
    throw Error(ErrorCode::NoBoundState, "closed-form root sits on the unit circle");
  }
  BoundState bs;
  bs.k_momentum = K;
  bs.z1 = z;
  bs.z2 = z;
  bs.components = 1;
  const AnsatzImage img = ansatz_image(z, K, cfg);
  bs.energy = img.omega_z.real();
  if (std::abs(z) < kDenominatorCutoff) {
    bs.degenerate = true;
    bs.amp_a = 1.0;
    return bs;
  }
  bs.amp_a = std::sqrt(1.0 - z * z) / std::abs(z);
  return bs;
}

}  // namespace

BoundState special_bound_k0(const CouplingConfig& cfg) {
  cfg.validate();
  const BoundState bs = single_component(0.0, std::cos(cfg.k0), cfg);
  const AnsatzImage img = ansatz_image(bs.z1, 0.0, cfg);
  if (std::abs(img.g_plus) > 1e-12 || std::abs(img.g_minus) > 1e-12) {
    throw Error(ErrorCode::NoConvergence, "g+- do not vanish at z = cos(k0)");
  }
  return bs;
}

BoundState chiral_bound(double K, const CouplingConfig& cfg) {
  cfg.validate();
  if (!cfg.is_chiral()) throw Error(ErrorCode::NotChiral, "chiral_bound needs gamma_r or gamma_l = 0");
  const double z = cfg.gamma_r == 0.0 ? std::cos(cfg.k0 + K) : std::cos(cfg.k0 - K);
  return single_component(K, z, cfg);
}

double bound_constraint_residual(const BoundState& bs, const CouplingConfig& cfg) {
  const AnsatzImage a = ansatz_image(bs.z1, bs.k_momentum, cfg);
  cplx plus = bs.amp_a * a.g_plus;
  cplx minus = bs.amp_a * a.g_minus;
  if (bs.components == 2) {
    const AnsatzImage b = ansatz_image(bs.z2, bs.k_momentum, cfg);
    plus += bs.amp_b * b.g_plus;
    minus += bs.amp_b * b.g_minus;
  }
  return std::max(std::abs(plus), std::abs(minus));
}

}  // namespace wqed
