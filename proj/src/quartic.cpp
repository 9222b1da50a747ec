#include "wqed/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "wqed/error.hpp"

namespace wqed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWeightCutoff = 1e-13;
constexpr double kMergeCutoff = 1e-12;
constexpr int kNewtonSteps = 2;

// The two rational terms of omega^K: 2 z w / (1 + z^2 - 2 z c).
struct Term {
  double weight;
  double cosine;
};

struct Reduction {
  Term terms[2];
  std::size_t count = 0;  // active terms after dropping and merging
};

Reduction reduce(double K, const CouplingConfig& cfg) {
  const Term left{cfg.gamma_l * std::sin(cfg.k0 + K), std::cos(cfg.k0 + K)};
  const Term right{cfg.gamma_r * std::sin(cfg.k0 - K), std::cos(cfg.k0 - K)};
  Reduction r;
  for (const Term& t : {left, right}) {
    if (std::abs(t.weight) > kWeightCutoff) r.terms[r.count++] = t;
  }
  if (r.count == 2 && std::abs(r.terms[0].cosine - r.terms[1].cosine) < kMergeCutoff) {
    r.terms[0].weight += r.terms[1].weight;
    r.count = std::abs(r.terms[0].weight) > kWeightCutoff ? 1 : 0;
  }
  return r;
}

// Palindromic polynomial, coefficients from the highest power down.
struct Poly {
  std::array<cplx, 5> a{};
  int degree = 0;

  cplx eval(cplx z) const {
    cplx v = a[0];
    for (int i = 1; i <= degree; ++i) v = v * z + a[static_cast<std::size_t>(i)];
    return v;
  }
  cplx derivative(cplx z) const {
    cplx v = a[0] * static_cast<double>(degree);
    for (int i = 1; i < degree; ++i) {
      v = v * z + a[static_cast<std::size_t>(i)] * static_cast<double>(degree - i);
    }
    return v;
  }
  double residual(cplx z) const {
    const cplx w = std::abs(z) <= 1.0 ? z : 1.0 / z;
    return std::abs(eval(w));
  }
};

// Larger-magnitude root first, the other from Vieta, so neither loses digits.
std::pair<cplx, cplx> stable_quadratic(cplx b, cplx c) {
  cplx s = std::sqrt(b * b - 4.0 * c);
  if (std::real(std::conj(b) * s) < 0.0) s = -s;
  const cplx q = -0.5 * (b + s);
  if (q == cplx(0.0)) return {cplx(0.0), cplx(0.0)};
  return {q, c / q};
}

// Roots of z^2 - u z + 1 = 0, inside member first.
std::pair<cplx, cplx> reciprocal_pair(cplx u) {
  const cplx outer = stable_quadratic(-u, cplx(1.0)).first;
  if (outer == cplx(0.0)) return {cplx(0.0), cplx(kInf, 0.0)};
  return {1.0 / outer, outer};
}

cplx polish(const Poly& p, cplx z) {
  double r = std::abs(p.eval(z));
  for (int step = 0; step < kNewtonSteps; ++step) {
    const cplx d = p.derivative(z);
    if (d == cplx(0.0)) break;
    const cplx next = z - p.eval(z) / d;
    const double rn = std::abs(p.eval(next));
    if (!(rn < r)) break;
    z = next;
    r = rn;
  }
  return z;
}

double root_key_magnitude(cplx z) { return std::round(std::abs(z) * 1e10); }

void finalize(RootSet& rs) {
  auto begin = rs.roots.begin();
  auto end = begin + static_cast<std::ptrdiff_t>(rs.count);
  std::sort(begin, end, [](cplx a, cplx b) {
    const double ma = root_key_magnitude(a);
    const double mb = root_key_magnitude(b);
    if (ma != mb) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
  for (std::size_t i = 0; i < 4; ++i) {
    rs.magnitudes[i] = i < rs.count ? std::abs(rs.roots[i]) : 0.0;
  }
  const auto mismatch = [&](std::size_t i, std::size_t j) {
    const cplx zi = rs.roots[i];
    const cplx zj = rs.roots[j];
    if (std::isinf(std::abs(zi)) || std::isinf(std::abs(zj))) {
      const cplx finite = std::isinf(std::abs(zi)) ? zj : zi;
      return std::isinf(std::abs(zi)) && std::isinf(std::abs(zj)) ? kInf : std::abs(finite);
    }
    return std::abs(zi * zj - 1.0);
  };
  if (rs.count == 2) {
    rs.pairing[0] = {0, 1};
  } else if (rs.count == 4) {
    const std::pair<std::size_t, std::size_t> options[3][2] = {
        {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
    // Greedy: the single best-matched pair fixes the matching.
    double best = kInf;
    std::size_t choice = 0;
    for (std::size_t o = 0; o < 3; ++o) {
      for (const auto& pr : options[o]) {
        const double m = mismatch(pr.first, pr.second);
        if (m < best) {
          best = m;
          choice = o;
        }
      }
    }
    rs.pairing = {options[choice][0], options[choice][1]};
  }
}

void check_poles(const RootSet& rs, double K, const CouplingConfig& cfg) {
  const double phases[2] = {cfg.k0 + K, cfg.k0 - K};
  const bool active[2] = {std::abs(cfg.gamma_l * std::sin(phases[0])) > kWeightCutoff,
                          std::abs(cfg.gamma_r * std::sin(phases[1])) > kWeightCutoff};
  for (std::size_t i = 0; i < rs.count; ++i) {
    for (int t = 0; t < 2; ++t) {
      if (!active[t]) continue;
      for (double sign : {1.0, -1.0}) {
        if (std::abs(rs.roots[i] - std::polar(1.0, sign * phases[t])) < kPoleTolerance) {
          std::ostringstream msg;
          msg << "root " << rs.roots[i] << " lands on a pole of omega^K at K = " << K;
          throw Error(ErrorCode::NoConvergence, msg.str());
        }
      }
    }
  }
}

Poly reduced_poly(const Reduction& red, double omega) {
  Poly p;
  const Term& t = red.terms[0];
  p.degree = 2;
  p.a = {cplx(omega), cplx(-2.0 * (t.cosine * omega + t.weight)), cplx(omega), 0.0, 0.0};
  return p;
}

}  // namespace

QuarticCoefficients quartic_coefficients(double K, double omega, const CouplingConfig& cfg) {
  const double sp = std::sin(cfg.k0 + K);
  const double sm = std::sin(cfg.k0 - K);
  const double cp = std::cos(cfg.k0 + K);
  const double cm = std::cos(cfg.k0 - K);
  const double gl = cfg.gamma_l;
  const double gr = cfg.gamma_r;
  const double c3 = -2.0 * (omega * (cp + cm) + gl * sp + gr * sm);
  const double c2 = 2.0 * (omega * (1.0 + 2.0 * cp * cm) + 2.0 * (gl * sp * cm + gr * sm * cp));
  return {cplx(omega), cplx(c3), cplx(c2), cplx(c3), cplx(omega)};
}

double quartic_residual(const QuarticCoefficients& c, cplx z) {
  Poly p;
  p.degree = 4;
  p.a = {c.c4, c.c3, c.c2, c.c1, c.c0};
  return p.residual(z);
}

RootSet solve_reciprocal_quartic(double K, double omega, const CouplingConfig& cfg) {
  cfg.validate();
  if (std::abs(omega) < kDegenerateOmega) {
    throw Error(ErrorCode::DegenerateOmega, "omega = 0 needs the reduced equation");
  }
  const Reduction red = reduce(K, cfg);
  RootSet rs;
  Poly p;
  std::vector<cplx> us;
  if (red.count == 2) {
    const QuarticCoefficients c = quartic_coefficients(K, omega, cfg);
    p.degree = 4;
    p.a = {c.c4, c.c3, c.c2, c.c1, c.c0};
    const auto [u1, u2] = stable_quadratic(c.c3 / omega, c.c2 / omega - 2.0);
    us = {u1, u2};
  } else if (red.count == 1) {
    p = reduced_poly(red, omega);
    us = {2.0 * (red.terms[0].cosine + red.terms[0].weight / omega)};
  }
  for (const cplx u : us) {
    const cplx z = polish(p, reciprocal_pair(u).first);
    rs.roots[rs.count++] = z;
    rs.roots[rs.count++] = 1.0 / z;
  }
  finalize(rs);
  check_poles(rs, K, cfg);

  const double tol = 1e-9 * std::max(1.0, std::abs(omega));
  for (std::size_t i = 0; i < rs.count; ++i) {
    const double r = p.residual(rs.roots[i]);
    if (!(r < tol)) {
      std::ostringstream msg;
      msg << "root " << rs.roots[i] << " has residual " << r << " at K = " << K
          << ", omega = " << omega;
      throw Error(ErrorCode::NoConvergence, msg.str());
    }
  }
  return rs;
}

RootSet solve_zero_energy(double K, const CouplingConfig& cfg) {
  cfg.validate();
  const Reduction red = reduce(K, cfg);
  RootSet rs;
  rs.roots[rs.count++] = cplx(0.0);
  rs.roots[rs.count++] = cplx(kInf, 0.0);
  if (red.count == 2) {
    const Term& a = red.terms[0];
    const Term& b = red.terms[1];
    const double lead = a.weight + b.weight;
    // Numerator of omega^K: lead z^2 - 2 (w_a c_b + w_b c_a) z + lead.
    const double mid = a.weight * b.cosine + b.weight * a.cosine;
    if (std::abs(lead) > kWeightCutoff) {
      const cplx inner = reciprocal_pair(cplx(2.0 * mid / lead)).first;
      rs.roots[rs.count++] = inner;
      rs.roots[rs.count++] = 1.0 / inner;
    } else {
      rs.roots[rs.count++] = cplx(0.0);
      rs.roots[rs.count++] = cplx(kInf, 0.0);
    }
  }
  finalize(rs);
  return rs;
}

RootSet solve_roots(double K, double omega, const CouplingConfig& cfg) {
  if (std::abs(omega) < kDegenerateOmega) return solve_zero_energy(K, cfg);
  return solve_reciprocal_quartic(K, omega, cfg);
}

std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Scattering: return "Scattering";
    case StateKind::BoundCandidate: return "BoundCandidate";
    case StateKind::ResonanceCandidate: return "ResonanceCandidate";
    case StateKind::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

StateClass classify_roots(const RootSet& rs, double tol) {
  StateClass sc;
  for (std::size_t i = 0; i < rs.count; ++i) {
    const double m = rs.magnitudes[i];
    if (std::abs(m - 1.0) <= tol) {
      ++sc.unit_count;
    } else if (m < 1.0 - tol) {
      ++sc.inside_count;
    }
  }
  const double merge = std::sqrt(tol);
  for (std::size_t i = 0; i < rs.count; ++i) {
    for (std::size_t j = i + 1; j < rs.count; ++j) {
      if (std::isinf(rs.magnitudes[i]) || std::isinf(rs.magnitudes[j])) continue;
      if (std::abs(rs.roots[i] - rs.roots[j]) < merge) return sc;
    }
  }
  if (rs.count == 0) return sc;
  if (sc.unit_count == rs.count) {
    sc.kind = StateKind::Scattering;
  } else if (sc.unit_count == 0 && sc.inside_count == rs.count / 2) {
    sc.kind = StateKind::BoundCandidate;
  } else if (rs.count == 4 && sc.inside_count == 1 && sc.unit_count == 2) {
    sc.kind = StateKind::ResonanceCandidate;
  }
  return sc;
}

}  // namespace wqed
