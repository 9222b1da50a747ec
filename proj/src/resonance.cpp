#include "wqed/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wqed/error.hpp"
#include "wqed/spectrum.hpp"

namespace wqed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSingularCondition = 1e12;
constexpr double kBranchJump = 0.2;

// g(z)/z for both constraints, finite at z = 0.
std::pair<cplx, cplx> reduced_g(cplx z, double K, const CouplingConfig& cfg) {
  const double cp = std::cos(cfg.k0 + K);
  const double cm = std::cos(cfg.k0 - K);
  const auto part = [&](double gamma, double c) {
    if (gamma == 0.0) return cplx(0.0);
    return 2.0 * gamma * (z - c) / (1.0 + z * z - 2.0 * z * c);
  };
  return {part(cfg.gamma_l, cp), part(cfg.gamma_r, cm)};
}

struct Crossings {
  double left = 0.0;
  double right = 0.0;
  bool broad = false;
};

Crossings half_level_crossings(const ResonanceProfile& p, std::size_t j, double level) {
  const auto& w = p.omega_grid;
  const auto& c = p.c_squared;
  Crossings out;
  std::size_t k = j;
  while (k > 0 && p.valid(k - 1) && c[k - 1] >= level) --k;
  if (k == 0 || !p.valid(k - 1)) {
    out.broad = true;
    out.left = w[k];
  } else {
    const double t = (level - c[k - 1]) / (c[k] - c[k - 1]);
    out.left = w[k - 1] + t * (w[k] - w[k - 1]);
  }
  k = j;
  const std::size_t last = w.size() - 1;
  while (k < last && p.valid(k + 1) && c[k + 1] >= level) ++k;
  if (k == last || !p.valid(k + 1)) {
    out.broad = true;
    out.right = w[k];
  } else {
    const double t = (c[k] - level) / (c[k] - c[k + 1]);
    out.right = w[k] + t * (w[k + 1] - w[k]);
  }
  return out;
}

// Lowest point reached walking away from j while the terrain stays at or below the peak.
double flank_minimum(const ResonanceProfile& p, std::size_t j, int dir) {
  const auto& c = p.c_squared;
  double low = c[j];
  auto k = static_cast<std::ptrdiff_t>(j) + dir;
  const auto n = static_cast<std::ptrdiff_t>(c.size());
  while (k >= 0 && k < n && p.valid(static_cast<std::size_t>(k)) &&
         c[static_cast<std::size_t>(k)] <= c[j]) {
    low = std::min(low, c[static_cast<std::size_t>(k)]);
    k += dir;
  }
  return low;
}

PeakReport measure(const ResonanceProfile& p, std::size_t j, double reference) {
  PeakReport r;
  r.omega_peak = p.omega_grid[j];
  r.c_squared_peak = p.c_squared[j];
  r.reference = reference;
  const Crossings x = half_level_crossings(p, j, 0.5 * (p.c_squared[j] + reference));
  r.omega_left = x.left;
  r.omega_right = x.right;
  r.fwhm = x.right - x.left;
  r.quality = x.broad ? PeakQuality::Broad : PeakQuality::Sharp;
  return r;
}

}  // namespace

ResonanceSolution solve_resonance(double K, double omega, const CouplingConfig& cfg, double tol) {
  const RootSet rs = solve_roots(K, omega, cfg);
  if (classify_roots(rs, tol).kind != StateKind::ResonanceCandidate) {
    std::ostringstream msg;
    msg << "(K, omega) = (" << K << ", " << omega << ") is not a resonance candidate";
    throw Error(ErrorCode::NotResonanceCandidate, msg.str());
  }
  ResonanceSolution sol;
  sol.k_momentum = K;
  sol.energy = omega;
  cplx forward{};
  cplx backward{};
  for (std::size_t i = 0; i < rs.count; ++i) {
    const double m = rs.magnitudes[i];
    if (m < 1.0 - tol) {
      sol.z_b = rs.roots[i];
    } else if (std::abs(m - 1.0) <= tol) {
      if (rs.roots[i].imag() > 0.0) {
        forward = rs.roots[i];
      } else {
        backward = rs.roots[i];
      }
    }
  }
  sol.q = std::arg(forward);

  const double zb_abs = std::abs(sol.z_b);
  const cplx zb_phase = zb_abs > 0.0 ? sol.z_b / zb_abs : cplx(1.0);
  const auto [hp, hm] = reduced_g(sol.z_b, K, cfg);
  const cplx scale = std::sqrt(1.0 - zb_abs * zb_abs) * zb_phase;
  const cplx bp = scale * hp;
  const cplx bm = scale * hm;
  const AnsatzImage fw = ansatz_image(forward, K, cfg);
  const AnsatzImage bw = ansatz_image(backward, K, cfg);

  const cplx det = bp * bw.g_minus - bw.g_plus * bm;
  const double frob2 = std::norm(bp) + std::norm(bm) + std::norm(bw.g_plus) + std::norm(bw.g_minus);
  sol.condition = std::abs(det) > 0.0 ? frob2 / std::abs(det) : std::numeric_limits<double>::infinity();
  if (!(sol.condition < kSingularCondition)) {
    std::ostringstream msg;
    msg << "resonance system is singular (condition " << sol.condition << ") at K = " << K
        << ", omega = " << omega;
    throw Error(ErrorCode::SingularSystem, msg.str());
  }
  const cplx rp = -fw.g_plus;
  const cplx rm = -fw.g_minus;
  sol.weight_c = (rp * bw.g_minus - bw.g_plus * rm) / det;
  sol.beta = (bp * rm - bm * rp) / det;
  sol.phase_phi = std::arg(sol.beta);
  sol.residual = std::max(std::abs(sol.weight_c * bp + fw.g_plus + sol.beta * bw.g_plus),
                          std::abs(sol.weight_c * bm + fw.g_minus + sol.beta * bw.g_minus));
  return sol;
}

std::string_view to_string(WindowPart part) {
  switch (part) {
    case WindowPart::Full: return "full";
    case WindowPart::Negative: return "negative";
    case WindowPart::Positive: return "positive";
  }
  return "unknown";
}

std::optional<EnergyWindow> resonance_window(double K, const CouplingConfig& cfg, WindowPart part) {
  double e1 = 0.0;
  double e2 = 0.0;
  try {
    e1 = ansatz_image(cplx(1.0), K, cfg).omega_z.real();
    e2 = ansatz_image(cplx(-1.0), K, cfg).omega_z.real();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PoleAtZ) throw;
    return std::nullopt;
  }
  EnergyWindow w{std::min(e1, e2), std::max(e1, e2)};
  if (part == WindowPart::Negative) {
    if (!(w.lower < 0.0)) return std::nullopt;
    w.upper = std::min(w.upper, 0.0);
  } else if (part == WindowPart::Positive) {
    if (!(w.upper > 0.0)) return std::nullopt;
    w.lower = std::max(w.lower, 0.0);
  }
  if (!(w.upper > w.lower)) return std::nullopt;
  return w;
}

std::vector<EnergyWindow> resonance_windows(double K, const CouplingConfig& cfg, double tol) {
  std::vector<EnergyWindow> out;
  for (WindowPart part : {WindowPart::Negative, WindowPart::Positive}) {
    const auto w = resonance_window(K, cfg, part);
    if (!w) continue;
    const double mid = 0.5 * (w->lower + w->upper);
    try {
      if (classify_roots(solve_roots(K, mid, cfg), tol).kind == StateKind::ResonanceCandidate) {
        out.push_back(*w);
      }
    } catch (const Error&) {
    }
  }
  return out;
}

std::size_t ResonanceProfile::valid_count() const {
  std::size_t n = 0;
  for (std::size_t j = 0; j < c_squared.size(); ++j) n += valid(j) ? 1 : 0;
  return n;
}

ResonanceProfile resonance_scan(double K, double omega_lo, double omega_hi, std::size_t points,
                                const CouplingConfig& cfg, Exec exec, double tol) {
  cfg.validate();
  if (points < 32) throw Error(ErrorCode::InvalidArgument, "a resonance scan needs at least 32 points");
  if (!(omega_hi > omega_lo)) throw Error(ErrorCode::InvalidArgument, "empty omega range");
  ResonanceProfile p;
  p.k_momentum = K;
  p.omega_grid.resize(points);
  p.c_squared.assign(points, kNaN);
  p.phi_unwrapped.assign(points, kNaN);
  p.beta_modulus.assign(points, kNaN);
  p.zb_modulus.assign(points, kNaN);
  std::vector<double> raw(points, kNaN);
  const double span = omega_hi - omega_lo;
  for_each_index(exec, points, [&](std::size_t j) {
    const double omega =
        omega_lo + span * static_cast<double>(j + 1) / static_cast<double>(points + 1);
    p.omega_grid[j] = omega;
    try {
      const ResonanceSolution s = solve_resonance(K, omega, cfg, tol);
      p.c_squared[j] = std::norm(s.weight_c);
      p.beta_modulus[j] = std::abs(s.beta);
      p.zb_modulus[j] = std::abs(s.z_b);
      raw[j] = s.phase_phi;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidConfig) throw;
    }
  });

  bool started = false;
  double prev_raw = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j < points; ++j) {
    if (!p.valid(j)) continue;
    if (!started) {
      prev = raw[j];
      started = true;
    } else {
      prev += std::remainder(raw[j] - prev_raw, 2.0 * kPi);
    }
    prev_raw = raw[j];
    p.phi_unwrapped[j] = prev;
  }
  if (!started) {
    std::ostringstream msg;
    msg << "no resonance candidate in [" << omega_lo << ", " << omega_hi << "] at K = " << K;
    throw Error(ErrorCode::EmptyRange, msg.str());
  }
  return p;
}

std::string_view to_string(PeakQuality quality) {
  switch (quality) {
    case PeakQuality::Sharp: return "Sharp";
    case PeakQuality::Broad: return "Broad";
    case PeakQuality::NoPeak: return "NoPeak";
  }
  return "Unknown";
}

PeakReport locate_peak(const ResonanceProfile& profile, double prominence) {
  const auto& c = profile.c_squared;
  const std::size_t n = c.size();
  PeakReport best;
  double best_ratio = 0.0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    if (!profile.valid(j - 1) || !profile.valid(j) || !profile.valid(j + 1)) continue;
    if (!(c[j] > c[j - 1] && c[j] >= c[j + 1])) continue;
    const double reference = std::max(flank_minimum(profile, j, -1), flank_minimum(profile, j, 1));
    if (!(reference > 0.0)) continue;
    const double ratio = c[j] / reference;
    if (ratio < prominence || ratio <= best_ratio) continue;
    best_ratio = ratio;
    best = measure(profile, j, reference);
  }
  if (best_ratio == 0.0) {
    best = PeakReport{};
    std::size_t top = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (profile.valid(j) && (top == n || c[j] > c[top])) top = j;
    }
    if (top < n) {
      best.omega_peak = profile.omega_grid[top];
      best.c_squared_peak = c[top];
    }
  }
  return best;
}

PeakReport refine_peak(const ResonanceProfile& coarse, const PeakReport& report,
                       const CouplingConfig& cfg, std::size_t passes, Exec exec, double tol) {
  if (report.quality == PeakQuality::NoPeak || coarse.omega_grid.empty()) return report;
  const double lo_limit = coarse.omega_grid.front();
  const double hi_limit = coarse.omega_grid.back();
  const std::size_t points = coarse.omega_grid.size();
  PeakReport current = report;
  for (std::size_t pass = 0; pass < passes; ++pass) {
    const double lo = std::max(lo_limit, current.omega_left - current.fwhm);
    const double hi = std::min(hi_limit, current.omega_right + current.fwhm);
    if (!(hi > lo)) break;
    ResonanceProfile zoom;
    try {
      zoom = resonance_scan(coarse.k_momentum, lo, hi, points, cfg, exec, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyRange) throw;
      break;
    }
    std::size_t top = points;
    for (std::size_t j = 1; j + 1 < points; ++j) {
      if (zoom.valid(j) && (top == points || zoom.c_squared[j] > zoom.c_squared[top])) top = j;
    }
    if (top == points || zoom.c_squared[top] < current.c_squared_peak) break;
    PeakReport next = measure(zoom, top, current.reference);
    // Crossings that run off the zoom window fall back to the coarse measurement.
    if (next.quality == PeakQuality::Broad) break;
    current = next;
  }
  current.quality = report.quality;
  return current;
}

PeakReport resonance_peak(double K, const EnergyWindow& window, const CouplingConfig& cfg,
                          const PeakSearch& search, Exec exec) {
  const ResonanceProfile p =
      resonance_scan(K, window.lower, window.upper, search.points, cfg, exec, search.tol);
  const PeakReport r = locate_peak(p, search.prominence);
  return refine_peak(p, r, cfg, search.refine_passes, exec, search.tol);
}

std::vector<BranchPoint> resonance_branches(const CouplingConfig& cfg, std::span<const double> k_grid,
                                            const PeakSearch& search, Exec exec) {
  cfg.validate();
  std::vector<std::vector<BranchPoint>> per_k(k_grid.size());
  for_each_index(exec, k_grid.size(), [&](std::size_t i) {
    const double K = k_grid[i];
    for (const EnergyWindow& w : resonance_windows(K, cfg, search.tol)) {
      PeakReport r;
      try {
        r = resonance_peak(K, w, cfg, search, Exec::Serial);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig) throw;
        continue;
      }
      if (r.quality == PeakQuality::NoPeak) continue;
      BranchPoint bp;
      bp.k_momentum = K;
      bp.omega_peak = r.omega_peak;
      bp.fwhm = r.fwhm;
      bp.quality = r.quality;
      bp.c_squared_peak = r.c_squared_peak;
      bp.window = w;
      try {
        bp.zb_modulus = std::abs(solve_resonance(K, r.omega_peak, cfg, search.tol).z_b);
      } catch (const Error&) {
        bp.zb_modulus = kNaN;
      }
      per_k[i].push_back(bp);
    }
    std::sort(per_k[i].begin(), per_k[i].end(),
              [](const BranchPoint& a, const BranchPoint& b) { return a.omega_peak < b.omega_peak; });
  });

  // Greedy one-to-one continuation from the previous K column.
  std::vector<BranchPoint> out;
  std::vector<BranchPoint> previous;
  std::size_t next_id = 0;
  for (auto& column : per_k) {
    struct Candidate {
      double distance;
      std::size_t prev;
      std::size_t cur;
    };
    std::vector<Candidate> candidates;
    for (std::size_t a = 0; a < previous.size(); ++a) {
      for (std::size_t b = 0; b < column.size(); ++b) {
        const double d = std::abs(column[b].omega_peak - previous[a].omega_peak);
        if (d <= kBranchJump * std::max(1.0, std::abs(previous[a].omega_peak))) {
          candidates.push_back({d, a, b});
        }
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& x, const Candidate& y) { return x.distance < y.distance; });
    std::vector<bool> prev_used(previous.size(), false);
    std::vector<bool> cur_used(column.size(), false);
    for (const Candidate& cand : candidates) {
      if (prev_used[cand.prev] || cur_used[cand.cur]) continue;
      prev_used[cand.prev] = true;
      cur_used[cand.cur] = true;
      column[cand.cur].branch_id = previous[cand.prev].branch_id;
    }
    for (std::size_t b = 0; b < column.size(); ++b) {
      if (!cur_used[b]) column[b].branch_id = next_id++;
    }
    out.insert(out.end(), column.begin(), column.end());
    previous = column;
  }
  return out;
}

}  // namespace wqed
