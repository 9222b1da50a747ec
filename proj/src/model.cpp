#include "wqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wqed/error.hpp"

namespace wqed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRateTolerance = 1e-12;

double circle_distance(double a, double b) { return std::abs(wrap_to_zone(a - b)); }

struct QSample {
  bool valid = false;
  double omega = 0.0;
  double k[2] = {0.0, 0.0};
  Band band[2] = {Band::Upper, Band::Upper};
};

BranchTag tag_of(const QSample& s) {
  if (s.band[0] != s.band[1]) return BranchTag::Mixed;
  return s.band[0] == Band::Upper ? BranchTag::UpperUpper : BranchTag::LowerLower;
}

bool same_bands(const QSample& a, const QSample& b) {
  return a.band[0] == b.band[0] && a.band[1] == b.band[1];
}

// Pole of the Gamma_R term sits at +k0, of the Gamma_L term at -k0.
bool pole_active(double pole, const CouplingConfig& cfg) {
  return pole > 0.0 ? cfg.gamma_r > 0.0 : cfg.gamma_l > 0.0;
}

double crossed_boundary(double k, double k0) {
  return circle_distance(k, k0) <= circle_distance(k, -k0) ? k0 : -k0;
}

struct Run {
  BranchTag tag;
  double lower = kInf;
  double upper = -kInf;
  bool lower_unbounded = false;
  bool upper_unbounded = false;
};

// The uniform grid plus one point between each pair of neighbouring band
// crossings, so a segment narrower than the grid step still gets a sample.
std::vector<double> continuum_q_points(double K, double k0, std::size_t grid_size) {
  std::vector<double> qs(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) qs[j] = q_sample(j, grid_size);
  const auto to_period = [](double q) {
    double r = std::remainder(q, 4.0 * kPi);
    if (r >= 2.0 * kPi) r -= 4.0 * kPi;
    if (r < -2.0 * kPi) r += 4.0 * kPi;
    return r;
  };
  std::vector<double> crossings;
  for (double b : {k0, -k0}) {
    crossings.push_back(to_period(2.0 * (b - K)));
    crossings.push_back(to_period(2.0 * (K - b)));
  }
  std::sort(crossings.begin(), crossings.end());
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    const double a = crossings[i];
    const double b = i + 1 < crossings.size() ? crossings[i + 1] : crossings.front() + 4.0 * kPi;
    if (b - a > 0.0) qs.push_back(to_period(0.5 * (a + b)));
  }
  std::sort(qs.begin(), qs.end());
  return qs;
}

void flag_side(Run& run, Band band) {
  if (band == Band::Upper) {
    run.upper_unbounded = true;
  } else {
    run.lower_unbounded = true;
  }
}

}  // namespace

CouplingConfig CouplingConfig::from_chirality(double chi, double k0) {
  if (!(chi >= 0.0 && chi <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "chirality must lie in [0, 1]");
  }
  CouplingConfig cfg{chi, 1.0 - chi, k0};
  cfg.validate();
  return cfg;
}

CouplingConfig CouplingConfig::from_rates(double gamma_r, double gamma_l, double k0) {
  CouplingConfig cfg{gamma_r, gamma_l, k0};
  cfg.validate();
  return cfg;
}

void CouplingConfig::validate() const {
  if (!std::isfinite(gamma_r) || !std::isfinite(gamma_l) || gamma_r < 0.0 || gamma_l < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "decay rates must be finite and non-negative");
  }
  if (std::abs(gamma_r + gamma_l - 1.0) > kRateTolerance) {
    std::ostringstream msg;
    msg << "gamma_r + gamma_l must equal 1, got " << gamma_r + gamma_l;
    throw Error(ErrorCode::InvalidConfig, msg.str());
  }
  if (!(k0 > 0.0 && k0 < kPi)) {
    throw Error(ErrorCode::InvalidConfig, "k0 must lie in (0, pi)");
  }
}

double wrap_to_zone(double k) {
  if (k > -kPi && k <= kPi) return k;
  double r = std::remainder(k, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double pole_distance(double k, const CouplingConfig& cfg) {
  double d = kInf;
  if (cfg.gamma_r > 0.0) d = std::min(d, circle_distance(k, cfg.k0));
  if (cfg.gamma_l > 0.0) d = std::min(d, circle_distance(k, -cfg.k0));
  return d;
}

double single_photon_energy(double k, const CouplingConfig& cfg) {
  k = wrap_to_zone(k);
  if (pole_distance(k, cfg) < kPoleTolerance) {
    std::ostringstream msg;
    msg << "k = " << k << " sits on the singularity at +-k0";
    throw Error(ErrorCode::PoleAtK, msg.str());
  }
  double e = 0.0;
  if (cfg.gamma_r > 0.0) e += 0.5 * cfg.gamma_r / std::tan(0.5 * (cfg.k0 - k));
  if (cfg.gamma_l > 0.0) e += 0.5 * cfg.gamma_l / std::tan(0.5 * (cfg.k0 + k));
  return e;
}

double free_pair_energy(double K, double q, const CouplingConfig& cfg) {
  return single_photon_energy(wrap_to_zone(K + 0.5 * q), cfg) +
         single_photon_energy(wrap_to_zone(K - 0.5 * q), cfg);
}

Band band_of(double k, double k0) {
  k = wrap_to_zone(k);
  return std::abs(k) < k0 ? Band::Upper : Band::Lower;
}

std::string_view to_string(BranchTag tag) {
  switch (tag) {
    case BranchTag::UpperUpper: return "upper-upper";
    case BranchTag::LowerLower: return "lower-lower";
    case BranchTag::Mixed: return "mixed";
  }
  return "unknown";
}

std::vector<BandInterval> continuum_bands(double K, const CouplingConfig& cfg,
                                          std::size_t grid_size, Exec exec) {
  cfg.validate();
  if (grid_size < 101) throw Error(ErrorCode::InvalidArgument, "grid_size must be at least 101");

  const std::vector<double> qs = continuum_q_points(K, cfg.k0, grid_size);
  std::vector<QSample> samples(qs.size());
  for_each_index(exec, qs.size(), [&](std::size_t j) {
    const double q = qs[j];
    QSample s;
    s.k[0] = wrap_to_zone(K + 0.5 * q);
    s.k[1] = wrap_to_zone(K - 0.5 * q);
    s.valid = pole_distance(s.k[0], cfg) >= kPoleTolerance &&
              pole_distance(s.k[1], cfg) >= kPoleTolerance;
    if (s.valid) {
      s.omega = single_photon_energy(s.k[0], cfg) + single_photon_energy(s.k[1], cfg);
      s.valid = std::isfinite(s.omega);
    }
    for (int c = 0; c < 2; ++c) s.band[c] = band_of(s.k[c], cfg.k0);
    samples[j] = s;
  });

  // Start the cyclic walk right after a break so no run wraps around the seam.
  const std::size_t n = samples.size();
  std::size_t start = n;
  for (std::size_t j = 0; j < n && start == n; ++j) {
    const QSample& cur = samples[j];
    const QSample& prev = samples[(j + n - 1) % n];
    if (cur.valid && (!prev.valid || !same_bands(prev, cur))) start = j;
  }

  // Across an active pole the two runs diverge towards the band each side
  // belongs to. Across an inactive boundary the curve is smooth, so the runs are
  // bridged to close the sampling gap between them.
  const auto link = [&](Run& before, Run& after, const QSample& a, const QSample& b) {
    bool divergent = false;
    for (int c = 0; c < 2; ++c) {
      if (a.band[c] == b.band[c]) continue;
      if (!pole_active(crossed_boundary(a.k[c], cfg.k0), cfg)) continue;
      flag_side(before, a.band[c]);
      flag_side(after, b.band[c]);
      divergent = true;
    }
    if (divergent || same_bands(a, b)) return;
    before.lower = std::min(before.lower, b.omega);
    before.upper = std::max(before.upper, b.omega);
    after.lower = std::min(after.lower, a.omega);
    after.upper = std::max(after.upper, a.omega);
  };

  std::vector<Run> runs;
  if (start == n) {
    Run run{tag_of(samples[0])};
    for (const auto& s : samples) {
      if (!s.valid) continue;
      run.lower = std::min(run.lower, s.omega);
      run.upper = std::max(run.upper, s.omega);
    }
    if (run.lower <= run.upper) runs.push_back(run);
  } else {
    const QSample* last = nullptr;
    bool gap = false;
    for (std::size_t step = 0; step < n; ++step) {
      const QSample& s = samples[(start + step) % n];
      if (!s.valid) {
        gap = true;
        continue;
      }
      if (last == nullptr || gap || !same_bands(*last, s)) {
        runs.push_back(Run{tag_of(s)});
        if (last != nullptr) link(runs[runs.size() - 2], runs.back(), *last, s);
        gap = false;
      }
      Run& run = runs.back();
      run.lower = std::min(run.lower, s.omega);
      run.upper = std::max(run.upper, s.omega);
      last = &s;
    }
    // Close the seam between the final run and the first one.
    if (last != nullptr) {
      link(runs.back(), runs.front(), *last, samples[start]);
    }
  }

  std::vector<BandInterval> out;
  for (BranchTag tag : {BranchTag::UpperUpper, BranchTag::LowerLower, BranchTag::Mixed}) {
    std::vector<BandInterval> group;
    for (const Run& r : runs) {
      if (r.tag != tag) continue;
      group.push_back({r.lower, r.upper, tag, r.lower_unbounded, r.upper_unbounded});
    }
    std::sort(group.begin(), group.end(), [](const BandInterval& a, const BandInterval& b) {
      const double la = a.lower_unbounded ? -kInf : a.lower;
      const double lb = b.lower_unbounded ? -kInf : b.lower;
      return la < lb;
    });
    std::vector<BandInterval> merged;
    for (const BandInterval& iv : group) {
      if (!merged.empty()) {
        BandInterval& cur = merged.back();
        if (cur.upper_unbounded || iv.lower_unbounded || iv.lower <= cur.upper) {
          cur.upper = std::max(cur.upper, iv.upper);
          cur.upper_unbounded = cur.upper_unbounded || iv.upper_unbounded;
          cur.lower_unbounded = cur.lower_unbounded || iv.lower_unbounded;
          continue;
        }
      }
      merged.push_back(iv);
    }
    out.insert(out.end(), merged.begin(), merged.end());
  }
  return out;
}

std::vector<EnergyWindow> uncovered_windows(std::span<const BandInterval> bands) {
  std::vector<std::pair<double, double>> spans;
  spans.reserve(bands.size());
  for (const BandInterval& b : bands) {
    spans.emplace_back(b.lower_unbounded ? -kInf : b.lower, b.upper_unbounded ? kInf : b.upper);
  }
  std::sort(spans.begin(), spans.end());
  std::vector<EnergyWindow> out;
  if (spans.empty()) return out;
  double reach = spans.front().second;
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first > reach && std::isfinite(reach)) out.push_back({reach, spans[i].first});
    reach = std::max(reach, spans[i].second);
  }
  return out;
}

bool GapRegion::contains(double K) const noexcept {
  const double a = std::abs(K);
  return a > k_lower && a < k_upper;
}

GapRegion gap_region(const CouplingConfig& cfg) {
  cfg.validate();
  if (cfg.is_chiral()) throw Error(ErrorCode::ChiralNoGap, "chiral coupling has no gap regime");
  const double a = cfg.k0;
  const double b = kPi - cfg.k0;
  return {std::min(a, b), std::max(a, b)};
}

std::optional<EnergyWindow> gap_window(double K, const CouplingConfig& cfg, std::size_t grid_size) {
  const auto bands = continuum_bands(K, cfg, grid_size);
  const auto windows = uncovered_windows(bands);
  if (windows.empty()) return std::nullopt;
  return *std::max_element(windows.begin(), windows.end(),
                           [](const EnergyWindow& a, const EnergyWindow& b) {
                             return a.width() < b.width();
                           });
}

DosHistogram pair_density_of_states(double K, const CouplingConfig& cfg, std::size_t grid_size,
                                    std::size_t bins, EnergyWindow range) {
  cfg.validate();
  if (bins < 10) throw Error(ErrorCode::InvalidArgument, "bins must be at least 10");
  if (grid_size < 2) throw Error(ErrorCode::InvalidArgument, "grid_size must be at least 2");
  if (!(range.upper > range.lower)) throw Error(ErrorCode::InvalidArgument, "empty energy range");

  DosHistogram h;
  h.k_momentum = K;
  h.bin_edges.resize(bins + 1);
  const double width = range.upper - range.lower;
  for (std::size_t b = 0; b <= bins; ++b) {
    h.bin_edges[b] = range.lower + width * static_cast<double>(b) / static_cast<double>(bins);
  }
  h.counts.assign(bins, 0.0);

  double total = 0.0;
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double q = q_sample(j, grid_size);
    const double k1 = wrap_to_zone(K + 0.5 * q);
    const double k2 = wrap_to_zone(K - 0.5 * q);
    if (pole_distance(k1, cfg) < kPoleTolerance || pole_distance(k2, cfg) < kPoleTolerance) continue;
    const double omega = single_photon_energy(k1, cfg) + single_photon_energy(k2, cfg);
    if (!(omega >= range.lower && omega < range.upper)) continue;
    auto b = static_cast<std::size_t>((omega - range.lower) / width * static_cast<double>(bins));
    b = std::min(b, bins - 1);
    h.counts[b] += 1.0;
    total += 1.0;
  }
  if (total > 0.0) {
    for (double& c : h.counts) c /= total;
  }
  return h;
}

}  // namespace wqed
