#include "wqed/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "wqed/error.hpp"
#include "wqed/lattice.hpp"
#include "wqed/quartic.hpp"
#include "wqed/spectrum.hpp"

#ifndef WQED_VERSION
#define WQED_VERSION "0.0.0"
#endif

namespace wqed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::UsageError, what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    usage(flag + ": '" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) usage(flag + ": '" + text + "' is not a number");
  return v;
}

GridSpec parse_grid(const std::string& text, const std::string& flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() != 3) usage(flag + " expects lo:hi:n, got '" + text + "'");
  GridSpec g;
  g.lo = parse_double(parts[0], flag);
  g.hi = parse_double(parts[1], flag);
  const double n = parse_double(parts[2], flag);
  if (n < 1.0 || n != std::floor(n) || n > 1e7) usage(flag + ": n must be a positive integer");
  g.n = static_cast<std::size_t>(n);
  if (g.n > 1 && !(g.hi > g.lo)) usage(flag + ": hi must exceed lo");
  return g;
}

std::string real_text(double v) { return format_real(v); }

// Adds the chi and k0 columns every row starts with.
std::vector<Cell> row_start(const RunConfig& rc) {
  return {Cell(rc.coupling.chirality()), Cell(rc.coupling.k0)};
}

void add_leading_columns(ScanTable& t) {
  t.add_column("chi");
  t.add_column("k0");
}

std::string status_text(const std::optional<ErrorCode>& c) {
  return c ? std::string(to_string(*c)) : std::string("ok");
}

void count_failure(ScanTable& t, const std::optional<ErrorCode>& c) {
  if (c && is_numerical_failure(*c)) ++t.numerical_failures;
}

Exec exec_of(const RunConfig& rc) { return rc.serial ? Exec::Serial : Exec::Parallel; }

std::vector<double> k_values(const RunConfig& rc, GridSpec fallback) {
  if (rc.k_range) return rc.k_range->values();
  if (rc.K) return {*rc.K};
  return fallback.values();
}

double single_k(const RunConfig& rc, double fallback) { return rc.K.value_or(fallback); }

ScanTable make_table(const RunConfig& rc) {
  ScanTable t;
  t.set_meta("tool", "wqed");
  t.set_meta("version", WQED_VERSION);
  t.set_meta("subcommand", rc.subcommand);
  t.set_meta("chi", real_text(rc.coupling.chirality()));
  t.set_meta("gamma_r", real_text(rc.coupling.gamma_r));
  t.set_meta("gamma_l", real_text(rc.coupling.gamma_l));
  t.set_meta("k0", real_text(rc.coupling.k0));
  t.set_meta("tol_unit_circle", real_text(rc.tol_unit));
  add_leading_columns(t);
  return t;
}

void grid_meta(ScanTable& t, const std::string& key, const std::vector<double>& ks) {
  if (ks.empty()) return;
  t.set_meta(key, real_text(ks.front()) + ":" + real_text(ks.back()) + ":" + std::to_string(ks.size()));
}

ScanTable run_single_dispersion(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const auto ks = rc.k_range ? rc.k_range->values() : GridSpec{-kPi, kPi, 801}.values();
  grid_meta(t, "k_range", ks);
  t.add_column("k");
  t.add_column("omega");
  t.add_column("band", ColumnType::Text);
  for (double k : ks) {
    double e = kNaN;
    try {
      e = single_photon_energy(k, rc.coupling);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::PoleAtK) throw;
    }
    auto row = row_start(rc);
    row.insert(row.end(), {Cell(k), Cell(e),
                           Cell(std::string(band_of(k, rc.coupling.k0) == Band::Upper ? "upper" : "lower"))});
    t.add_row(std::move(row));
  }
  return t;
}

ScanTable run_continuum(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const auto ks = k_values(rc, {0.0, kPi, 201});
  grid_meta(t, "K_range", ks);
  t.set_meta("q_grid", std::to_string(rc.grid));
  t.add_column("K");
  t.add_column("kind", ColumnType::Text);
  t.add_column("lower");
  t.add_column("upper");
  t.add_column("lower_unbounded", ColumnType::Integer);
  t.add_column("upper_unbounded", ColumnType::Integer);
  std::vector<std::vector<BandInterval>> bands(ks.size());
  for_each_index(exec_of(rc), ks.size(), [&](std::size_t i) {
    bands[i] = continuum_bands(ks[i], rc.coupling, rc.grid, Exec::Serial);
  });
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (const BandInterval& b : bands[i]) {
      auto row = row_start(rc);
      row.insert(row.end(), {Cell(ks[i]), Cell(std::string(to_string(b.branch_tag))), Cell(b.lower),
                             Cell(b.upper), Cell(std::int64_t{b.lower_unbounded}),
                             Cell(std::int64_t{b.upper_unbounded})});
      t.add_row(std::move(row));
    }
    for (const EnergyWindow& w : uncovered_windows(bands[i])) {
      auto row = row_start(rc);
      row.insert(row.end(), {Cell(ks[i]), Cell(std::string("uncovered")), Cell(w.lower),
                             Cell(w.upper), Cell(std::int64_t{0}), Cell(std::int64_t{0})});
      t.add_row(std::move(row));
    }
  }
  return t;
}

BoundSearch search_of(const RunConfig& rc) {
  BoundSearch s;
  s.tol_unit = rc.tol_unit;
  s.q_grid = rc.grid;
  return s;
}

// Bound states on a K grid: the closed form for chiral coupling, the
// determinant search otherwise.
std::vector<BoundPoint> bound_points(const RunConfig& rc, const std::vector<double>& ks) {
  if (!rc.coupling.is_chiral()) return bound_dispersion(rc.coupling, ks, search_of(rc), exec_of(rc));
  std::vector<BoundPoint> out(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    out[i].k_momentum = ks[i];
    try {
      out[i].state = chiral_bound(ks[i], rc.coupling);
    } catch (const Error& e) {
      out[i].failure = e.code();
    }
  }
  return out;
}

GridSpec default_gap_grid(const RunConfig& rc, double inset) {
  if (rc.coupling.is_chiral()) return {0.0, 1.9, 191};
  const GapRegion g = gap_region(rc.coupling);
  return {g.k_lower + inset, g.k_upper - inset, 200};
}

ScanTable run_bound_dispersion(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const auto ks = k_values(rc, default_gap_grid(rc, 0.05));
  grid_meta(t, "K_range", ks);
  t.set_meta("branch", rc.coupling.is_chiral() ? "chiral closed form" : "gap determinant");
  for (const char* c : {"K", "omega", "z1_re", "z1_im", "z2_re", "z2_im", "amp_a_re", "amp_a_im",
                        "amp_b_re", "amp_b_im"}) {
    t.add_column(c);
  }
  t.add_column("status", ColumnType::Text);
  for (const BoundPoint& p : bound_points(rc, ks)) {
    auto row = row_start(rc);
    row.push_back(p.k_momentum);
    if (p.state) {
      const BoundState& s = *p.state;
      const bool two = s.components == 2;
      row.insert(row.end(), {Cell(s.energy), Cell(s.z1.real()), Cell(s.z1.imag()),
                             Cell(two ? s.z2.real() : kNaN), Cell(two ? s.z2.imag() : kNaN),
                             Cell(s.amp_a.real()), Cell(s.amp_a.imag()),
                             Cell(two ? s.amp_b.real() : kNaN), Cell(two ? s.amp_b.imag() : kNaN)});
    } else {
      row.insert(row.end(), 9, Cell(kNaN));
    }
    row.push_back(status_text(p.failure));
    count_failure(t, p.failure);
    t.add_row(std::move(row));
  }
  return t;
}

BoundState state_at(const RunConfig& rc, double K) {
  if (rc.coupling.is_chiral()) return chiral_bound(K, rc.coupling);
  if (K == 0.0) return special_bound_k0(rc.coupling);
  return find_bound_state(K, rc.coupling, search_of(rc));
}

ScanTable run_state_profile(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const double K = single_k(rc, rc.coupling.is_chiral() ? 0.3 : 1.5);
  const BoundState s = state_at(rc, K);
  t.set_meta("K", real_text(K));
  t.set_meta("omega", real_text(s.energy));
  t.set_meta("z1_re", real_text(s.z1.real()));
  t.set_meta("z1_im", real_text(s.z1.imag()));
  if (s.components == 2) {
    t.set_meta("z2_re", real_text(s.z2.real()));
    t.set_meta("z2_im", real_text(s.z2.imag()));
  }
  t.set_meta("delta_max", std::to_string(rc.delta_max));
  for (const char* c : {"K", "omega"}) t.add_column(c);
  t.add_column("delta", ColumnType::Integer);
  t.add_column("psi");
  t.add_column("abs_psi");
  const auto psi = bound_wavefunction(s, rc.delta_max);
  for (std::size_t d = 0; d < psi.size(); ++d) {
    auto row = row_start(rc);
    row.insert(row.end(), {Cell(K), Cell(s.energy), Cell(static_cast<std::int64_t>(d + 1)),
                           Cell(psi[d]), Cell(std::abs(psi[d]))});
    t.add_row(std::move(row));
  }
  return t;
}

ScanTable run_z_magnitudes(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const auto ks = k_values(rc, default_gap_grid(rc, 1e-3));
  grid_meta(t, "K_range", ks);
  for (const char* c : {"K", "omega", "abs_z1", "abs_z2", "max_abs_z"}) t.add_column(c);
  t.add_column("status", ColumnType::Text);
  for (const BoundPoint& p : bound_points(rc, ks)) {
    auto row = row_start(rc);
    row.push_back(p.k_momentum);
    if (p.state) {
      const BoundState& s = *p.state;
      const double a1 = std::abs(s.z1);
      const double a2 = s.components == 2 ? std::abs(s.z2) : kNaN;
      row.insert(row.end(), {Cell(s.energy), Cell(a1), Cell(a2),
                             Cell(s.components == 2 ? std::max(a1, a2) : a1)});
    } else {
      row.insert(row.end(), 4, Cell(kNaN));
    }
    row.push_back(status_text(p.failure));
    count_failure(t, p.failure);
    t.add_row(std::move(row));
  }
  return t;
}

PeakSearch peak_search_of(const RunConfig& rc) {
  PeakSearch s;
  s.points = rc.points;
  s.tol = rc.tol_unit;
  return s;
}

EnergyWindow window_or_throw(const RunConfig& rc, double K) {
  const auto w = resonance_window(K, rc.coupling, rc.window);
  if (!w) {
    std::ostringstream msg;
    msg << "no " << to_string(rc.window) << " resonance window at K = " << K;
    throw Error(ErrorCode::EmptyRange, msg.str());
  }
  return *w;
}

ScanTable run_resonance_scan(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const double K = single_k(rc, 0.2);
  EnergyWindow w{};
  std::size_t points = rc.points;
  if (rc.omega_range) {
    w = {rc.omega_range->lo, rc.omega_range->hi};
    points = rc.omega_range->n;
  } else {
    w = window_or_throw(rc, K);
    t.set_meta("window", std::string(to_string(rc.window)));
  }
  t.set_meta("K", real_text(K));
  t.set_meta("omega_lo", real_text(w.lower));
  t.set_meta("omega_hi", real_text(w.upper));
  t.set_meta("points", std::to_string(points));
  const ResonanceProfile p = resonance_scan(K, w.lower, w.upper, points, rc.coupling, exec_of(rc), rc.tol_unit);
  const PeakReport coarse = locate_peak(p);
  const PeakReport r = refine_peak(p, coarse, rc.coupling, 2, exec_of(rc), rc.tol_unit);
  t.set_meta("peak_quality", std::string(to_string(r.quality)));
  if (r.quality != PeakQuality::NoPeak) {
    t.set_meta("peak_omega", real_text(r.omega_peak));
    t.set_meta("peak_fwhm", real_text(r.fwhm));
  }
  for (const char* c : {"K", "omega", "c_squared", "phi_unwrapped", "beta_modulus", "zb_modulus"}) {
    t.add_column(c);
  }
  for (std::size_t j = 0; j < p.omega_grid.size(); ++j) {
    auto row = row_start(rc);
    row.insert(row.end(), {Cell(K), Cell(p.omega_grid[j]), Cell(p.c_squared[j]), Cell(p.phi_unwrapped[j]),
                           Cell(p.beta_modulus[j]), Cell(p.zb_modulus[j])});
    t.add_row(std::move(row));
  }
  return t;
}

ScanTable run_branches(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const auto ks = k_values(rc, {0.02, 3.12, 157});
  grid_meta(t, "K_range", ks);
  t.set_meta("points", std::to_string(rc.points));
  for (const char* c : {"K", "omega_peak", "fwhm"}) t.add_column(c);
  t.add_column("quality", ColumnType::Text);
  for (const char* c : {"c_squared_peak", "zb_modulus"}) t.add_column(c);
  t.add_column("branch_id", ColumnType::Integer);
  for (const char* c : {"window_lo", "window_hi"}) t.add_column(c);
  for (const BranchPoint& b : resonance_branches(rc.coupling, ks, peak_search_of(rc), exec_of(rc))) {
    auto row = row_start(rc);
    row.insert(row.end(), {Cell(b.k_momentum), Cell(b.omega_peak), Cell(b.fwhm),
                           Cell(std::string(to_string(b.quality))), Cell(b.c_squared_peak),
                           Cell(b.zb_modulus), Cell(static_cast<std::int64_t>(b.branch_id)),
                           Cell(b.window.lower), Cell(b.window.upper)});
    t.add_row(std::move(row));
  }
  return t;
}

ScanTable run_width_vs_k(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const auto ks = k_values(rc, {0.02, 0.5, 25});
  grid_meta(t, "K_range", ks);
  t.set_meta("window", std::string(to_string(rc.window)));
  t.set_meta("points", std::to_string(rc.points));
  for (const char* c : {"K", "omega_peak", "fwhm"}) t.add_column(c);
  t.add_column("quality", ColumnType::Text);
  t.add_column("c_squared_peak");
  t.add_column("status", ColumnType::Text);
  std::vector<std::optional<PeakReport>> reports(ks.size());
  std::vector<std::optional<ErrorCode>> failures(ks.size());
  for_each_index(exec_of(rc), ks.size(), [&](std::size_t i) {
    try {
      const EnergyWindow w = window_or_throw(rc, ks[i]);
      reports[i] = resonance_peak(ks[i], w, rc.coupling, peak_search_of(rc), Exec::Serial);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidConfig) throw;
      failures[i] = e.code();
    }
  });
  for (std::size_t i = 0; i < ks.size(); ++i) {
    auto row = row_start(rc);
    row.push_back(ks[i]);
    const auto& r = reports[i];
    if (r && r->quality != PeakQuality::NoPeak) {
      row.insert(row.end(), {Cell(r->omega_peak), Cell(r->fwhm), Cell(std::string(to_string(r->quality))),
                             Cell(r->c_squared_peak)});
    } else {
      row.insert(row.end(), {Cell(kNaN), Cell(kNaN), Cell(std::string(to_string(PeakQuality::NoPeak))),
                             Cell(kNaN)});
    }
    row.push_back(status_text(failures[i]));
    count_failure(t, failures[i]);
    t.add_row(std::move(row));
  }
  return t;
}

ScanTable run_roots(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const double K = single_k(rc, 0.2);
  const auto omegas = rc.omega_range ? rc.omega_range->values() : std::vector<double>{1.0};
  t.set_meta("K", real_text(K));
  grid_meta(t, "omega_range", omegas);
  for (const char* c : {"K", "omega"}) t.add_column(c);
  t.add_column("index", ColumnType::Integer);
  for (const char* c : {"re", "im", "abs"}) t.add_column(c);
  t.add_column("partner", ColumnType::Integer);
  t.add_column("class", ColumnType::Text);
  t.add_column("status", ColumnType::Text);
  for (double omega : omegas) {
    RootSet rs;
    std::optional<ErrorCode> failure;
    try {
      rs = solve_roots(K, omega, rc.coupling);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidConfig) throw;
      failure = e.code();
    }
    if (failure) {
      auto row = row_start(rc);
      row.insert(row.end(), {Cell(K), Cell(omega), Cell(), Cell(kNaN), Cell(kNaN), Cell(kNaN), Cell(),
                             Cell(std::string("-")), Cell(status_text(failure))});
      count_failure(t, failure);
      t.add_row(std::move(row));
      continue;
    }
    const std::string cls(to_string(classify_roots(rs, rc.tol_unit).kind));
    for (std::size_t i = 0; i < rs.count; ++i) {
      std::int64_t partner = -1;
      for (std::size_t p = 0; p < rs.pair_count(); ++p) {
        if (rs.pairing[p].first == i) partner = static_cast<std::int64_t>(rs.pairing[p].second);
        if (rs.pairing[p].second == i) partner = static_cast<std::int64_t>(rs.pairing[p].first);
      }
      auto row = row_start(rc);
      row.insert(row.end(), {Cell(K), Cell(omega), Cell(static_cast<std::int64_t>(i)), Cell(rs.roots[i].real()),
                             Cell(rs.roots[i].imag()), Cell(rs.magnitudes[i]), Cell(partner), Cell(cls),
                             Cell(std::string("ok"))});
      t.add_row(std::move(row));
    }
  }
  return t;
}

struct Validation {
  std::string state;
  double omega = kNaN;
  ResidualReport report;
  std::optional<ErrorCode> failure;
};

Validation validate_at(const RunConfig& rc, double K) {
  Validation v;
  const std::size_t n = rc.lattice_n;
  try {
    const bool gap = !rc.coupling.is_chiral() && gap_region(rc.coupling).contains(K);
    if (rc.coupling.is_chiral() || gap || K == 0.0) {
      const BoundState s = state_at(rc, K);
      v.state = rc.coupling.is_chiral() ? "chiral" : (gap ? "bound" : "special");
      v.omega = s.energy;
      v.report = eigenstate_residual(s, rc.coupling, n, {1, std::min<std::size_t>(100, n)}, Exec::Serial);
    } else {
      v.state = "resonance";
      const EnergyWindow w = window_or_throw(rc, K);
      const PeakReport r = resonance_peak(K, w, rc.coupling, peak_search_of(rc), Exec::Serial);
      if (r.quality == PeakQuality::NoPeak) throw Error(ErrorCode::EmptyRange, "no resonance peak");
      const ResonanceSolution s = solve_resonance(K, r.omega_peak, rc.coupling, rc.tol_unit);
      v.omega = s.energy;
      v.report = eigenstate_residual(s, rc.coupling, n, {1, n / 4}, Exec::Serial);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    v.failure = e.code();
  }
  return v;
}

ScanTable run_validate(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const auto ks = rc.K || rc.k_range ? k_values(rc, {}) : std::vector<double>{0.2, 1.5};
  grid_meta(t, "K_range", ks);
  t.set_meta("lattice_n", std::to_string(rc.lattice_n));
  t.add_column("K");
  t.add_column("state", ColumnType::Text);
  for (const char* c : {"omega", "interior_max", "boundary_max"}) t.add_column(c);
  t.add_column("window_hi", ColumnType::Integer);
  t.add_column("lattice_n", ColumnType::Integer);
  t.add_column("status", ColumnType::Text);
  std::vector<Validation> vs(ks.size());
  for_each_index(exec_of(rc), ks.size(), [&](std::size_t i) { vs[i] = validate_at(rc, ks[i]); });
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const Validation& v = vs[i];
    auto row = row_start(rc);
    const bool ok = !v.failure;
    row.insert(row.end(), {Cell(ks[i]), Cell(v.state), Cell(v.omega), Cell(ok ? v.report.interior_max : kNaN),
                           Cell(ok ? v.report.boundary_max : kNaN),
                           ok ? Cell(static_cast<std::int64_t>(v.report.window.hi)) : Cell(),
                           Cell(static_cast<std::int64_t>(rc.lattice_n)), Cell(status_text(v.failure))});
    count_failure(t, v.failure);
    t.add_row(std::move(row));
  }
  return t;
}

ScanTable run_dos(const RunConfig& rc) {
  ScanTable t = make_table(rc);
  const double K = single_k(rc, 0.2);
  EnergyWindow range{-5.0, 5.0};
  std::size_t bins = rc.bins;
  if (rc.omega_range) {
    range = {rc.omega_range->lo, rc.omega_range->hi};
    bins = rc.omega_range->n;
  }
  t.set_meta("K", real_text(K));
  t.set_meta("q_grid", std::to_string(rc.grid));
  t.set_meta("bins", std::to_string(bins));
  for (const char* c : {"K", "bin_lo", "bin_hi", "density"}) t.add_column(c);
  const DosHistogram h = pair_density_of_states(K, rc.coupling, rc.grid, bins, range);
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    auto row = row_start(rc);
    row.insert(row.end(), {Cell(K), Cell(h.bin_edges[b]), Cell(h.bin_edges[b + 1]), Cell(h.counts[b])});
    t.add_row(std::move(row));
  }
  return t;
}

// Flat key=value lines, '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot read config " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      usage("--config " + path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys = {
      "subcommand", "chi",    "k0",     "gamma-r", "gamma-l", "K",          "K-range",   "omega-range",
      "format",     "out",    "tol-unit-circle",   "lattice-n", "window",  "grid",      "bins",
      "points",     "delta-max", "strict", "serial"};
  return keys;
}

bool truthy(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  usage("--config: " + key + " expects true or false");
}

// Config entries become "--key=value" tokens placed before the command-line
// tokens, so the command line wins under the take-last policy.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::set<std::string> given;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const std::string name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(name);
    if (name == "config") {
      if (eq != std::string::npos) {
        path = a.substr(eq + 1);
      } else if (i + 1 < args.size()) {
        path = args[i + 1];
      } else {
        usage("--config needs a path");
      }
    }
  }
  if (!path) return args;
  const bool cli_rates = given.count("chi") || given.count("gamma-r") || given.count("gamma-l");
  const bool cli_command = args.size() > 1 && args[1].rfind("-", 0) != 0;
  std::vector<std::string> merged{args.front()};
  std::vector<std::string> tokens;
  for (const auto& [key, value] : read_config(*path)) {
    if (!config_keys().count(key)) usage("--config " + *path + ": unknown key '" + key + "'");
    if (key == "subcommand") {
      if (!cli_command) merged.push_back(value);
      continue;
    }
    if (cli_rates && (key == "chi" || key == "gamma-r" || key == "gamma-l")) continue;
    if (key == "strict" || key == "serial") {
      if (truthy(key, value) && !given.count(key)) tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key + "=" + value);
  }
  merged.insert(merged.end(), tokens.begin(), tokens.end());
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

}  // namespace

std::vector<double> GridSpec::values() const {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

std::string GridSpec::to_string() const {
  return format_real(lo) + ":" + format_real(hi) + ":" + std::to_string(n);
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "single-dispersion", "continuum", "bound-dispersion", "state-profile", "z-magnitudes", "resonance-scan",
      "branches",          "width-vs-K", "roots",           "validate",      "dos"};
  return names;
}

std::optional<RunConfig> parse_arguments(const std::vector<std::string>& raw) {
  const std::vector<std::string> args = merge_config(raw);
  CLI::App app{"Two-photon bound states and resonances of an emitter array on a chiral waveguide"};
  app.name(raw.empty() ? "wqed" : raw.front());
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  RunConfig rc;
  std::optional<double> chi, gamma_r, gamma_l;
  double k0 = 1.2;
  std::optional<double> K;
  std::string k_range, omega_range, format = "csv", window = "full", config;

  app.add_option("subcommand", rc.subcommand, "What to compute")
      ->required()
      ->check(CLI::IsMember(subcommand_names()));
  auto* o_chi = app.add_option("--chi", chi, "Chirality Gamma_R / Gamma_tot in [0, 1] (default 0.5)");
  auto* o_gr = app.add_option("--gamma-r", gamma_r, "Right-moving decay rate, units of Gamma_tot");
  auto* o_gl = app.add_option("--gamma-l", gamma_l, "Left-moving decay rate, units of Gamma_tot");
  o_chi->excludes(o_gr)->excludes(o_gl);
  app.add_option("--k0", k0, "Resonant wavenumber times spacing, in (0, pi)")->capture_default_str();
  app.add_option("--K", K, "Centre-of-mass momentum per photon");
  app.add_option("--K-range", k_range, "K grid lo:hi:n");
  app.add_option("--omega-range", omega_range, "Energy grid lo:hi:n");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", rc.out, "Output path, - for stdout")->capture_default_str();
  app.add_option("--tol-unit-circle", rc.tol_unit, "Tolerance on | |z| - 1 |")->capture_default_str();
  app.add_option("--lattice-n", rc.lattice_n, "Oracle lattice size N")->capture_default_str();
  app.add_option("--window", window, "Resonance window")
      ->check(CLI::IsMember({"full", "negative", "positive"}))
      ->capture_default_str();
  app.add_option("--grid", rc.grid, "Relative-momentum samples")->capture_default_str();
  app.add_option("--bins", rc.bins, "Density-of-states bins")->capture_default_str();
  app.add_option("--points", rc.points, "Energy samples per resonance window")->capture_default_str();
  app.add_option("--delta-max", rc.delta_max, "Profile length in Delta")->capture_default_str();
  app.add_option("--config", config, "Flat key=value file; flags override it");
  app.add_flag("--strict", rc.strict, "Exit 4 on numerical failures");
  app.add_flag("--serial", rc.serial, "Use the serial reference kernels");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  if (!(k0 > 0.0 && k0 < kPi)) usage("--k0 must lie in (0, pi)");
  if (gamma_r || gamma_l) {
    const double gr = gamma_r ? *gamma_r : 1.0 - *gamma_l;
    const double gl = gamma_l ? *gamma_l : 1.0 - *gamma_r;
    if (gr < 0.0 || gr > 1.0) usage("--gamma-r must lie in [0, 1]");
    if (gl < 0.0 || gl > 1.0) usage("--gamma-l must lie in [0, 1]");
    if (std::abs(gr + gl - 1.0) > 1e-12) usage("--gamma-r and --gamma-l must sum to 1");
    rc.coupling = {gr, gl, k0};
  } else {
    const double c = chi.value_or(0.5);
    if (!(c >= 0.0 && c <= 1.0)) usage("--chi must lie in [0, 1]");
    rc.coupling = {c, 1.0 - c, k0};
  }
  rc.K = K;
  if (!k_range.empty()) rc.k_range = parse_grid(k_range, "--K-range");
  if (!omega_range.empty()) rc.omega_range = parse_grid(omega_range, "--omega-range");
  rc.format = format == "json" ? Format::Json : Format::Csv;
  rc.window = window == "negative" ? WindowPart::Negative
              : window == "positive" ? WindowPart::Positive
                                     : WindowPart::Full;
  if (!(rc.tol_unit > 0.0 && rc.tol_unit < 0.5)) usage("--tol-unit-circle must lie in (0, 0.5)");
  if (rc.lattice_n < kMinLatticeSize || rc.lattice_n > kMaxLatticeSize) usage("--lattice-n must lie in [4, 1000]");
  if (rc.grid < 101) usage("--grid must be at least 101");
  if (rc.bins < 10) usage("--bins must be at least 10");
  if (rc.points < 32) usage("--points must be at least 32");
  if (rc.delta_max < 1) usage("--delta-max must be at least 1");
  if (rc.subcommand == "resonance-scan" && rc.omega_range && rc.omega_range->n < 32) {
    usage("--omega-range needs at least 32 points for resonance-scan");
  }
  if (rc.subcommand == "dos" && rc.omega_range && rc.omega_range->n < 10) {
    usage("--omega-range needs at least 10 bins for dos");
  }
  return rc;
}

ScanTable run_subcommand(const RunConfig& rc) {
  rc.coupling.validate();
  const std::string& s = rc.subcommand;
  if (s == "single-dispersion") return run_single_dispersion(rc);
  if (s == "continuum") return run_continuum(rc);
  if (s == "bound-dispersion") return run_bound_dispersion(rc);
  if (s == "state-profile") return run_state_profile(rc);
  if (s == "z-magnitudes") return run_z_magnitudes(rc);
  if (s == "resonance-scan") return run_resonance_scan(rc);
  if (s == "branches") return run_branches(rc);
  if (s == "width-vs-K") return run_width_vs_k(rc);
  if (s == "roots") return run_roots(rc);
  if (s == "validate") return run_validate(rc);
  if (s == "dos") return run_dos(rc);
  usage("unknown subcommand '" + s + "'");
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UsageError:
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidArgument:
      return kExitUsage;
    case ErrorCode::IoFailure:
      return kExitIo;
    default:
      return is_numerical_failure(code) ? kExitNumerical : kExitFailure;
  }
}

int run_cli(const std::vector<std::string>& args) {
  try {
    const auto rc = parse_arguments(args);
    if (!rc) return kExitOk;
    const ScanTable table = run_subcommand(*rc);
    emit_table(table, rc->format, rc->out);
    if (rc->strict && table.numerical_failures > 0) {
      std::cerr << "wqed: " << table.numerical_failures << " point(s) failed numerically\n";
      return kExitNumerical;
    }
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "wqed: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace wqed
