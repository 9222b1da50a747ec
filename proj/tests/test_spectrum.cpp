#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/errors.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"
#include "wqed/spectrum.hpp"

using namespace wqed;
using wqed::testing::code_of;

namespace {

const CouplingConfig kSym = CouplingConfig::from_chirality(0.5, 1.2);

double state_norm(const BoundState& bs) {
  double n2 = std::norm(bs.amp_a) * ansatz_overlap(bs.z1, bs.z1).real();
  if (bs.components == 2) {
    n2 += std::norm(bs.amp_b) * ansatz_overlap(bs.z2, bs.z2).real();
    n2 += 2.0 * (std::conj(bs.amp_a) * bs.amp_b * ansatz_overlap(bs.z1, bs.z2)).real();
  }
  return std::sqrt(n2);
}

// True when z stays clear of the four points where the image has poles.
bool clear_of_poles(cplx z, double K, const CouplingConfig& cfg) {
  for (double phase : {cfg.k0 + K, cfg.k0 - K, -cfg.k0 - K, K - cfg.k0}) {
    if (std::abs(z - std::polar(1.0, phase)) < 1e-2) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("property: the image is invariant under z -> 1/z") {
  testing::Draws d(31);
  for (int i = 0; i < 1000; ++i) {
    const auto cfg = d.config();
    const double K = d.uniform(-kPi, kPi);
    const cplx z = d.disk_point(0.05, 0.98);
    if (!clear_of_poles(z, K, cfg)) continue;
    const cplx w = ansatz_image(z, K, cfg).omega_z;
    const cplx w_inv = ansatz_image(1.0 / z, K, cfg).omega_z;
    CHECK(std::abs(w - w_inv) <= 1e-10 * std::max(1.0, std::abs(w)));
  }
}

TEST_CASE("property: mirroring the coupling and K swaps g+ and g-") {
  testing::Draws d(37);
  for (int i = 0; i < 1000; ++i) {
    const auto cfg = d.config();
    const double K = d.uniform(-kPi, kPi);
    const cplx z = d.disk_point(0.05, 0.98);
    if (!clear_of_poles(z, K, cfg)) continue;
    const AnsatzImage a = ansatz_image(z, K, cfg);
    const AnsatzImage b = ansatz_image(z, -K, cfg.mirrored());
    const double scale = std::max(1.0, std::abs(a.omega_z));
    CHECK(std::abs(a.omega_z - b.omega_z) <= 1e-12 * scale);
    CHECK(std::abs(a.g_plus - b.g_minus) <= 1e-12 * scale);
    CHECK(std::abs(a.g_minus - b.g_plus) <= 1e-12 * scale);
  }
}

TEST_CASE("ansatz image details") {
  const auto left = CouplingConfig::from_rates(0.0, 1.0, 1.2);
  const AnsatzImage img = ansatz_image(cplx(0.3, 0.2), 0.4, left);
  CHECK(img.g_minus == cplx(0.0));
  CHECK(std::abs(img.g_plus) > 0.0);
  CHECK(code_of([] { ansatz_image(std::polar(1.0, 1.4), 0.2, kSym); }) == ErrorCode::PoleAtZ);
  CHECK(ansatz_overlap(0.5, 0.5) == cplx(1.0 / 3.0));
}

TEST_CASE("gap bound state at K = 1.5") {
  const BoundState bs = find_bound_state(1.5, kSym);
  CHECK(bs.energy == doctest::Approx(golden::kBoundOmega).epsilon(1e-9));
  CHECK(bs.z1.real() == doctest::Approx(golden::kBoundZ1).epsilon(1e-8));
  CHECK(bs.z2.real() == doctest::Approx(golden::kBoundZ2).epsilon(1e-8));
  CHECK(bs.z1.imag() == 0.0);
  CHECK(bs.z2.imag() == 0.0);
  CHECK(bs.components == 2);
  CHECK_FALSE(bs.degenerate);
  CHECK(bound_constraint_residual(bs, kSym) < 1e-8);
  CHECK(state_norm(bs) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(bound_determinant(bs.energy, 1.5, kSym)) < 1e-8);
}

TEST_CASE("bound search errors") {
  CHECK(code_of([] { find_bound_state(0.5, kSym); }) == ErrorCode::NotInGap);
  CHECK(code_of([] { find_bound_state(1.2, kSym); }) == ErrorCode::NotInGap);
  CHECK(code_of([] { find_bound_state(1.5, CouplingConfig::from_chirality(1.0, 1.2)); }) ==
        ErrorCode::ChiralNoGap);
  CHECK(code_of([] { bound_determinant(1.0, 0.2, kSym); }) == ErrorCode::NotBoundCandidate);
  BoundSearch bad;
  bad.samples = 1;
  CHECK(code_of([&] { find_bound_state(1.5, kSym, bad); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("property: bound states across random couplings") {
  testing::Draws d(41);
  int found = 0;
  for (int i = 0; i < 60; ++i) {
    double k0 = d.uniform(0.3, 1.3);
    if (d.uniform(0.0, 1.0) < 0.5) k0 = kPi - k0;
    const auto cfg = CouplingConfig::from_chirality(d.nonchiral_chirality(), k0);
    const GapRegion g = gap_region(cfg);
    const double margin = 0.05 * (g.k_upper - g.k_lower);
    const double K = d.uniform(g.k_lower + margin, g.k_upper - margin);
    CAPTURE(cfg.gamma_r);
    CAPTURE(k0);
    CAPTURE(K);
    BoundState bs;
    try {
      bs = find_bound_state(K, cfg);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoBoundState);
      continue;
    }
    ++found;
    const auto window = gap_window(K, cfg);
    REQUIRE(window.has_value());
    CHECK(window->contains(bs.energy));
    for (const auto& band : continuum_bands(K, cfg)) CHECK_FALSE(band.contains(bs.energy));
    CHECK(std::abs(bs.z1) < 1.0);
    CHECK(std::abs(bs.z2) < 1.0);
    if (bs.z1.imag() == 0.0) {
      CHECK(bs.z2.imag() == 0.0);
      CHECK(bs.z1.real() < 0.0);
      CHECK(bs.z2.real() > 0.0);
    } else {
      CHECK(bs.z2 == std::conj(bs.z1));
    }
    CHECK_NOTHROW(bound_wavefunction(bs, 40));
    CHECK(bound_constraint_residual(bs, cfg) < 1e-8);
    CHECK(state_norm(bs) == doctest::Approx(1.0).epsilon(1e-10));
    for (const cplx z : {bs.z1, bs.z2}) {
      CHECK(std::abs(ansatz_image(z, K, cfg).omega_z - bs.energy) < 1e-8 * std::max(1.0, std::abs(bs.energy)));
    }
  }
  CHECK(found >= 50);
}

TEST_CASE("localization weakens toward the gap edges") {
  const GapRegion g = gap_region(kSym);
  double previous = 0.0;
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    const BoundState bs = find_bound_state(g.k_lower + delta, kSym);
    const double m = std::max(std::abs(bs.z1), std::abs(bs.z2));
    CHECK(m > previous);
    previous = m;
  }
  CHECK(previous > 0.9);
}

TEST_CASE("bound dispersion records failures per point") {
  const std::vector<double> ks = {0.5, 1.5, 1.7};
  const auto points = bound_dispersion(kSym, ks, {}, Exec::Serial);
  REQUIRE(points.size() == 3);
  CHECK(points[0].failure == ErrorCode::NotInGap);
  CHECK_FALSE(points[0].state.has_value());
  REQUIRE(points[1].state.has_value());
  CHECK(points[1].state->energy == doctest::Approx(golden::kBoundOmega).epsilon(1e-9));
  CHECK(points[2].state.has_value());
  CHECK(code_of([&] { bound_dispersion(CouplingConfig::from_chirality(0.0, 1.2), ks); }) ==
        ErrorCode::ChiralNoGap);
}

TEST_CASE("bound wavefunction") {
  const BoundState bs = find_bound_state(1.5, kSym);
  const auto psi = bound_wavefunction(bs, 40);
  REQUIRE(psi.size() == 40);
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::abs(v));
  bool peak_positive = false;
  for (double v : psi) {
    if (std::abs(v) == peak) peak_positive = v > 0.0;
  }
  CHECK(peak_positive);
  for (std::size_t d = 0; d < psi.size(); ++d) {
    const double delta = static_cast<double>(d + 1);
    const double envelope = std::abs(bs.amp_a) * std::pow(std::abs(bs.z1), delta) +
                            std::abs(bs.amp_b) * std::pow(std::abs(bs.z2), delta);
    CHECK(std::abs(psi[d]) <= envelope + 1e-12);
  }
  CHECK(std::abs(psi.back()) < 1e-2 * peak);
  CHECK(code_of([&] { bound_wavefunction(bs, 0); }) == ErrorCode::InvalidArgument);

  BoundState twisted = bs;
  twisted.z2 = cplx(0.3, 0.4);
  CHECK(code_of([&] { bound_wavefunction(twisted, 10); }) == ErrorCode::NotRealizable);
}

TEST_CASE("closed-form states") {
  SUBCASE("special state at K = 0") {
    const BoundState bs = special_bound_k0(kSym);
    CHECK(bs.z1.real() == doctest::Approx(golden::kSpecialZ).epsilon(1e-14));
    CHECK(bs.energy == doctest::Approx(golden::kSpecialOmega).epsilon(1e-13));
    CHECK(bs.components == 1);
    CHECK(bound_constraint_residual(bs, kSym) < 1e-14);
    CHECK(state_norm(bs) == doctest::Approx(1.0).epsilon(1e-14));
    // Independent of chirality.
    CHECK(special_bound_k0(CouplingConfig::from_chirality(0.1, 1.2)).energy ==
          doctest::Approx(golden::kSpecialOmega).epsilon(1e-13));
    CHECK(special_bound_k0(CouplingConfig::from_chirality(0.5, kPi / 2)).degenerate);
  }
  SUBCASE("chiral bound state") {
    const auto left = CouplingConfig::from_rates(0.0, 1.0, 1.2);
    const BoundState bs = chiral_bound(0.3, left);
    CHECK(bs.z1.real() == doctest::Approx(golden::kChiralZ).epsilon(1e-13));
    CHECK(bs.energy == doctest::Approx(golden::kChiralOmega).epsilon(1e-13));
    CHECK(bound_constraint_residual(bs, left) < 1e-14);
    CHECK(state_norm(bs) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(code_of([] { chiral_bound(0.3, kSym); }) == ErrorCode::NotChiral);
    CHECK(code_of([&] { chiral_bound(kPi - 1.2, left); }) == ErrorCode::NoBoundState);
  }
  SUBCASE("property: chiral states satisfy their constraints for any K") {
    testing::Draws d(43);
    for (int i = 0; i < 500; ++i) {
      const double k0 = d.uniform(0.05, kPi - 0.05);
      const auto cfg = d.uniform(0.0, 1.0) < 0.5 ? CouplingConfig::from_rates(0.0, 1.0, k0)
                                                 : CouplingConfig::from_rates(1.0, 0.0, k0);
      const double K = d.uniform(-kPi, kPi);
      BoundState bs;
      try {
        bs = chiral_bound(K, cfg);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoBoundState);
        continue;
      }
      if (bs.degenerate) continue;
      CHECK(std::abs(bs.z1) < 1.0);
      CHECK(bound_constraint_residual(bs, cfg) < 1e-12);
      CHECK(state_norm(bs) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}
