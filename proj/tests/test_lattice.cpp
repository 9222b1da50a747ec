#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/errors.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"
#include "wqed/lattice.hpp"

using namespace wqed;
using wqed::testing::code_of;

namespace {

const CouplingConfig kSym = CouplingConfig::from_chirality(0.5, 1.2);

bool same_bits(const TruncatedHamiltonian& a, const TruncatedHamiltonian& b) {
  if (a.size != b.size) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i].real() != b.entries[i].real() || a.entries[i].imag() != b.entries[i].imag()) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("matrix entries") {
  const TruncatedHamiltonian h = build_truncated_hamiltonian(0.2, kSym, 6);
  REQUIRE(h.size == 6);
  REQUIRE(h.entries.size() == 36);
  for (std::size_t c = 0; c < 6; ++c) {
    CAPTURE(c);
    CHECK(h.at(1, c + 1).real() == doctest::Approx(golden::kLatticeRow1[c][0]).epsilon(1e-13));
    CHECK(h.at(1, c + 1).imag() == doctest::Approx(golden::kLatticeRow1[c][1]).epsilon(1e-13));
  }
  CHECK(h.at(4, 6).real() == doctest::Approx(golden::kLattice46[0]).epsilon(1e-13));
  CHECK(h.at(4, 6).imag() == doctest::Approx(golden::kLattice46[1]).epsilon(1e-13));
  CHECK(h.at(5, 5).real() == doctest::Approx(golden::kLattice55[0]).epsilon(1e-13));
  CHECK(h.at(5, 5).imag() == doctest::Approx(golden::kLattice55[1]).epsilon(1e-13));
}

TEST_CASE("property: complex symmetric, and even in K for equal rates") {
  testing::Draws d(61);
  for (int i = 0; i < 20; ++i) {
    const auto cfg = d.config();
    const double K = d.uniform(-kPi, kPi);
    const std::size_t n = 4 + static_cast<std::size_t>(d.uniform(0.0, 60.0));
    const TruncatedHamiltonian h = build_truncated_hamiltonian(K, cfg, n);
    for (std::size_t a = 1; a <= n; ++a) {
      for (std::size_t b = 1; b <= n; ++b) CHECK(h.at(a, b) == h.at(b, a));
    }
    const auto equal = CouplingConfig::from_chirality(0.5, cfg.k0);
    CHECK(same_bits(build_truncated_hamiltonian(K, equal, n), build_truncated_hamiltonian(-K, equal, n)));
  }
}

TEST_CASE("size and window checks") {
  CHECK(code_of([] { build_truncated_hamiltonian(0.2, kSym, 3); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { build_truncated_hamiltonian(0.2, kSym, 1001); }) == ErrorCode::InvalidArgument);
  const auto h = build_truncated_hamiltonian(0.2, kSym, 8);
  CHECK(code_of([&] { apply(h, std::vector<cplx>(7)); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ansatz_image_residual(0.5, 0.2, kSym, 100, {1, 51}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ansatz_image_residual(0.5, 0.2, kSym, 100, {0, 10}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ansatz_image_residual(1.0, 0.2, kSym, 100, {1, 10}); }) == ErrorCode::DivergentAnsatz);
}

TEST_CASE("property: the truncated matrix reproduces the ansatz image") {
  testing::Draws d(67);
  for (int i = 0; i < 30; ++i) {
    const auto cfg = d.config();
    const double K = d.uniform(-kPi, kPi);
    const cplx z = d.disk_point(0.0, 0.9);
    CAPTURE(z);
    ResidualReport r;
    try {
      r = ansatz_image_residual(z, K, cfg, 300, {1, 100});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PoleAtZ);
      continue;
    }
    CHECK(r.interior_max < 1e-8);
  }
  CHECK(ansatz_image_residual(0.5, 0.2, kSym, 300, {1, 100}).interior_max < 1e-8);
}

TEST_CASE("truncation error falls with N") {
  const cplx z(0.93, 0.1);
  const double small = ansatz_image_residual(z, 0.2, kSym, 100, {1, 40}).interior_max;
  const double large = ansatz_image_residual(z, 0.2, kSym, 300, {1, 40}).interior_max;
  CHECK(large < 1e-3 * small);
}

TEST_CASE("bound eigenstates") {
  const BoundState bs = find_bound_state(1.5, kSym);
  const ResidualReport r = eigenstate_residual(bs, kSym, 400, {1, 100});
  CHECK(r.interior_max < 1e-8);

  SUBCASE("a detuned energy is caught") {
    BoundState off = bs;
    off.energy += 1e-3;
    CHECK(eigenstate_residual(off, kSym, 400, {1, 100}).interior_max > 10.0 * r.interior_max);
    CHECK(eigenstate_residual(off, kSym, 400, {1, 100}).interior_max > 1e-5);
  }
  SUBCASE("a single component is not an eigenstate") {
    BoundState half = bs;
    half.amp_b = 0.0;
    CHECK(eigenstate_residual(half, kSym, 400, {1, 100}).interior_max > 1e-3);
  }
  SUBCASE("closed-form states") {
    CHECK(eigenstate_residual(special_bound_k0(kSym), kSym, 300, {1, 100}).interior_max < 1e-10);
    const auto left = CouplingConfig::from_rates(0.0, 1.0, 1.2);
    CHECK(eigenstate_residual(chiral_bound(0.3, left), left, 300, {1, 100}).interior_max < 1e-10);
  }
}

TEST_CASE("resonance states with a taper") {
  const ResonanceSolution s = solve_resonance(0.2, 0.86, kSym);
  const double r400 = eigenstate_residual(s, kSym, 400, {1, 100}).interior_max;
  const double r800 = eigenstate_residual(s, kSym, 800, {1, 100}).interior_max;
  CHECK(r800 < 1e-3);
  CHECK(r800 < r400);

  SUBCASE("dropping the localized part breaks the eigenstate") {
    ResonanceSolution plain = s;
    plain.weight_c = 0.0;
    CHECK(eigenstate_residual(plain, kSym, 800, {1, 100}).interior_max > 10.0 * r800);
  }
  CHECK(code_of([&] { eigenstate_residual(s, kSym, 400, {1, 101}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("taper") {
  const std::size_t n = 400;
  for (std::size_t d = 1; d <= n / 4; ++d) CHECK(taper(d, n) == 1.0);
  CHECK(taper(n, n) == 0.0);
  double previous = 1.0;
  for (std::size_t d = n / 4; d <= n; ++d) {
    const double t = taper(d, n);
    CHECK(t <= previous);
    CHECK(t >= 0.0);
    previous = t;
  }
  CHECK(taper(n / 4 + (3 * n / 4) / 2, n) == doctest::Approx(0.5));
}
