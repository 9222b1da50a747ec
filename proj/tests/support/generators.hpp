#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "wqed/model.hpp"

namespace wqed::testing {

// Seeded draws for the property tests. Each test owns its generator, so the
// sequence a test sees does not depend on which other tests ran.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  // Chirality in [0, 1] with the chiral endpoints drawn on purpose now and then.
  double chirality() {
    const double u = uniform(0.0, 1.0);
    if (u < 0.05) return 0.0;
    if (u < 0.10) return 1.0;
    return uniform(0.0, 1.0);
  }

  double nonchiral_chirality() { return uniform(0.05, 0.95); }

  CouplingConfig config() { return CouplingConfig::from_chirality(chirality(), uniform(0.05, kPi - 0.05)); }

  // Energies away from the omega = 0 special case.
  double energy(double bound = 5.0) {
    double w = 0.0;
    do {
      w = uniform(-bound, bound);
    } while (std::abs(w) < 1e-3);
    return w;
  }

  // Complex z with |z| in [rmin, rmax].
  std::complex<double> disk_point(double rmin, double rmax) {
    return std::polar(uniform(rmin, rmax), uniform(-kPi, kPi));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wqed::testing
