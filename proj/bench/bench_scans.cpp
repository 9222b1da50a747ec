// Serial reference vs OpenMP for each scan kernel. The second argument of every
// benchmark is the execution policy: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "wqed/lattice.hpp"
#include "wqed/resonance.hpp"
#include "wqed/spectrum.hpp"

using namespace wqed;

namespace {

const CouplingConfig kSym = CouplingConfig::from_chirality(0.5, 1.2);

Exec exec_arg(const benchmark::State& state) { return state.range(1) == 0 ? Exec::Serial : Exec::Parallel; }

std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

void BM_ContinuumBands(benchmark::State& state) {
  const auto q_grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(continuum_bands(0.7, kSym, q_grid, exec_arg(state)));
}

void BM_BoundDispersion(benchmark::State& state) {
  const auto ks = grid(1.25, 1.9, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bound_dispersion(kSym, ks, {}, exec_arg(state)));
}

void BM_ResonanceScan(benchmark::State& state) {
  const auto w = *resonance_window(0.2, kSym);
  const auto points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(resonance_scan(0.2, w.lower, w.upper, points, kSym, exec_arg(state)));
  }
}

void BM_ResonanceBranches(benchmark::State& state) {
  const auto ks = grid(0.02, 3.12, static_cast<std::size_t>(state.range(0)));
  PeakSearch search;
  search.points = 401;
  for (auto _ : state) benchmark::DoNotOptimize(resonance_branches(kSym, ks, search, exec_arg(state)));
}

void BM_BuildHamiltonian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_truncated_hamiltonian(0.3, kSym, n, exec_arg(state)));
}

void BM_Apply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto h = build_truncated_hamiltonian(0.3, kSym, n, Exec::Serial);
  const std::vector<cplx> x(n, cplx(1.0, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(apply(h, x, exec_arg(state)));
}

}  // namespace

BENCHMARK(BM_ContinuumBands)->ArgsProduct({{4001, 40001}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BoundDispersion)->ArgsProduct({{50, 200}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResonanceScan)->ArgsProduct({{2001, 8001}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResonanceBranches)->ArgsProduct({{64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildHamiltonian)->ArgsProduct({{400, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Apply)->ArgsProduct({{400, 1000}, {0, 1}})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
