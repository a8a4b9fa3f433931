#include <benchmark/benchmark.h>

#include <cmath>

#include "staqst/experiments.hpp"

using namespace staqst;

static void BM_HamiltonianBuild(benchmark::State& state) {
  const HamiltonianTerms terms(Basis(2, 1));
  const auto pulses = PulseSet::sta_sinusoidal(StaParams{});
  const auto h = driven_hamiltonian(terms, pulses);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(h(t));
    t = t > 0.5 ? 0.0 : t + 1e-3;
  }
}
BENCHMARK(BM_HamiltonianBuild);

static void BM_SchrodingerTransfer(benchmark::State& state) {
  const auto pulses = PulseSet::sta_sinusoidal(StaParams{});
  const auto cfg = PropagatorConfig::adaptive(std::pow(10.0, -static_cast<double>(state.range(0))), 2);
  for (auto _ : state) benchmark::DoNotOptimize(closed_transfer_fidelity(pulses, cfg));
}
BENCHMARK(BM_SchrodingerTransfer)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_LindbladTransfer(benchmark::State& state) {
  const auto pulses = PulseSet::sta_gaussian(StaParams{}, GaussianParams{});
  const DecoherenceParams dec{0.05 * pulses.coupling_scale(), 0.05 * pulses.coupling_scale()};
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(open_transfer_fidelity(pulses, dec, steps));
}
BENCHMARK(BM_LindbladTransfer)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_EpsilonScan(benchmark::State& state) {
  ScanOptions o;
  o.samples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_epsilon(o).maxima.size());
}
BENCHMARK(BM_EpsilonScan)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
