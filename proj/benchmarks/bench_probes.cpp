#include <benchmark/benchmark.h>

#include <numbers>

#include "strichartz/divergence.hpp"
#include "strichartz/grid_oracle.hpp"

using namespace strichartz;

static void AngularNearCritical(benchmark::State& state) {
  const double gap = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(angular_integral_to_gap(4, 2.0, std::numbers::pi / 2, gap));
}
BENCHMARK(AngularNearCritical)->DenseRange(2, 12, 5);

static void ReducedQ(benchmark::State& state) {
  const auto p = Profile::standard();
  const Mollifier m;
  const auto cfg = ProbeConfig::wave_dual(4, 2.0, static_cast<int>(state.range(0)),
                                          AngularDomain::to_critical(2.0));
  for (auto _ : state) benchmark::DoNotOptimize(reduced_q_value(cfg, p, m));
}
BENCHMARK(ReducedQ)->Arg(4)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

static void BumpSpectrumLookup(benchmark::State& state) {
  const auto p = Profile::normalized(CompactBump{0.0, 1.0});
  benchmark::DoNotOptimize(p.fhat(0.0));  // builds the table outside the timed loop
  double eta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.fhat(eta));
    eta = eta > 500.0 ? 0.0 : eta + 0.731;
  }
}
BENCHMARK(BumpSpectrumLookup);

static void Falsification(benchmark::State& state) {
  const auto p = Profile::standard();
  for (auto _ : state)
    benchmark::DoNotOptimize(falsification_probe(static_cast<int>(state.range(0)), 2.0, p, Mollifier{}, 24));
}
BENCHMARK(Falsification)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);

static void KernelSamples2D(benchmark::State& state) {
  GridSpec g;
  g.n = 2;
  g.points_per_axis = static_cast<int>(state.range(0));
  g.box_halfwidth = 24.0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_mollifier_kernel(Mollifier{}, 0, g));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(KernelSamples2D)->RangeMultiplier(2)->Range(64, 512)->Complexity()->Unit(benchmark::kMicrosecond);

static void DualFunctionalDirect(benchmark::State& state) {
  const auto p = Profile::standard();
  const Mollifier m;
  const int k = static_cast<int>(state.range(0));
  const auto g = GridSpec::for_cutoff(2, 128, k, m, 2.0, p);
  const MovingSource src{p, m, k, 2.0, {1.0, 0.0}};
  for (auto _ : state) benchmark::DoNotOptimize(dual_functional_direct(src, 0.5, g));
}
BENCHMARK(DualFunctionalDirect)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
