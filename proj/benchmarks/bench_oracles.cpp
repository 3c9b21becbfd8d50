#include <benchmark/benchmark.h>

#include "hyperspec/oracles.hpp"

namespace {

using hyperspec::bessel_zero;
using hyperspec::euclidean_box_spectrum;
using hyperspec::hyperbolic_ball_radial;
using hyperspec::weyl_prediction;

void BM_BesselZeros(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double last = 0.0;
    for (int m = 0; m <= 2; ++m)
      for (int k = 1; k <= count; ++k) last = bessel_zero(m, k);
    benchmark::DoNotOptimize(last);
  }
}
BENCHMARK(BM_BesselZeros)->Arg(5)->Arg(20);

// Shooting oracle: each eigenvalue costs a Sturm bracket plus a bisection
// on the radial ODE, so cost grows roughly linearly in `count`.
void BM_RadialShooting(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto eigs = hyperbolic_ball_radial(1.0, 2, count);
    benchmark::DoNotOptimize(eigs.data());
  }
}
BENCHMARK(BM_RadialShooting)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_RadialShootingLargeBall(benchmark::State& state) {
  for (auto _ : state) {
    auto eigs = hyperbolic_ball_radial(30.0, 2, 1);
    benchmark::DoNotOptimize(eigs.data());
  }
}
BENCHMARK(BM_RadialShootingLargeBall)->Unit(benchmark::kMillisecond);

void BM_BoxSpectrum(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto eigs = euclidean_box_spectrum(1.0, 1.0, count);
    benchmark::DoNotOptimize(eigs.data());
  }
}
BENCHMARK(BM_BoxSpectrum)->Arg(10)->Arg(100)->Arg(1000);

void BM_WeylPrediction(benchmark::State& state) {
  for (auto _ : state) {
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) sum += weyl_prediction(k, 2, 0.5);
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_WeylPrediction);

}  // namespace
