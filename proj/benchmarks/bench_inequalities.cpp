#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "hyperspec/fem.hpp"
#include "hyperspec/geometry.hpp"
#include "hyperspec/inequalities.hpp"
#include "hyperspec/oracles.hpp"

namespace {

using hyperspec::all_inequality_families;
using hyperspec::check;
using hyperspec::Domain;
using hyperspec::euclidean_box_spectrum;
using hyperspec::GeometricProfile;
using hyperspec::geometric_profile;
using hyperspec::implied_bound;
using hyperspec::InequalityFamily;
using hyperspec::InequalityKind;
using hyperspec::Metric;

GeometricProfile box_profile() {
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, 1.0;
  hi << 1.0, 2.0;
  return geometric_profile(Domain::half_space_box(lo, hi));
}

void BM_ProfileConstants(benchmark::State& state) {
  const Domain d = Domain::geodesic_ball(0.5, 1.0, 2);
  for (auto _ : state) {
    auto p = geometric_profile(d);
    benchmark::DoNotOptimize(p.rho_ratio);
  }
}
BENCHMARK(BM_ProfileConstants);

// Every family at every truncation level, the per-report cost of a full
// battery row as the scenario runner produces it.
void BM_CheckBattery(benchmark::State& state) {
  const int k_max = static_cast<int>(state.range(0));
  const auto eigs = euclidean_box_spectrum(1.0, 1.0, k_max + 1);
  const auto profile = std::make_optional(box_profile());
  std::vector<InequalityKind> kinds;
  for (auto family : all_inequality_families())
    kinds.push_back(InequalityKind::make(family, 2, Metric::Hyperbolic, profile));
  for (auto _ : state) {
    double slack = 0.0;
    for (const auto& kind : kinds)
      for (int k = 1; k <= k_max; ++k) slack += check(kind, eigs, k).slack;
    benchmark::DoNotOptimize(slack);
  }
  state.counters["reports"] = static_cast<double>(kinds.size()) * k_max;
}
BENCHMARK(BM_CheckBattery)->Arg(10)->Arg(50);

void BM_ImpliedBound(benchmark::State& state) {
  const auto eigs = euclidean_box_spectrum(1.0, 1.0, 50);
  for (auto _ : state) {
    double sum = 0.0;
    for (int k = 1; k <= 49; ++k) {
      std::vector<double> prefix(eigs.begin(), eigs.begin() + k);
      if (auto cap = implied_bound(prefix, 2.0, 0.0)) sum += *cap;
    }
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_ImpliedBound);

}  // namespace
