#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "hyperspec/eigensolve.hpp"
#include "hyperspec/fem.hpp"
#include "hyperspec/geometry.hpp"
#include "hyperspec/mesh.hpp"

namespace {

using hyperspec::apply_dirichlet;
using hyperspec::assemble;
using hyperspec::AssembledForms;
using hyperspec::Domain;
using hyperspec::generate;
using hyperspec::max_relative_residual;
using hyperspec::Mesh;
using hyperspec::Metric;
using hyperspec::SolveStrategy;
using hyperspec::solve_lowest;

// Interior forms of the hyperbolic box (0,1)x(1,2) on a grid with
// `divisions` cells per axis: (divisions-1)^2 dofs.
AssembledForms interior_forms(int divisions) {
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, 1.0;
  hi << 1.0, 2.0;
  const Mesh m = generate(Domain::half_space_box(lo, hi), 1.0 / divisions);
  return apply_dirichlet(assemble(m, Metric::Hyperbolic, 2), m);
}

void BM_SolveDense(benchmark::State& state) {
  const AssembledForms forms = interior_forms(state.range(0));
  for (auto _ : state) {
    auto spec = solve_lowest(forms, 12, SolveStrategy::Dense);
    benchmark::DoNotOptimize(spec.eigenvalues.data());
  }
  state.counters["dof"] = forms.dof_count();
}
BENCHMARK(BM_SolveDense)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

// Above kDenseDofLimit the auto strategy switches to shift-invert Lanczos;
// benchmark it on a mesh where the dense path would be the wrong choice.
void BM_SolveLanczos(benchmark::State& state) {
  const AssembledForms forms = interior_forms(64);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto spec = solve_lowest(forms, k, SolveStrategy::ShiftInvertLanczos);
    benchmark::DoNotOptimize(spec.eigenvalues.data());
  }
  state.counters["dof"] = forms.dof_count();
}
BENCHMARK(BM_SolveLanczos)->Arg(6)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_ResidualCheck(benchmark::State& state) {
  const AssembledForms forms = interior_forms(32);
  const auto spec = solve_lowest(forms, 12);
  for (auto _ : state) {
    double r = max_relative_residual(forms, spec);
    benchmark::DoNotOptimize(r);
  }
  state.counters["dof"] = forms.dof_count();
}
BENCHMARK(BM_ResidualCheck);

}  // namespace
