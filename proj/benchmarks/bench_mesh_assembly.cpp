#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "hyperspec/fem.hpp"
#include "hyperspec/geometry.hpp"
#include "hyperspec/mesh.hpp"

namespace {

using hyperspec::assemble;
using hyperspec::apply_dirichlet;
using hyperspec::Domain;
using hyperspec::generate;
using hyperspec::Mesh;
using hyperspec::Metric;
using hyperspec::refine;

Domain unit_box() {
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, 1.0;
  hi << 1.0, 2.0;
  return Domain::half_space_box(lo, hi);
}

// Structured grid with `divisions` cells per axis.
Mesh box_mesh(int divisions) { return generate(unit_box(), 1.0 / divisions); }

void BM_GenerateBox(benchmark::State& state) {
  const Domain d = unit_box();
  const double target_h = 1.0 / static_cast<double>(state.range(0));
  Mesh m;
  for (auto _ : state) {
    m = generate(d, target_h);
    benchmark::DoNotOptimize(m.vertices.data());
  }
  state.counters["vertices"] = m.vertex_count();
}
BENCHMARK(BM_GenerateBox)->Arg(16)->Arg(64)->Arg(256);

void BM_GenerateBall(benchmark::State& state) {
  const Domain d = Domain::geodesic_ball(0.5, 1.0, 2);
  const double target_h = 1.0 / static_cast<double>(state.range(0));
  Mesh m;
  for (auto _ : state) {
    m = generate(d, target_h);
    benchmark::DoNotOptimize(m.vertices.data());
  }
  state.counters["vertices"] = m.vertex_count();
}
BENCHMARK(BM_GenerateBall)->Arg(16)->Arg(64)->Arg(256);

void BM_RefineBox(benchmark::State& state) {
  const Mesh coarse = box_mesh(state.range(0));
  Mesh fine;
  for (auto _ : state) {
    fine = refine(coarse);
    benchmark::DoNotOptimize(fine.vertices.data());
  }
  state.counters["triangles_out"] = fine.triangle_count();
}
BENCHMARK(BM_RefineBox)->Arg(16)->Arg(64)->Arg(128);

// Hyperbolic assembly pays for per-element quadrature of the x2 weights;
// the Euclidean pair uses the constant-weight closed form.
void BM_AssembleEuclidean(benchmark::State& state) {
  const Mesh m = box_mesh(state.range(0));
  for (auto _ : state) {
    auto forms = assemble(m, Metric::Euclidean, 2);
    benchmark::DoNotOptimize(forms.stiffness);
  }
  state.counters["triangles"] = m.triangle_count();
}
BENCHMARK(BM_AssembleEuclidean)->Arg(16)->Arg(64)->Arg(128);

void BM_AssembleHyperbolic(benchmark::State& state) {
  const Mesh m = box_mesh(state.range(0));
  for (auto _ : state) {
    auto forms = assemble(m, Metric::Hyperbolic, 2);
    benchmark::DoNotOptimize(forms.stiffness);
  }
  state.counters["triangles"] = m.triangle_count();
}
BENCHMARK(BM_AssembleHyperbolic)->Arg(16)->Arg(64)->Arg(128);

void BM_ApplyDirichlet(benchmark::State& state) {
  const Mesh m = box_mesh(state.range(0));
  const auto forms = assemble(m, Metric::Hyperbolic, 2);
  int dof = 0;
  for (auto _ : state) {
    auto interior = apply_dirichlet(forms, m);
    dof = interior.dof_count();
    benchmark::DoNotOptimize(interior.stiffness);
  }
  state.counters["dof"] = dof;
}
BENCHMARK(BM_ApplyDirichlet)->Arg(16)->Arg(64)->Arg(128);

}  // namespace
