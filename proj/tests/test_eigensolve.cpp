#include "hyperspec/eigensolve.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "doctest.h"
#include "hyperspec/geometry.hpp"
#include "hyperspec/mesh.hpp"

using namespace hyperspec;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

constexpr double kPi = std::numbers::pi;

AssembledForms diagonal_forms(std::vector<double> kd, std::vector<double> md) {
  const int n = static_cast<int>(kd.size());
  AssembledForms f;
  f.stiffness.resize(n, n);
  f.mass.resize(n, n);
  for (int i = 0; i < n; ++i) {
    f.stiffness.insert(i, i) = kd[static_cast<size_t>(i)];
    f.mass.insert(i, i) = md[static_cast<size_t>(i)];
    f.dof_map.push_back(i);
  }
  f.stiffness.makeCompressed();
  f.mass.makeCompressed();
  f.eliminated = true;
  return f;
}

AssembledForms square_problem(double target_h) {
  const Mesh m = generate(Domain::euclidean_box(vec2(0, 0), vec2(1, 1)), target_h);
  return apply_dirichlet(assemble(m, Metric::Euclidean, 2), m);
}

}  // namespace

TEST_CASE("decoupled diagonal pencil") {
  const AssembledForms f = diagonal_forms({2.0, 8.0}, {1.0, 2.0});
  const Spectrum s = solve_lowest(f, 2);
  REQUIRE(s.count() == 2);
  CHECK(s.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.eigenvalues[1] == doctest::Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(solve_lowest(f, 0), std::invalid_argument);
  CHECK_THROWS_AS(solve_lowest(f, 3), std::invalid_argument);
}

TEST_CASE("unit square eigenvalues approach the separable spectrum") {
  const AssembledForms f = square_problem(1.0 / 16);
  const Spectrum s = solve_lowest(f, 5);
  const double exact[] = {2 * kPi * kPi, 5 * kPi * kPi, 5 * kPi * kPi,
                          8 * kPi * kPi, 10 * kPi * kPi};
  for (int i = 0; i < 5; ++i) {
    CHECK(s.eigenvalues[i] == doctest::Approx(exact[i]).epsilon(0.04));
    // Conforming discretization bounds from above.
    CHECK(s.eigenvalues[i] >= exact[i]);
  }
}

TEST_CASE("spectra satisfy the orthonormality and Rayleigh identities") {
  for (const auto strategy : {SolveStrategy::Dense, SolveStrategy::ShiftInvertLanczos}) {
    const AssembledForms f = square_problem(1.0 / 12);
    const Spectrum s = solve_lowest(f, 6, strategy);
    for (int i = 0; i < s.count(); ++i) {
      const auto& vi = s.eigenvectors[static_cast<size_t>(i)];
      for (int j = 0; j < s.count(); ++j) {
        const auto& vj = s.eigenvectors[static_cast<size_t>(j)];
        const double mij = vi.dot(f.mass * vj);
        CHECK(std::abs(mij - (i == j ? 1.0 : 0.0)) <= 1e-8);
      }
      const double rayleigh = vi.dot(f.stiffness * vi);
      CHECK(rayleigh ==
            doctest::Approx(s.eigenvalues[static_cast<size_t>(i)]).epsilon(1e-8));
    }
    CHECK(max_relative_residual(f, s) <= 1e-8);
  }
}

TEST_CASE("dense and Lanczos paths agree") {
  const AssembledForms f = square_problem(1.0 / 14);
  const Spectrum dense = solve_lowest(f, 8, SolveStrategy::Dense);
  const Spectrum lanczos = solve_lowest(f, 8, SolveStrategy::ShiftInvertLanczos);
  for (int i = 0; i < 8; ++i) {
    CHECK(lanczos.eigenvalues[i] ==
          doctest::Approx(dense.eigenvalues[i]).epsilon(1e-7));
  }
}

TEST_CASE("Lanczos path is deterministic") {
  const AssembledForms f = square_problem(1.0 / 12);
  const Spectrum a = solve_lowest(f, 5, SolveStrategy::ShiftInvertLanczos);
  const Spectrum b = solve_lowest(f, 5, SolveStrategy::ShiftInvertLanczos);
  for (int i = 0; i < 5; ++i) {
    CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
    CHECK((a.eigenvectors[i] - b.eigenvectors[i]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("eigenvector sign convention") {
  const AssembledForms f = square_problem(1.0 / 10);
  const Spectrum s = solve_lowest(f, 6);
  for (const auto& v : s.eigenvectors) {
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > 1e-12 * scale) {
        CHECK(v[i] > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("eigenvalues decrease monotonically under refinement") {
  const Domain sq = Domain::euclidean_box(vec2(0, 0), vec2(1, 1));
  const Mesh coarse = generate(sq, 0.25);
  const Mesh fine = refine(coarse);
  const Spectrum sc = solve_lowest(apply_dirichlet(assemble(coarse, Metric::Euclidean, 2), coarse), 5);
  const Spectrum sf = solve_lowest(apply_dirichlet(assemble(fine, Metric::Euclidean, 2), fine), 5);
  for (int i = 0; i < 5; ++i) CHECK(sf.eigenvalues[i] < sc.eigenvalues[i]);
}

TEST_CASE("hyperbolic spectra sit above the half-plane bottom") {
  const Mesh ball = refine(generate(Domain::geodesic_ball(1.0), 0.3));
  const Spectrum s =
      solve_lowest(apply_dirichlet(assemble(ball, Metric::Hyperbolic, 2), ball), 8);
  for (const double ev : s.eigenvalues) CHECK(ev >= 0.25);
}

TEST_CASE("cluster grouping") {
  Spectrum s;
  s.eigenvalues = {1.0, 1.0 + 5e-9, 2.0, 3.0, 3.0 + 1e-10, 3.0 + 2e-10};
  const auto c = s.clusters();
  REQUIRE(c.size() == 3);
  CHECK(c[0] == std::vector<int>{0, 1});
  CHECK(c[1] == std::vector<int>{2});
  CHECK(c[2] == std::vector<int>{3, 4, 5});
}

TEST_CASE("spectrum JSON round trip") {
  const AssembledForms f = square_problem(0.25);
  const Mesh m = generate(Domain::euclidean_box(vec2(0, 0), vec2(1, 1)), 0.25);
  const Spectrum s = solve_lowest(f, 3, std::make_shared<Mesh>(m));
  CHECK(s.h == doctest::Approx(m.h));

  const auto j = s.to_json();
  CHECK(j.at("metric") == "euclidean");
  CHECK(j.at("dof") == f.dof_count());
  const Spectrum back = Spectrum::from_json(j);
  REQUIRE(back.count() == 3);
  for (int i = 0; i < 3; ++i) CHECK(back.eigenvalues[i] == s.eigenvalues[i]);
  CHECK(back.metric == Metric::Euclidean);
  CHECK(back.n == 2);
  CHECK(back.dof() == s.dof());

  auto bad = j;
  bad["eigenvalues"] = {2.0, 1.0};
  CHECK_THROWS_AS(Spectrum::from_json(bad), std::invalid_argument);
}

TEST_CASE("angular variance separates radial from angular disk modes") {
  const Mesh disk = refine(generate(Domain::euclidean_disk({0, 0}, 1.0), 0.2));
  const AssembledForms f = apply_dirichlet(assemble(disk, Metric::Euclidean, 2), disk);
  const Spectrum s = solve_lowest(f, 6);

  // Mode order for the disk: radial, two m=1, two m=2, second radial.
  std::vector<double> var;
  for (const auto& v : s.eigenvectors)
    var.push_back(angular_variance(f, disk, v, {0, 0}, 1.0));
  CHECK(var[0] < 1e-3);
  CHECK(var[5] < 1e-3);
  for (int i = 1; i <= 4; ++i) CHECK(var[i] > 0.05);

  // A function linear in the radius is explained exactly.
  Eigen::VectorXd radial(f.dof_count());
  for (int i = 0; i < f.dof_count(); ++i)
    radial[i] = 1.0 - disk.vertices[f.dof_map[i]].norm();
  CHECK(angular_variance(f, disk, radial, {0, 0}, 1.0) < 1e-9);
}

TEST_CASE("angular variance uses the geodesic radius on hyperbolic balls") {
  // Geodesic circles about the hyperbolic center are Euclidean circles with
  // drifting centers, so the hyperbolic branch must bin by geodesic distance.
  const double r = 1.0;
  const auto [center_height, euclid_radius] = ball_embed(r, 1.0);
  const Eigen::Vector2d center(0.0, center_height);

  Mesh ball = refine(refine(generate(Domain::geodesic_ball(r), 0.25)));
  const AssembledForms f = apply_dirichlet(assemble(ball, Metric::Hyperbolic, 2), ball);
  const Spectrum s = solve_lowest(f, 6);

  std::vector<double> var;
  for (const auto& v : s.eigenvectors)
    var.push_back(angular_variance(f, ball, v, center, euclid_radius));
  CHECK(var[0] < 1e-3);                            // ground state is radial
  for (int i = 1; i <= 4; ++i) CHECK(var[i] > 0.05);  // angular pairs are not

  // A function linear in the geodesic distance is explained exactly.
  Eigen::VectorXd radial(f.dof_count());
  for (int i = 0; i < f.dof_count(); ++i) {
    const Eigen::Vector2d x = ball.vertices[f.dof_map[i]];
    const double dx = x.x(), dy = x.y() - 1.0;
    radial[i] = r - std::acosh(1.0 + (dx * dx + dy * dy) / (2.0 * x.y()));
  }
  CHECK(angular_variance(f, ball, radial, center, euclid_radius) < 1e-9);

  CHECK_THROWS_AS(angular_variance(f, ball, s.eigenvectors[0], {0.0, 0.5}, 1.0),
                  std::invalid_argument);
}
