#include "hyperspec/geometry.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

using namespace hyperspec;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("conformal factor is 1/x_n^2") {
  CHECK(conformal_factor(vec2(0.3, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(conformal_factor(vec3(0.0, 0.0, 2.0)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(conformal_factor(vec2(1.0, 0.5)) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(conformal_factor(vec2(0.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(conformal_factor(vec2(0.0, -1.0)), std::domain_error);
}

TEST_CASE("domain validation rejects bad shapes") {
  CHECK_THROWS_AS(Domain::half_space_box(vec2(0, 0), vec2(1, 1)), GeometryError);
  CHECK_THROWS_AS(Domain::half_space_box(vec2(0, 2), vec2(1, 1)), GeometryError);
  CHECK_THROWS_AS(Domain::geodesic_ball(-1.0), GeometryError);
  CHECK_THROWS_AS(Domain::geodesic_ball(1.0, 0.0), GeometryError);
  CHECK_THROWS_AS(Domain::euclidean_disk({0.0, 0.0}, 0.0), GeometryError);

  // Too few vertices, nonpositive height, clockwise orientation, bowtie.
  CHECK_THROWS_AS(Domain::polygon2d({{0, 1}, {1, 1}}), GeometryError);
  CHECK_THROWS_AS(Domain::polygon2d({{0, 0}, {1, 1}, {0, 2}}), GeometryError);
  CHECK_THROWS_AS(Domain::polygon2d({{0, 1}, {0, 2}, {1, 2}, {1, 1}}), GeometryError);
  CHECK_THROWS_AS(Domain::polygon2d({{0, 1}, {1, 2}, {1, 1}, {0, 2}}), GeometryError);

  CHECK_NOTHROW(Domain::polygon2d({{0, 1}, {1, 1}, {1, 2}, {0, 2}}));
}

TEST_CASE("domain kind queries") {
  CHECK(Domain::half_space_box(vec2(0, 1), vec2(1, 2)).hyperbolic());
  CHECK(Domain::geodesic_ball(1.0).hyperbolic());
  CHECK(Domain::polygon2d({{0, 1}, {1, 1}, {0, 2}}).hyperbolic());
  CHECK_FALSE(Domain::euclidean_box(vec2(0, 0), vec2(1, 1)).hyperbolic());
  CHECK_FALSE(Domain::euclidean_disk({0, 0}, 1.0).hyperbolic());

  CHECK(Domain::half_space_box(vec3(0, 0, 1), vec3(1, 1, 2)).dimension() == 3);
  CHECK(Domain::geodesic_ball(1.0).dimension() == 2);
}

TEST_CASE("domain JSON round trip") {
  const std::vector<Domain> domains = {
      Domain::half_space_box(vec2(0, 1), vec2(1, 2)),
      Domain::half_space_box(vec3(0, 0, 1), vec3(1, 1, 2)),
      Domain::geodesic_ball(0.5, 2.0),
      Domain::polygon2d({{0, 1}, {1, 1}, {1, 2}, {0, 2}}),
      Domain::euclidean_box(vec2(0, 0), vec2(1, 1)),
      Domain::euclidean_disk({0.25, -1.0}, 2.0),
  };
  for (const auto& d : domains) {
    const Domain back = Domain::from_json(d.to_json());
    CHECK(back.to_json() == d.to_json());
    CHECK(back.dimension() == d.dimension());
    CHECK(std::string(back.kind_name()) == d.kind_name());
  }

  const auto j = nlohmann::json::parse(
      R"({"kind": "half_space_box", "n": 2, "lo": [0, 1], "hi": [1, 2]})");
  const Domain d = Domain::from_json(j);
  CHECK(d.dimension() == 2);
  CHECK(std::get<HalfSpaceBox>(d.kind()).hi[1] == 2.0);
  CHECK_THROWS(Domain::from_json(nlohmann::json::parse(R"({"kind": "mystery"})")));
}

TEST_CASE("hyperbolic volume of boxes matches the separable integral") {
  CHECK(hyperbolic_volume(Domain::half_space_box(vec2(0, 1), vec2(1, 2))) ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(hyperbolic_volume(Domain::half_space_box(vec3(0, 0, 1), vec3(1, 1, 2))) ==
        doctest::Approx(0.375).epsilon(1e-10));
  // Wider box, analytic value (hi1-lo1)*(1/lo2 - 1/hi2).
  CHECK(hyperbolic_volume(Domain::half_space_box(vec2(-1, 0.5), vec2(2, 4))) ==
        doctest::Approx(3.0 * (2.0 - 0.25)).epsilon(1e-10));
}

TEST_CASE("hyperbolic volume of geodesic balls matches 2*pi*(cosh r - 1)") {
  for (const double r : {0.25, 0.5, 1.0, 2.0}) {
    const double exact = 2.0 * kPi * (std::cosh(r) - 1.0);
    CHECK(hyperbolic_volume(Domain::geodesic_ball(r)) ==
          doctest::Approx(exact).epsilon(1e-8));
    // Anchor height is an isometry parameter: volume must not depend on it.
    CHECK(hyperbolic_volume(Domain::geodesic_ball(r, 3.0)) ==
          doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("hyperbolic volume of polygons is exact via the boundary integral") {
  // Square [0,1]x[1,2] as a polygon: same region as the box.
  const Domain square = Domain::polygon2d({{0, 1}, {1, 1}, {1, 2}, {0, 2}});
  CHECK(hyperbolic_volume(square) == doctest::Approx(0.5).epsilon(1e-13));

  // Triangle (0,1),(1,1),(0,2): integral of 1/y^2 equals 1 - ln 2.
  const Domain tri = Domain::polygon2d({{0, 1}, {1, 1}, {0, 2}});
  CHECK(hyperbolic_volume(tri) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("hyperbolic volume rejects Euclidean domains") {
  CHECK_THROWS_AS(hyperbolic_volume(Domain::euclidean_box(vec2(0, 0), vec2(1, 1))),
                  std::invalid_argument);
  CHECK_THROWS_AS(hyperbolic_volume(Domain::euclidean_disk({0, 0}, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("geometric profile of boxes is closed form") {
  const auto p = geometric_profile(Domain::half_space_box(vec2(0, 1), vec2(1, 2)));
  CHECK(p.rho_ratio == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(p.eps_cor == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(p.s_max == doctest::Approx(0.5).epsilon(1e-14));
  REQUIRE(p.eps_cone.has_value());
  CHECK(*p.eps_cone == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.hyperbolic_volume == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.boundary_samples == 0);

  const auto high = geometric_profile(Domain::half_space_box(vec2(0, 10), vec2(1, 11)));
  CHECK(high.rho_ratio == doctest::Approx(1.21).epsilon(1e-14));
  CHECK(high.s_max == doctest::Approx(1.0 / 101.0).epsilon(1e-14));
  REQUIRE(high.eps_cone.has_value());
  // Defining equation at the minimum: eps^2/(1+eps) = s_max.
  const double e = *high.eps_cone;
  CHECK(e * e / (1.0 + e) == doctest::Approx(high.s_max).epsilon(1e-12));

  const auto wide = geometric_profile(Domain::half_space_box(vec2(-2, 1), vec2(2, 2)));
  CHECK(wide.s_max == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("box profile matches brute-force grid sampling") {
  const Domain d = Domain::half_space_box(vec2(-0.3, 0.7), vec2(1.2, 1.9));
  const auto p = geometric_profile(d);

  double max_h2 = 0.0, min_h2 = 1e300, s_best = 0.0;
  const int g = 100;
  for (int i = 0; i <= g; ++i) {
    const double x1 = -0.3 + 1.5 * i / g;
    for (int j = 0; j <= g; ++j) {
      const double x2 = 0.7 + 1.2 * j / g;
      max_h2 = std::max(max_h2, x2 * x2);
      min_h2 = std::min(min_h2, x2 * x2);
      const double v2 = (x1 * x1) / (x2 * x2);
      s_best = std::max(s_best, v2 / (1.0 + v2));
    }
  }
  CHECK(p.rho_ratio == doctest::Approx(max_h2 / min_h2).epsilon(1e-12));
  CHECK(p.s_max == doctest::Approx(s_best).epsilon(1e-12));
}

TEST_CASE("geometric profile of balls from boundary sampling") {
  const auto p1 = geometric_profile(Domain::geodesic_ball(1.0));
  // Height range [e^-r, e^r], so rho_ratio = e^{4r}.
  CHECK(p1.rho_ratio == doctest::Approx(std::exp(4.0)).epsilon(1e-8));
  const double t = std::tanh(1.0);
  CHECK(p1.s_max == doctest::Approx(t * t).epsilon(1e-8));
  CHECK(p1.boundary_samples > 0);
  // Minimal eps for s_max = tanh^2(1) exceeds the n=2 cap.
  CHECK_FALSE(p1.eps_cone.has_value());

  const auto p05 = geometric_profile(Domain::geodesic_ball(0.5));
  const double t05 = std::tanh(0.5);
  CHECK(p05.s_max == doctest::Approx(t05 * t05).epsilon(1e-8));
  REQUIRE(p05.eps_cone.has_value());
  CHECK(*p05.eps_cone == doctest::Approx(minimal_cone_eps(t05 * t05)).epsilon(1e-8));
}

TEST_CASE("geometric profile of polygons") {
  // Same region as the box [0,1]x[1,2]: the sampled profile must agree with
  // the closed form.
  const auto p = geometric_profile(Domain::polygon2d({{0, 1}, {1, 1}, {1, 2}, {0, 2}}));
  CHECK(p.rho_ratio == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(p.s_max == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("minimal cone eps and its cap") {
  CHECK(minimal_cone_eps(0.0) == 0.0);
  CHECK(minimal_cone_eps(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  for (const double s : {0.1, 0.3, 0.7, 0.95}) {
    const double e = minimal_cone_eps(s);
    CHECK(e * e / (1.0 + e) == doctest::Approx(s).epsilon(1e-13));
    // No smaller eps works: back off slightly and the inequality fails.
    const double em = e * (1.0 - 1e-9);
    CHECK(em * em / (1.0 + em) < s);
  }
  CHECK(eps_cone_cap(2) == 1.0);
  CHECK(eps_cone_cap(3) == 2.0);
  CHECK(eps_cone_cap(5) == 2.0);
}

TEST_CASE("ball embedding in the half-space model") {
  const auto [h0, r0] = ball_embed(1e-12, 1.0);
  CHECK(h0 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r0 == doctest::Approx(0.0).epsilon(1e-10));

  const auto [h1, r1] = ball_embed(1.0, 1.0);
  CHECK(h1 == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK(r1 == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));

  const auto [h2, r2] = ball_embed(1.0, 2.0);
  CHECK(h2 == doctest::Approx(2.0 * std::cosh(1.0)).epsilon(1e-15));
  CHECK(r2 == doctest::Approx(2.0 * std::sinh(1.0)).epsilon(1e-15));

  // Distance oracle: every boundary point is at hyperbolic distance r from
  // (0, a), via cosh d = 1 + |x-y|^2/(2 x_2 y_2).
  for (const double r : {0.3, 1.0, 2.5}) {
    for (const double a : {1.0, 2.0}) {
      const auto [ch, cr] = ball_embed(r, a);
      CHECK(ch - cr > 0.0);
      for (int i = 0; i < 8; ++i) {
        const double phi = 2.0 * kPi * i / 8;
        const double bx = cr * std::sin(phi);
        const double by = ch + cr * std::cos(phi);
        const double d2 = bx * bx + (by - a) * (by - a);
        const double cosh_d = 1.0 + d2 / (2.0 * by * a);
        CHECK(cosh_d == doctest::Approx(std::cosh(r)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-15));
  CHECK(unit_ball_volume(4) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-15));
}

TEST_CASE("polygon helpers") {
  const std::vector<Eigen::Vector2d> ccw = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<Eigen::Vector2d> cw = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  CHECK(polygon_signed_area(ccw) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(polygon_signed_area(cw) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(polygon_is_simple(ccw));
  const std::vector<Eigen::Vector2d> bowtie = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK_FALSE(polygon_is_simple(bowtie));
}
