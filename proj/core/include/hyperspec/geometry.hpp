#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <optional>
#include <variant>
#include <vector>

#include "hyperspec/errors.hpp"

namespace hyperspec {

using Point = Eigen::VectorXd;

// Axis-aligned box {lo <= x <= hi} contained in the open upper half-space
// (lo[n-1] > 0).
struct HalfSpaceBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

// Geodesic ball of the given radius about the point (0,...,0,anchor_height).
// In the half-space model it coincides with a Euclidean ball; see ball_embed().
struct GeodesicBall {
  double radius = 1.0;
  double anchor_height = 1.0;
  int n = 2;
};

// Simple, positively oriented polygon in the upper half-plane (all x2 > 0).
struct Polygon2D {
  std::vector<Eigen::Vector2d> vertices;
};

struct EuclideanBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

struct EuclideanDisk {
  Eigen::Vector2d center{0.0, 0.0};
  double radius = 1.0;
};

using DomainKind =
    std::variant<HalfSpaceBox, GeodesicBall, Polygon2D, EuclideanBox, EuclideanDisk>;

// A bounded computational region, either in the upper half-space model of
// hyperbolic space or in Euclidean space. Construction validates the shape
// (positive extents, simple polygon, positive heights for hyperbolic kinds).
class Domain {
 public:
  explicit Domain(DomainKind kind);

  static Domain half_space_box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Domain geodesic_ball(double radius, double anchor_height = 1.0, int n = 2);
  static Domain polygon2d(std::vector<Eigen::Vector2d> vertices);
  static Domain euclidean_box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Domain euclidean_disk(Eigen::Vector2d center, double radius);

  const DomainKind& kind() const { return kind_; }
  int dimension() const { return n_; }
  bool hyperbolic() const;

  // Short tag used in reports: "half_space_box", "geodesic_ball", ...
  const char* kind_name() const;

  nlohmann::ordered_json to_json() const;
  static Domain from_json(const nlohmann::json& j);

 private:
  DomainKind kind_;
  int n_ = 2;
};

// Geometry-dependent constants entering the hyperbolic eigenvalue bounds.
//
//   rho_ratio = (max_O x_n^2) / (min_O x_n^2)
//   s_max     = max_O sum_p v_p^2/(1+v_p^2),  v_p = x_p / x_n
//   eps_cor   = rho_ratio - 1
//   eps_cone  = minimal eps with eps^2/(1+eps) >= s_max, present only when it
//               also satisfies the cap eps <= 1 (n = 2) resp. eps <= 2 (n >= 3)
//
// Extrema are exact (closed form) for boxes; for balls and polygons they come
// from dense boundary sampling with two local refinement passes, at the
// resolution recorded in `boundary_samples`.
struct GeometricProfile {
  double rho_ratio = 1.0;
  double s_max = 0.0;
  double eps_cor = 0.0;
  std::optional<double> eps_cone;
  double hyperbolic_volume = 0.0;
  int boundary_samples = 0;  // 0 means closed-form extrema

  nlohmann::ordered_json to_json() const;
};

// Conformal factor e^{2h} = 1/x_n^2 of the half-space metric at x (x_n > 0).
double conformal_factor(const Point& x);

// Volume of a hyperbolic domain, i.e. the integral of x_n^{-n}, to relative
// accuracy tol. Boxes and balls use adaptive quadrature; polygons use the
// exact per-edge boundary integral.
double hyperbolic_volume(const Domain& d, double tol = 1e-10);

// Extracts the profile of a hyperbolic domain. eps_cone, when present, is the
// smallest admissible value, so the resulting coefficient 4(1+eps)/n is the
// sharpest this criterion yields for the domain.
GeometricProfile geometric_profile(const Domain& d);

// Cap on eps_cone: 1 in dimension 2, 2 in dimension >= 3.
double eps_cone_cap(int n);

// Minimal eps >= 0 with eps^2/(1+eps) >= s, i.e. the positive root of
// eps^2 - s*eps - s = 0.
double minimal_cone_eps(double s);

// Euclidean center height and radius of the geodesic ball of radius r about
// (0,...,0,a): center height a*cosh(r), radius a*sinh(r). The returned ball
// always stays inside the open half-space.
std::pair<double, double> ball_embed(double r, double anchor_height);

// Unit-ball volume in R^n (pi in 2D, 4*pi/3 in 3D).
double unit_ball_volume(int n);

// Signed area of a polygon (positive for counterclockwise orientation).
double polygon_signed_area(const std::vector<Eigen::Vector2d>& vertices);

// True if the closed polygonal chain has no self-intersections.
bool polygon_is_simple(const std::vector<Eigen::Vector2d>& vertices);

}  // namespace hyperspec
