#include "hyperspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace hyperspec {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* msg) {
  if (!ok) throw GeometryError(msg);
}

void validate_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, bool hyperbolic) {
  require(lo.size() == hi.size(), "box: lo and hi must have the same dimension");
  require(lo.size() >= 2, "box: dimension must be at least 2");
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    require(hi[i] > lo[i], "box: hi must exceed lo componentwise");
  if (hyperbolic)
    require(lo[lo.size() - 1] > 0.0, "half-space box: lo height must be positive");
}

double clamp01(double t) {
  t -= std::floor(t);
  return t;
}

// Max of f over the unit circle of parameters [0,1), sampled on a coarse grid
// and sharpened by two local refinement passes around the best sample.
double sampled_extremum(const std::function<double(double)>& f, int coarse, int* evals) {
  double best_t = 0.0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < coarse; ++i) {
    const double t = static_cast<double>(i) / coarse;
    const double v = f(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  int used = coarse;
  double window = 1.0 / coarse;
  for (int pass = 0; pass < 2; ++pass) {
    const int m = 64;
    const double lo = best_t - window;
    const double step = 2.0 * window / m;
    for (int j = 0; j <= m; ++j) {
      const double t = clamp01(lo + j * step);
      const double v = f(t);
      if (v > best_v) {
        best_v = v;
        best_t = t;
      }
    }
    used += m + 1;
    window = step;
  }
  if (evals) *evals = used;
  return best_v;
}

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole,
                            double eps, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, flm, m, fm);
  const double right = simpson(m, fm, frm, b, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

// Adaptive Simpson quadrature with a relative tolerance against a first-pass
// estimate of the integral's magnitude.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
  const double fa = f(a), fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = simpson(a, fa, fm, b, fb);
  const double scale = std::max(std::abs(whole), 1e-300);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 48);
}

double cone_term(double v_sq) { return v_sq / (1.0 + v_sq); }

}  // namespace

Domain::Domain(DomainKind kind) : kind_(std::move(kind)) {
  std::visit(
      [this](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HalfSpaceBox>) {
          validate_box(k.lo, k.hi, true);
          n_ = static_cast<int>(k.lo.size());
        } else if constexpr (std::is_same_v<T, EuclideanBox>) {
          validate_box(k.lo, k.hi, false);
          n_ = static_cast<int>(k.lo.size());
        } else if constexpr (std::is_same_v<T, GeodesicBall>) {
          require(k.radius > 0.0, "geodesic ball: radius must be positive");
          require(k.anchor_height > 0.0, "geodesic ball: anchor height must be positive");
          require(k.n >= 2, "geodesic ball: dimension must be at least 2");
          n_ = k.n;
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          require(k.vertices.size() >= 3, "polygon: needs at least 3 vertices");
          for (const auto& v : k.vertices)
            require(v.y() > 0.0, "polygon: every vertex must have positive height");
          require(polygon_signed_area(k.vertices) > 0.0,
                  "polygon: must be positively oriented");
          require(polygon_is_simple(k.vertices), "polygon: must be simple");
          n_ = 2;
        } else if constexpr (std::is_same_v<T, EuclideanDisk>) {
          require(k.radius > 0.0, "disk: radius must be positive");
          n_ = 2;
        }
      },
      kind_);
}

Domain Domain::half_space_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  return Domain(HalfSpaceBox{std::move(lo), std::move(hi)});
}

Domain Domain::geodesic_ball(double radius, double anchor_height, int n) {
  return Domain(GeodesicBall{radius, anchor_height, n});
}

Domain Domain::polygon2d(std::vector<Eigen::Vector2d> vertices) {
  return Domain(Polygon2D{std::move(vertices)});
}

Domain Domain::euclidean_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  return Domain(EuclideanBox{std::move(lo), std::move(hi)});
}

Domain Domain::euclidean_disk(Eigen::Vector2d center, double radius) {
  return Domain(EuclideanDisk{std::move(center), radius});
}

bool Domain::hyperbolic() const {
  return std::holds_alternative<HalfSpaceBox>(kind_) ||
         std::holds_alternative<GeodesicBall>(kind_) ||
         std::holds_alternative<Polygon2D>(kind_);
}

const char* Domain::kind_name() const {
  return std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HalfSpaceBox>) return "half_space_box";
        if constexpr (std::is_same_v<T, GeodesicBall>) return "geodesic_ball";
        if constexpr (std::is_same_v<T, Polygon2D>) return "polygon2d";
        if constexpr (std::is_same_v<T, EuclideanBox>) return "euclidean_box";
        if constexpr (std::is_same_v<T, EuclideanDisk>) return "euclidean_disk";
      },
      kind_);
}

nlohmann::ordered_json Domain::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind_name();
  j["n"] = n_;
  std::visit(
      [&j](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HalfSpaceBox> || std::is_same_v<T, EuclideanBox>) {
          j["lo"] = std::vector<double>(k.lo.begin(), k.lo.end());
          j["hi"] = std::vector<double>(k.hi.begin(), k.hi.end());
        } else if constexpr (std::is_same_v<T, GeodesicBall>) {
          j["radius"] = k.radius;
          j["anchor_height"] = k.anchor_height;
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          auto verts = nlohmann::ordered_json::array();
          for (const auto& v : k.vertices) verts.push_back({v.x(), v.y()});
          j["vertices"] = std::move(verts);
        } else if constexpr (std::is_same_v<T, EuclideanDisk>) {
          j["center"] = {k.center.x(), k.center.y()};
          j["radius"] = k.radius;
        }
      },
      kind_);
  return j;
}

Domain Domain::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  auto vec = [&j](const char* key) {
    auto v = j.at(key).get<std::vector<double>>();
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
  };
  if (kind == "half_space_box") return half_space_box(vec("lo"), vec("hi"));
  if (kind == "euclidean_box") return euclidean_box(vec("lo"), vec("hi"));
  if (kind == "geodesic_ball")
    return geodesic_ball(j.at("radius").get<double>(),
                         j.value("anchor_height", 1.0),
                         j.value("n", 2));
  if (kind == "polygon2d") {
    std::vector<Eigen::Vector2d> verts;
    for (const auto& v : j.at("vertices"))
      verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    return polygon2d(std::move(verts));
  }
  if (kind == "euclidean_disk") {
    const auto& c = j.at("center");
    return euclidean_disk({c.at(0).get<double>(), c.at(1).get<double>()},
                          j.at("radius").get<double>());
  }
  throw std::invalid_argument("unknown domain kind: " + kind);
}

nlohmann::ordered_json GeometricProfile::to_json() const {
  nlohmann::ordered_json j;
  j["rho_ratio"] = rho_ratio;
  j["s_max"] = s_max;
  j["eps_cor"] = eps_cor;
  if (eps_cone)
    j["eps_cone"] = *eps_cone;
  else
    j["eps_cone"] = nullptr;
  j["hyperbolic_volume"] = hyperbolic_volume;
  j["boundary_samples"] = boundary_samples;
  return j;
}

double conformal_factor(const Point& x) {
  if (x.size() < 2) throw std::invalid_argument("conformal_factor: point dimension < 2");
  const double xn = x[x.size() - 1];
  if (!(xn > 0.0)) throw std::domain_error("conformal_factor: requires x_n > 0");
  return 1.0 / (xn * xn);
}

double unit_ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("unit_ball_volume: n must be >= 1");
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

std::pair<double, double> ball_embed(double r, double anchor_height) {
  if (!(r > 0.0)) throw std::invalid_argument("ball_embed: radius must be positive");
  if (!(anchor_height > 0.0))
    throw std::invalid_argument("ball_embed: anchor height must be positive");
  return {anchor_height * std::cosh(r), anchor_height * std::sinh(r)};
}

double hyperbolic_volume(const Domain& d, double tol) {
  if (!d.hyperbolic())
    throw std::invalid_argument("hyperbolic_volume: domain is not hyperbolic");
  if (!(tol > 0.0)) throw std::invalid_argument("hyperbolic_volume: tol must be positive");
  const int n = d.dimension();

  if (const auto* box = std::get_if<HalfSpaceBox>(&d.kind())) {
    double cross = 1.0;
    for (int i = 0; i + 1 < n; ++i) cross *= box->hi[i] - box->lo[i];
    const double a = box->lo[n - 1], b = box->hi[n - 1];
    const double slice = adaptive_simpson(
        [n](double t) { return std::pow(t, -static_cast<double>(n)); }, a, b, tol);
    return cross * slice;
  }

  if (const auto* ball = std::get_if<GeodesicBall>(&d.kind())) {
    // Slice the embedded Euclidean ball by height t = h0 + R sin(theta); the
    // cross-section is an (n-1)-ball of radius R cos(theta).
    const auto [h0, radius] = ball_embed(ball->radius, ball->anchor_height);
    const double shell = unit_ball_volume(n - 1) * std::pow(radius, n);
    return shell * adaptive_simpson(
                       [h0, radius = radius, n](double theta) {
                         const double c = std::cos(theta);
                         const double z = h0 + radius * std::sin(theta);
                         return std::pow(c, n) * std::pow(z, -static_cast<double>(n));
                       },
                       -0.5 * kPi, 0.5 * kPi, tol);
  }

  const auto& poly = std::get<Polygon2D>(d.kind());
  // Green's theorem: integral of y^-2 over the polygon equals the
  // counterclockwise boundary integral of (1/y) dx, exact per edge.
  double total = 0.0;
  const auto& v = poly.vertices;
  for (size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    const double dx = b.x() - a.x();
    const double dy = b.y() - a.y();
    const double rel = dy / a.y();
    total += (std::abs(rel) < 1e-14) ? dx / a.y() : dx * std::log1p(rel) / dy;
  }
  return total;
}

double eps_cone_cap(int n) { return n == 2 ? 1.0 : 2.0; }

double minimal_cone_eps(double s) {
  if (s < 0.0) throw std::invalid_argument("minimal_cone_eps: s must be nonnegative");
  return 0.5 * (s + std::sqrt(s * s + 4.0 * s));
}

GeometricProfile geometric_profile(const Domain& d) {
  if (!d.hyperbolic())
    throw std::invalid_argument("geometric_profile: domain is not hyperbolic");
  const int n = d.dimension();

  GeometricProfile p;
  p.hyperbolic_volume = hyperbolic_volume(d);

  if (const auto* box = std::get_if<HalfSpaceBox>(&d.kind())) {
    // x_n^2 is monotone in the height coordinate and each v_p^2 peaks at the
    // largest |x_p| and the smallest height, so box extrema are closed form.
    const double zmin = box->lo[n - 1], zmax = box->hi[n - 1];
    p.rho_ratio = (zmax * zmax) / (zmin * zmin);
    double s = 0.0;
    for (int q = 0; q + 1 < n; ++q) {
      const double xp = std::max(std::abs(box->lo[q]), std::abs(box->hi[q]));
      const double v = xp / zmin;
      s += cone_term(v * v);
    }
    p.s_max = s;
  } else if (const auto* ball = std::get_if<GeodesicBall>(&d.kind())) {
    const auto [h0, radius] = ball_embed(ball->radius, ball->anchor_height);
    auto at = [h0, radius = radius](double t) {
      const double theta = 2.0 * kPi * t;
      return std::pair<double, double>{std::abs(radius * std::cos(theta)),
                                       h0 + radius * std::sin(theta)};
    };
    int evals = 0;
    const double zmax = sampled_extremum([&](double t) { return at(t).second; }, 4096, &evals);
    const double zmin = -sampled_extremum([&](double t) { return -at(t).second; }, 4096, nullptr);
    // On a sphere centered on the x_n axis, spreading the transverse mass
    // equally over the n-1 horizontal coordinates maximizes the cone sum
    // (each term is concave in x_p^2).
    p.s_max = sampled_extremum(
        [&](double t) {
          const auto [rho, z] = at(t);
          const double w = (rho * rho) / ((n - 1) * z * z);
          return (n - 1) * cone_term(w);
        },
        4096, nullptr);
    p.rho_ratio = (zmax * zmax) / (zmin * zmin);
    p.boundary_samples = evals;
  } else {
    const auto& poly = std::get<Polygon2D>(d.kind());
    const auto& v = poly.vertices;
    std::vector<double> cum{0.0};
    for (size_t i = 0; i < v.size(); ++i)
      cum.push_back(cum.back() + (v[(i + 1) % v.size()] - v[i]).norm());
    const double per = cum.back();
    auto at = [&](double t) {
      const double s = clamp01(t) * per;
      const auto it = std::upper_bound(cum.begin(), cum.end(), s);
      size_t i = std::min(v.size() - 1, static_cast<size_t>(it - cum.begin()) - 1);
      const auto& a = v[i];
      const auto& b = v[(i + 1) % v.size()];
      const double len = cum[i + 1] - cum[i];
      const double u = len > 0.0 ? (s - cum[i]) / len : 0.0;
      return (a + u * (b - a)).eval();
    };
    int evals = 0;
    const double zmax = sampled_extremum([&](double t) { return at(t).y(); }, 4096, &evals);
    const double zmin = -sampled_extremum([&](double t) { return -at(t).y(); }, 4096, nullptr);
    p.s_max = sampled_extremum(
        [&](double t) {
          const auto q = at(t);
          const double vp = q.x() / q.y();
          return cone_term(vp * vp);
        },
        4096, nullptr);
    // Height and x1/x2 are monotone along each edge, so vertices are exact.
    double vz_max = zmax, vz_min = zmin, vs = p.s_max;
    for (const auto& q : v) {
      vz_max = std::max(vz_max, q.y());
      vz_min = std::min(vz_min, q.y());
      const double vp = q.x() / q.y();
      vs = std::max(vs, cone_term(vp * vp));
    }
    p.rho_ratio = (vz_max * vz_max) / (vz_min * vz_min);
    p.s_max = vs;
    p.boundary_samples = evals;
  }

  p.eps_cor = p.rho_ratio - 1.0;
  const double eps = minimal_cone_eps(p.s_max);
  if (eps <= eps_cone_cap(n)) p.eps_cone = eps;
  return p;
}

double polygon_signed_area(const std::vector<Eigen::Vector2d>& vertices) {
  double twice = 0.0;
  for (size_t i = 0; i < vertices.size(); ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[(i + 1) % vertices.size()];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

namespace {

int orientation(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& c) {
  const double cross = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
  const double scale = std::max({std::abs(b.x() - a.x()), std::abs(b.y() - a.y()),
                                 std::abs(c.x() - a.x()), std::abs(c.y() - a.y()), 1.0});
  if (std::abs(cross) <= 1e-14 * scale * scale) return 0;
  return cross > 0.0 ? 1 : -1;
}

bool on_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& p) {
  return std::min(a.x(), b.x()) - 1e-14 <= p.x() && p.x() <= std::max(a.x(), b.x()) + 1e-14 &&
         std::min(a.y(), b.y()) - 1e-14 <= p.y() && p.y() <= std::max(a.y(), b.y()) + 1e-14;
}

bool segments_cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                    const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
  const int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

bool polygon_is_simple(const std::vector<Eigen::Vector2d>& vertices) {
  const size_t m = vertices.size();
  if (m < 3) return false;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      // Skip edges sharing a vertex; they meet there by construction.
      if (j == i || (j + 1) % m == i || (i + 1) % m == j) continue;
      if (segments_cross(vertices[i], vertices[(i + 1) % m], vertices[j],
                         vertices[(j + 1) % m]))
        return false;
    }
  }
  return true;
}

}  // namespace hyperspec
