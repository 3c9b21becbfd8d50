#include "hyperspec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

namespace hyperspec {

namespace {

using Edge = std::pair<int, int>;

Edge undirected(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

// Count of triangles incident to each undirected edge.
std::map<Edge, int> edge_use_counts(const Mesh& m) {
  std::map<Edge, int> counts;
  for (const auto& t : m.triangles) {
    counts[undirected(t[0], t[1])]++;
    counts[undirected(t[1], t[2])]++;
    counts[undirected(t[2], t[0])]++;
  }
  return counts;
}

std::vector<bool> boundary_flags_from_edges(int nv, const std::map<Edge, int>& counts) {
  std::vector<bool> flags(nv, false);
  for (const auto& [e, c] : counts) {
    if (c == 1) {
      flags[e.first] = true;
      flags[e.second] = true;
    }
  }
  return flags;
}

Mesh structured_box(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi, double target_h) {
  const int nx = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / target_h - 1e-12)));
  const int ny = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / target_h - 1e-12)));
  const double dx = (hi.x() - lo.x()) / nx;
  const double dy = (hi.y() - lo.y()) / ny;

  Mesh m;
  m.vertices.reserve(static_cast<size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.emplace_back(lo.x() + i * dx, lo.y() + j * dy);

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  return m;
}

// Concentric-ring disk triangulation: ring j carries 6j vertices, so sectors
// stay conforming between consecutive rings.
Mesh ring_disk(const Eigen::Vector2d& center, double radius, double target_h) {
  const int rings = std::max(1, static_cast<int>(std::ceil(radius / target_h - 1e-12)));

  Mesh m;
  m.vertices.emplace_back(center);
  std::vector<int> ring_start{0};
  for (int j = 1; j <= rings; ++j) {
    ring_start.push_back(m.vertex_count());
    const double r = radius * j / rings;
    const int count = 6 * j;
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * i / count;
      m.vertices.emplace_back(center.x() + r * std::cos(a), center.y() + r * std::sin(a));
    }
  }

  auto push = [&m](int a, int b, int c) {
    if (signed_area(m.vertices[a], m.vertices[b], m.vertices[c]) < 0.0) std::swap(b, c);
    m.triangles.push_back({a, b, c});
  };

  for (int s = 0; s < 6; ++s) push(0, ring_start[1] + s, ring_start[1] + (s + 1) % 6);
  for (int j = 1; j < rings; ++j) {
    const int inner = ring_start[j], outer = ring_start[j + 1];
    const int ni = 6 * j, no = 6 * (j + 1);
    for (int s = 0; s < 6; ++s) {
      for (int t = 0; t <= j; ++t) {
        const int b0 = outer + (s * (j + 1) + t) % no;
        const int b1 = outer + (s * (j + 1) + t + 1) % no;
        const int a0 = inner + (s * j + t) % ni;
        push(b0, b1, a0);
        if (t < j) push(b1, inner + (s * j + t + 1) % ni, a0);
      }
    }
  }
  m.snap = CircleBoundary{center, radius};
  return m;
}

bool point_in_triangle(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                       const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const double d1 = signed_area(p, a, b);
  const double d2 = signed_area(p, b, c);
  const double d3 = signed_area(p, c, a);
  const bool has_neg = (d1 < 0) || (d2 < 0) || (d3 < 0);
  const bool has_pos = (d1 > 0) || (d2 > 0) || (d3 > 0);
  return !(has_neg && has_pos);
}

std::vector<std::array<int, 3>> ear_clip(const std::vector<Eigen::Vector2d>& pts) {
  std::vector<int> ring(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) ring[i] = static_cast<int>(i);

  std::vector<std::array<int, 3>> tris;
  while (ring.size() > 3) {
    bool clipped = false;
    for (size_t i = 0; i < ring.size(); ++i) {
      const int ia = ring[(i + ring.size() - 1) % ring.size()];
      const int ib = ring[i];
      const int ic = ring[(i + 1) % ring.size()];
      if (signed_area(pts[ia], pts[ib], pts[ic]) <= 0.0) continue;
      bool ear = true;
      for (int iv : ring) {
        if (iv == ia || iv == ib || iv == ic) continue;
        if (point_in_triangle(pts[iv], pts[ia], pts[ib], pts[ic])) {
          ear = false;
          break;
        }
      }
      if (!ear) continue;
      tris.push_back({ia, ib, ic});
      ring.erase(ring.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw GeometryError("ear clipping failed; polygon may be non-simple");
  }
  tris.push_back({ring[0], ring[1], ring[2]});
  return tris;
}

// Bisect the globally longest edge until none exceeds target_h. The globally
// longest edge is automatically the longest edge of every triangle containing
// it, so splitting keeps the mesh conforming.
void longest_edge_refine(Mesh& m, double target_h) {
  for (;;) {
    std::map<Edge, std::vector<int>> edges;
    for (int t = 0; t < m.triangle_count(); ++t) {
      const auto& tri = m.triangles[t];
      edges[undirected(tri[0], tri[1])].push_back(t);
      edges[undirected(tri[1], tri[2])].push_back(t);
      edges[undirected(tri[2], tri[0])].push_back(t);
    }
    Edge longest{-1, -1};
    double len = target_h;
    for (const auto& [e, tris] : edges) {
      const double l = (m.vertices[e.first] - m.vertices[e.second]).norm();
      if (l > len) {
        len = l;
        longest = e;
      }
    }
    if (longest.first < 0) return;

    const int mid = m.vertex_count();
    m.vertices.emplace_back(0.5 * (m.vertices[longest.first] + m.vertices[longest.second]));
    for (int t : edges[longest]) {
      auto tri = m.triangles[t];
      int apex = -1;
      for (int v : tri)
        if (v != longest.first && v != longest.second) apex = v;
      m.triangles[t] = {apex, longest.first, mid};
      if (signed_area(m.vertices[apex], m.vertices[longest.first], m.vertices[mid]) < 0.0)
        std::swap(m.triangles[t][1], m.triangles[t][2]);
      std::array<int, 3> other{apex, mid, longest.second};
      if (signed_area(m.vertices[apex], m.vertices[mid], m.vertices[longest.second]) < 0.0)
        std::swap(other[1], other[2]);
      m.triangles.push_back(other);
    }
  }
}

void finalize(Mesh& m, bool hyperbolic) {
  const auto counts = edge_use_counts(m);
  m.boundary_vertex = boundary_flags_from_edges(m.vertex_count(), counts);
  m.h = m.max_edge_length();
  validate_mesh(m, hyperbolic);
}

}  // namespace

int Mesh::boundary_count() const {
  return static_cast<int>(std::count(boundary_vertex.begin(), boundary_vertex.end(), true));
}

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < triangle_count(); ++t) a += triangle_area(t);
  return a;
}

double Mesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& t : triangles) {
    h = std::max(h, (vertices[t[0]] - vertices[t[1]]).norm());
    h = std::max(h, (vertices[t[1]] - vertices[t[2]]).norm());
    h = std::max(h, (vertices[t[2]] - vertices[t[0]]).norm());
  }
  return h;
}

Mesh generate(const Domain& d, double target_h) {
  if (!(target_h > 0.0)) throw std::invalid_argument("generate: target_h must be positive");
  if (d.dimension() != 2)
    throw std::invalid_argument("generate: meshing is implemented for 2D domains only");

  Mesh m;
  if (const auto* box = std::get_if<HalfSpaceBox>(&d.kind())) {
    m = structured_box({box->lo[0], box->lo[1]}, {box->hi[0], box->hi[1]}, target_h);
  } else if (const auto* box = std::get_if<EuclideanBox>(&d.kind())) {
    m = structured_box({box->lo[0], box->lo[1]}, {box->hi[0], box->hi[1]}, target_h);
  } else if (const auto* disk = std::get_if<EuclideanDisk>(&d.kind())) {
    m = ring_disk(disk->center, disk->radius, target_h);
  } else if (const auto* ball = std::get_if<GeodesicBall>(&d.kind())) {
    const auto [cy, radius] = ball_embed(ball->radius, ball->anchor_height);
    m = ring_disk({0.0, cy}, radius, target_h);
  } else {
    const auto& poly = std::get<Polygon2D>(d.kind());
    m.vertices = poly.vertices;
    m.triangles = ear_clip(poly.vertices);
    longest_edge_refine(m, target_h);
  }
  finalize(m, d.hyperbolic());
  return m;
}

Mesh refine(const Mesh& parent) {
  const auto counts = edge_use_counts(parent);
  const bool hyperbolic_heights = std::all_of(
      parent.vertices.begin(), parent.vertices.end(),
      [](const Eigen::Vector2d& v) { return v.y() > 0.0; });

  Mesh child;
  child.vertices = parent.vertices;
  child.snap = parent.snap;

  std::map<Edge, int> midpoint;
  auto mid_of = [&](int a, int b) {
    const Edge e = undirected(a, b);
    auto it = midpoint.find(e);
    if (it != midpoint.end()) return it->second;
    const int id = child.vertex_count();
    Eigen::Vector2d p = 0.5 * (parent.vertices[a] + parent.vertices[b]);
    if (parent.snap && counts.at(e) == 1) {
      const Eigen::Vector2d r = p - parent.snap->center;
      p = parent.snap->center + parent.snap->radius * r.normalized();
    }
    child.vertices.emplace_back(p);
    midpoint.emplace(e, id);
    return id;
  };

  for (const auto& t : parent.triangles) {
    const int m01 = mid_of(t[0], t[1]);
    const int m12 = mid_of(t[1], t[2]);
    const int m20 = mid_of(t[2], t[0]);
    child.triangles.push_back({t[0], m01, m20});
    child.triangles.push_back({t[1], m12, m01});
    child.triangles.push_back({t[2], m20, m12});
    child.triangles.push_back({m01, m12, m20});
  }
  finalize(child, hyperbolic_heights);
  return child;
}

void validate_mesh(const Mesh& m, bool hyperbolic) {
  if (m.vertices.empty() || m.triangles.empty())
    throw GeometryError("mesh: empty vertex or triangle list");
  if (m.boundary_vertex.size() != m.vertices.size())
    throw GeometryError("mesh: boundary flag size mismatch");

  std::vector<int> incident(m.vertices.size(), 0);
  std::map<Edge, int> directed;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles[t];
    for (int v : tri) {
      if (v < 0 || v >= m.vertex_count()) throw GeometryError("mesh: vertex index out of range");
      incident[static_cast<size_t>(v)]++;
    }
    if (m.triangle_area(t) <= 0.0) throw GeometryError("mesh: non-positive triangle area");
    for (int e = 0; e < 3; ++e) {
      const Edge de{tri[e], tri[(e + 1) % 3]};
      if (++directed[de] > 1)
        throw GeometryError("mesh: directed edge repeated; orientation inconsistent");
    }
  }

  const auto counts = edge_use_counts(m);
  for (const auto& [e, c] : counts)
    if (c > 2) throw GeometryError("mesh: edge shared by more than two triangles");
  const auto flags = boundary_flags_from_edges(m.vertex_count(), counts);
  for (int v = 0; v < m.vertex_count(); ++v) {
    if (flags[static_cast<size_t>(v)] != m.boundary_vertex[static_cast<size_t>(v)])
      throw GeometryError("mesh: boundary flag does not match boundary edges");
    if (incident[static_cast<size_t>(v)] == 0) throw GeometryError("mesh: isolated vertex");
    if (!flags[static_cast<size_t>(v)] && incident[static_cast<size_t>(v)] < 3)
      throw GeometryError("mesh: interior vertex with fewer than 3 incident triangles");
  }
  if (hyperbolic) {
    for (const auto& v : m.vertices)
      if (!(v.y() > 0.0)) throw GeometryError("mesh: hyperbolic vertex at nonpositive height");
  }
}

void write_mesh(const Mesh& m, std::ostream& out) {
  out << m.vertex_count() << " " << m.triangle_count() << "\n";
  char buf[80];
  for (int v = 0; v < m.vertex_count(); ++v) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %d", m.vertices[static_cast<size_t>(v)].x(),
                  m.vertices[static_cast<size_t>(v)].y(),
                  m.boundary_vertex[static_cast<size_t>(v)] ? 1 : 0);
    out << buf << "\n";
  }
  for (const auto& t : m.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

Mesh read_mesh(std::istream& in) {
  int nv = 0, nt = 0;
  if (!(in >> nv >> nt) || nv <= 0 || nt <= 0)
    throw GeometryError("mesh: bad header");
  Mesh m;
  m.vertices.resize(static_cast<size_t>(nv));
  m.boundary_vertex.resize(static_cast<size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    double x, y;
    int flag;
    if (!(in >> x >> y >> flag)) throw GeometryError("mesh: bad vertex line");
    m.vertices[static_cast<size_t>(v)] = {x, y};
    m.boundary_vertex[static_cast<size_t>(v)] = flag != 0;
  }
  m.triangles.resize(static_cast<size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    if (!(in >> m.triangles[static_cast<size_t>(t)][0] >> m.triangles[static_cast<size_t>(t)][1] >>
          m.triangles[static_cast<size_t>(t)][2]))
      throw GeometryError("mesh: bad triangle line");
  }
  m.h = m.max_edge_length();
  validate_mesh(m, false);
  return m;
}

}  // namespace hyperspec
