#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hyperspec/geometry.hpp"

namespace hyperspec {

// Circular boundary a mesh approximates; refinement snaps new boundary
// vertices back onto it.
struct CircleBoundary {
  Eigen::Vector2d center;
  double radius;
};

// Conforming triangulation of a planar domain. Triangles are positively
// oriented, boundary_vertex marks exactly the vertices lying on a boundary
// edge, and h is the longest edge in the mesh. Vertex and triangle ordering
// is deterministic for a given domain and target size.
struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> boundary_vertex;
  double h = 0.0;
  // Set for disk-like domains; not carried through text serialization.
  std::optional<CircleBoundary> snap;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int boundary_count() const;
  double triangle_area(int t) const;
  double total_area() const;
  double max_edge_length() const;
};

// Triangulates a 2D domain. Boxes become structured grids of right triangles
// with axis spacing at most target_h; disks and geodesic balls use concentric
// rings, ceil(radius/target_h) of them; polygons are ear-clipped and then
// bisected along longest edges until no edge exceeds target_h.
Mesh generate(const Domain& d, double target_h);

// Uniform (red) refinement: every triangle splits into four via edge
// midpoints. Midpoints of curved boundary edges are projected back onto the
// circle. Parent vertices keep their indices and positions.
Mesh refine(const Mesh& m);

// Checks all structural invariants (orientation, conformity, boundary flags,
// positive heights when hyperbolic is set); throws GeometryError on failure.
void validate_mesh(const Mesh& m, bool hyperbolic);

// Plain-text serialization:
//   first line "<vertex count> <triangle count>", then one "x y flag" line per
//   vertex and one "i j k" line per triangle.
void write_mesh(const Mesh& m, std::ostream& out);
Mesh read_mesh(std::istream& in);

}  // namespace hyperspec
