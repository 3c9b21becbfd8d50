#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <iosfwd>
#include <vector>

#include "hyperspec/mesh.hpp"

namespace hyperspec {

enum class Metric { Euclidean, Hyperbolic };

const char* metric_name(Metric m);
Metric metric_from_name(const std::string& name);

// Weighted Dirichlet-energy and L2 forms over a mesh.
//
// For the half-space metric in dimension n the eigenvalue problem reduces to
// Euclidean forms with weights
//   stiffness weight  x_n^(2-n)   (identically 1 when n = 2)
//   mass weight       x_n^(-n)
// so K_ij = int w_K grad(phi_i).grad(phi_j) and M_ij = int w_M phi_i phi_j
// over P1 hat functions. Pre-elimination the operators run over all mesh
// vertices; apply_dirichlet() removes boundary rows/columns and records the
// surviving vertices in dof_map.
struct AssembledForms {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> mass;
  std::vector<int> dof_map;  // dof index -> mesh vertex index
  Metric metric = Metric::Euclidean;
  int n = 2;
  bool eliminated = false;

  int dof_count() const { return static_cast<int>(stiffness.rows()); }
};

// Assembles both forms over all vertices of m. Element integrals use the
// exact closed form when the weight is constant and a 3-point Gauss rule
// (exact for quadratics) with pointwise weights otherwise.
AssembledForms assemble(const Mesh& m, Metric metric, int n);

// Removes Dirichlet (boundary) degrees of freedom by row/column elimination,
// preserving symmetry and definiteness.
AssembledForms apply_dirichlet(const AssembledForms& forms, const Mesh& m);

// Coordinate-format export: one "rows cols nnz" header line, then
// "row col value" lines in column-major order.
void write_triplets(const Eigen::SparseMatrix<double>& a, std::ostream& out);

// Gradient of the linear interpolant of (ua, ub, uc) on triangle (a, b, c).
Eigen::Vector2d p1_gradient(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                            const Eigen::Vector2d& c, double ua, double ub, double uc);

// Degree-2 triangle rule: three interior points, equal weights area/3.
struct TriQuadrature {
  std::array<Eigen::Vector2d, 3> points;
  std::array<std::array<double, 3>, 3> hat_values;  // hat_values[q][vertex]
  double weight;                                    // area / 3
};
TriQuadrature tri_quadrature(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                             const Eigen::Vector2d& c);

// Expands interior dof coefficients to a full vertex vector (zero on
// eliminated vertices).
Eigen::VectorXd expand_to_vertices(const Eigen::VectorXd& dofs,
                                   const std::vector<int>& dof_map, int vertex_count);

}  // namespace hyperspec
