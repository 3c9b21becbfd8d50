#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <nlohmann/json.hpp>
#include <vector>

#include "hyperspec/fem.hpp"
#include "hyperspec/mesh.hpp"

namespace hyperspec {

enum class SolveStrategy { Auto, Dense, ShiftInvertLanczos };

// Relative gap below which neighboring eigenvalues count as one cluster.
inline constexpr double kClusterRelGap = 1e-8;

// Largest dof count for which Auto picks the dense path.
inline constexpr int kDenseDofLimit = 2000;

// Convergence target for ||K v - lambda M v||_{M^-1} relative to lambda.
inline constexpr double kResidualRelTol = 1e-9;

// The lowest part of a Dirichlet spectrum: ascending eigenvalues with
// M-orthonormal eigenvectors over the interior degrees of freedom.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<Eigen::VectorXd> eigenvectors;
  std::vector<int> dof_map;  // dof index -> mesh vertex index
  Metric metric = Metric::Euclidean;
  int n = 2;
  double h = 0.0;
  std::shared_ptr<const Mesh> mesh;  // may be null for matrix-only solves

  int count() const { return static_cast<int>(eigenvalues.size()); }
  int dof() const { return static_cast<int>(dof_map.size()); }

  // Runs of consecutive eigenvalues within kClusterRelGap of each other.
  // Entries stay separate in `eigenvalues`; this only reports the grouping.
  std::vector<std::vector<int>> clusters() const;

  nlohmann::ordered_json to_json(bool include_vectors = false) const;
  // Restores eigenvalues and metadata (not eigenvectors or the mesh).
  static Spectrum from_json(const nlohmann::json& j);
};

// Smallest k eigenpairs of K v = lambda M v. Auto uses a dense reduction up
// to kDenseDofLimit dofs and shift-invert Lanczos at shift 0 beyond; both
// paths agree to well under 1e-7 relative where both apply. Eigenvector sign
// is fixed by making the first nonzero coefficient positive. The Lanczos path
// verifies completeness of the returned set with a matrix inertia count.
Spectrum solve_lowest(const AssembledForms& forms, int k,
                      SolveStrategy strategy = SolveStrategy::Auto);

// Same, recording the mesh (and its h) in the spectrum.
Spectrum solve_lowest(const AssembledForms& forms, int k,
                      std::shared_ptr<const Mesh> mesh,
                      SolveStrategy strategy = SolveStrategy::Auto);

// max_i ||K v_i - lambda_i M v_i||_{M^-1} / lambda_i over the spectrum.
double max_relative_residual(const AssembledForms& forms, const Spectrum& s);

// Fraction of the M-weighted energy of v not explained by a piecewise-linear
// function of the radial coordinate; near zero exactly for radially symmetric
// modes. `center` and `radius` describe the Euclidean circle bounding the
// domain. For Euclidean forms the radial coordinate is the distance to
// `center`; for hyperbolic forms it is the geodesic distance to the
// hyperbolic center recovered from the embedded circle (anchor height
// sqrt(center_y^2 - radius^2)). Used to pick out radial eigenfunctions on
// disk and geodesic-ball domains.
double angular_variance(const AssembledForms& forms, const Mesh& m,
                        const Eigen::VectorXd& v, const Eigen::Vector2d& center,
                        double radius);

}  // namespace hyperspec
