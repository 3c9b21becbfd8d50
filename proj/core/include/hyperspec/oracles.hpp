#pragma once

// Independent reference computations used to validate the finite-element
// solver without circularity: Bessel-zero spectra for Euclidean disks,
// separable square spectra, radial ODE shooting for hyperbolic geodesic
// balls, and the Weyl-law prediction.

#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperspec/fem.hpp"

namespace hyperspec {

// Bessel function of the first kind J_m, evaluated through the periodic
// trapezoid discretization of its integral representation.  Spectrally
// accurate for the argument range the zero finder visits.
double bessel_j(int m, double x);

// k-th positive zero of J_m (m >= 0, k >= 1), bisected to 1e-12.
double bessel_zero(int m, int k);

enum class ReferenceSource { BesselDisk, SquareAnalytic, RadialShooting };

const char* reference_source_name(ReferenceSource source);

struct ReferenceEntry {
  double value = 0.0;
  int multiplicity = 1;
};

// Exact (or shooting-grade) spectrum with multiplicities.  `entries` are
// ascending and cover at least `count` eigenvalues when weighted by
// multiplicity; flatten() repeats and truncates to exactly `count`.
struct ReferenceSpectrum {
  std::vector<ReferenceEntry> entries;
  int count = 0;
  ReferenceSource source = ReferenceSource::SquareAnalytic;
  Metric metric = Metric::Euclidean;
  int n = 2;
  nlohmann::ordered_json parameters;

  std::vector<double> flatten() const;
  nlohmann::ordered_json to_json() const;
};

struct UnitSquareShape {};
struct DiskShape {
  double radius = 1.0;
};
using ReferenceShape = std::variant<UnitSquareShape, DiskShape>;

// First `count` Dirichlet eigenvalues of the unit square (pi^2 (p^2+q^2))
// or the disk of radius R ((j_{m,k}/R)^2, twofold for m >= 1).
ReferenceSpectrum reference_spectrum(const ReferenceShape& shape, int count);

// First `count` radial Dirichlet eigenvalues of the geodesic ball of
// radius r in hyperbolic n-space: u'' + (n-1)coth(t)u' + lambda u = 0 on
// (0, r), regular at 0, u(r) = 0.  Shooting with an adaptive embedded
// Runge-Kutta pair; eigenvalues bracketed by interior-zero counts and
// polished by bisection on the sign of u(r).  `series_start` is where the
// two-term series hands off to the integrator; results are insensitive to
// it at the 1e-8 level.
std::vector<double> hyperbolic_ball_radial(double r, int n, int count,
                                           double series_start = 1e-6);

// hyperbolic_ball_radial wrapped as a ReferenceSpectrum (all radial modes
// are simple).
ReferenceSpectrum radial_ball_reference(double r, int n, int count);

// Sorted Dirichlet eigenvalues pi^2 (p^2/w^2 + q^2/h^2) of a w-by-h
// Euclidean rectangle.
std::vector<double> euclidean_box_spectrum(double width, double height, int count);

// Leading Weyl-law term 4 pi^2 / (omega_n vol)^(2/n) * k^(2/n) with
// omega_n the Euclidean unit-ball volume.
double weyl_prediction(int k, int n, double vol);

}  // namespace hyperspec
