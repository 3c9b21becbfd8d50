#pragma once

#include <Eigen/Dense>
#include <string>

#include "hyperspec/geometry.hpp"

namespace hyperspec {

// The three test-function families entering the eigenvalue bounds:
//   Coordinate(p):   f = x_p                 |grad f|^2 = x_n^2   Lap f = 0
//   LogHeight:       f = ln x_n              |grad f|^2 = 1       Lap f = 1-n
//   ArcsinhRatio(p): f = arcsinh(x_p/x_n)    |grad f|^2 = 1       Lap f = (n-1) tanh f
// Gradient norms and Laplacians are with respect to the hyperbolic metric.
enum class TestFamily { Coordinate, LogHeight, ArcsinhRatio };

struct TestFunctionSpec {
  TestFamily family = TestFamily::Coordinate;
  int p = 1;  // coordinate index in 1..n-1, where the family carries one
  int n = 2;
};

// Gradients are stored in the Euclidean coordinate basis (grad0); all metric
// contractions go through grad_norm_sq = x_n^2 * |grad0|^2, so there is a
// single place where the conformal factor can enter.
struct TestFunctionValues {
  double value = 0.0;
  Eigen::VectorXd grad0;
  double grad_norm_sq = 0.0;
  double laplacian_g = 0.0;
};

TestFunctionValues eval_test_function(const TestFunctionSpec& spec, const Point& x);

// Value of the family at x, used by the finite-difference check.
double test_function_value(const TestFunctionSpec& spec, const Point& x);

struct FdCheckResult {
  double fd_laplacian = 0.0;
  double closed_form = 0.0;
  double rel_err = 0.0;  // |fd - closed| / max(|closed|, 1)
};

// Independent verification of the closed-form Laplacian: central differences
// for the Euclidean Laplacian and normal derivative, mapped through the
// conformal reduction Lap_g f = x_n^2 Lap0 f - (n-2) x_n df/dx_n.
FdCheckResult fd_check(const TestFunctionSpec& spec, const Point& x, double step = 1e-4);

const char* family_name(TestFamily f);

// Parses "coordinate:1", "log_height", "arcsinh_ratio:2" style names.
TestFunctionSpec family_from_name(const std::string& name, int n);

}  // namespace hyperspec
