#pragma once

// Universal eigenvalue inequalities for Dirichlet spectra.  All the sum
// inequalities share one template
//     sum_{i<=k} (l_{k+1}-l_i)^2  <=  C sum_{i<=k} (l_{k+1}-l_i)(l_i - a)
// and differ only in the coefficient C, the shift a, and the hypothesis
// under which the statement applies; InequalityKind carries that identity.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "hyperspec/conformal.hpp"
#include "hyperspec/eigensolve.hpp"
#include "hyperspec/geometry.hpp"

namespace hyperspec {

enum class InequalityFamily {
  Ppw,                  // gap bound l_{k+1} - l_k <= (4/(kn)) sum l_i
  HileProtter,          // sum l_i/(l_{k+1}-l_i) >= kn/4
  Yang,                 // C = 4/n,            a = 0            (Euclidean)
  ChengYangHyperbolic,  // C = 4,              a = (n-1)^2/4
  LuoZheng,             // C = rho 4/n,        a = (n^2-2n-4)/4
  RhoYangSharp,         // C = rho 4/n,        a = (n-1)^2/4
  EpsRho,               // C = 4(1+eps)/n, eps = rho - 1
  EpsCone,              // C = 4(1+eps)/n, eps from s_max <= eps^2/(1+eps)
  ChengConjecture,      // C = 4/n,            a = (n-1)^2/4    (conjectural)
};

const char* inequality_key(InequalityFamily family);
InequalityFamily inequality_from_key(std::string_view key);
std::vector<InequalityFamily> all_inequality_families();

// A fully realized inequality: family plus the constants and admissibility
// for a concrete dimension, metric, and (optionally) domain profile.
// Families whose constants involve the domain shape refuse construction
// without a profile.  Inadmissible kinds still evaluate; `admissible`
// records whether the theorem's hypothesis actually holds.
struct InequalityKind {
  InequalityFamily family = InequalityFamily::Yang;
  int n = 2;
  Metric metric = Metric::Euclidean;
  bool sum_template = false;  // evaluated through the (C, a) template
  double C = 0.0;
  double a = 0.0;
  bool admissible = false;
  bool conjecture = false;
  std::optional<double> rho_ratio;
  std::optional<double> eps;
  std::optional<double> s_max;

  // `eps_override` is accepted for the cone-condition family only; the
  // default is the minimal admissible eps (sharpest conclusion), falling
  // back to the cap when the domain fails the hypothesis.
  static InequalityKind make(InequalityFamily family, int n, Metric metric,
                             const std::optional<GeometricProfile>& profile = std::nullopt,
                             std::optional<double> eps_override = std::nullopt);
};

// (lhs, rhs) of the sum template at truncation k (1-based, needs k+1
// eigenvalues).
std::pair<double, double> sum_inequality_eval(const std::vector<double>& eigs, int k,
                                              double C, double a);

struct InequalityReport {
  InequalityFamily family = InequalityFamily::Yang;
  int k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs, whatever the comparison direction
  bool satisfied = false;
  bool defined = true;  // false only for a degenerate Hile-Protter quotient
  bool admissible = false;
  bool conjecture = false;
  std::optional<double> C, a, rho_ratio, eps, s_max;
  double h = 0.0;  // mesh size of the originating solve; 0 when unknown
  int dof = 0;

  nlohmann::ordered_json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

// Evaluates one inequality on an ascending spectrum prefix.
InequalityReport check(const InequalityKind& kind, const std::vector<double>& eigs, int k);

// The two classical Euclidean checks (gap bound and quotient bound).
std::pair<InequalityReport, InequalityReport> classic_checks(const std::vector<double>& eigs,
                                                             int k, int n);

// Largest root of  k x^2 - (2 S1 + C (S1 - k a)) x + (S2 + C sum l(l-a)) = 0
// over the first k eigenvalues: any spectrum satisfying the template at
// level k has l_{k+1} at most this value.  Empty when the quadratic has no
// real root (the inequality is vacuous at this k).
std::optional<double> implied_bound(const std::vector<double>& eigs_prefix, double C, double a);

// Default relative slack allowed in the discrete functional check.
inline constexpr double kFunctionalTolDefault = 0.02;

// A scalar field on the domain, sampled at quadrature points: Euclidean
// gradient, metric squared gradient norm, and metric Laplacian.
struct FieldSample {
  Eigen::Vector2d grad0 = Eigen::Vector2d::Zero();
  double grad_norm_sq = 0.0;
  double laplacian = 0.0;
};
using FieldFn = std::function<FieldSample(const Eigen::Vector2d&)>;

struct FunctionalCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  std::vector<double> a_terms;  // per-mode integral of u^2 |grad f|^2
  std::vector<double> b_terms;  // per-mode integral of (2 grad f . grad u + u lap f)^2
};

// Test-function identity behind the sum inequalities, evaluated on discrete
// eigenfunctions:  sum (l_{k+1}-l_i)^2 A_i <= sum (l_{k+1}-l_i) B_i  with
// A_i, B_i the quadrature integrals above, allowing `tol` relative slack for
// discretization error.
FunctionalCheck functional_check_field(const Spectrum& spec, const Mesh& m, const FieldFn& field,
                                       int k, double tol = kFunctionalTolDefault);

// The same with f drawn from the conformal test families (hyperbolic
// spectra), or a plain coordinate function (Euclidean spectra).
FunctionalCheck functional_check(const Spectrum& spec, const TestFunctionSpec& f, int k,
                                 const Mesh& m, double tol = kFunctionalTolDefault);

}  // namespace hyperspec
