#include "hyperspec/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hyperspec/fem.hpp"
#include "hyperspec/jsonio.hpp"

namespace hyperspec {

namespace {

constexpr InequalityFamily kAllFamilies[] = {
    InequalityFamily::Ppw,          InequalityFamily::HileProtter,
    InequalityFamily::Yang,         InequalityFamily::ChengYangHyperbolic,
    InequalityFamily::LuoZheng,     InequalityFamily::RhoYangSharp,
    InequalityFamily::EpsRho,       InequalityFamily::EpsCone,
    InequalityFamily::ChengConjecture,
};

void require_ascending_prefix(const std::vector<double>& eigs, int needed, const char* who) {
  if (static_cast<int>(eigs.size()) < needed) {
    throw std::invalid_argument(std::string(who) + ": needs at least " +
                                std::to_string(needed) + " eigenvalues");
  }
  for (int i = 1; i < needed; ++i) {
    if (eigs[i] < eigs[i - 1]) {
      throw std::invalid_argument(std::string(who) + ": eigenvalues must ascend");
    }
  }
}

// satisfied <=> lhs <= rhs, up to roundoff on either side.
bool leq_with_roundoff(double lhs, double rhs) {
  return lhs <= rhs + 1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

}  // namespace

const char* inequality_key(InequalityFamily family) {
  switch (family) {
    case InequalityFamily::Ppw:
      return "ppw";
    case InequalityFamily::HileProtter:
      return "hile_protter";
    case InequalityFamily::Yang:
      return "yang";
    case InequalityFamily::ChengYangHyperbolic:
      return "cheng_yang_hyperbolic";
    case InequalityFamily::LuoZheng:
      return "luo_zheng";
    case InequalityFamily::RhoYangSharp:
      return "rho_yang_sharp";
    case InequalityFamily::EpsRho:
      return "eps_rho";
    case InequalityFamily::EpsCone:
      return "eps_cone";
    case InequalityFamily::ChengConjecture:
      return "cheng_conjecture";
  }
  throw std::invalid_argument("unknown inequality family");
}

InequalityFamily inequality_from_key(std::string_view key) {
  for (const auto family : kAllFamilies) {
    if (key == inequality_key(family)) return family;
  }
  throw std::invalid_argument("unknown inequality kind: " + std::string(key));
}

std::vector<InequalityFamily> all_inequality_families() {
  return {std::begin(kAllFamilies), std::end(kAllFamilies)};
}

InequalityKind InequalityKind::make(InequalityFamily family, int n, Metric metric,
                                    const std::optional<GeometricProfile>& profile,
                                    std::optional<double> eps_override) {
  if (n < 2) throw std::invalid_argument("inequality kind: dimension must be >= 2");
  const bool hyperbolic = metric == Metric::Hyperbolic;
  const double hyp_shift = 0.25 * (n - 1) * (n - 1);

  const bool needs_profile =
      family == InequalityFamily::LuoZheng || family == InequalityFamily::RhoYangSharp ||
      family == InequalityFamily::EpsRho || family == InequalityFamily::EpsCone;
  if (needs_profile && !profile) {
    throw std::invalid_argument(std::string(inequality_key(family)) +
                                " requires a geometric profile");
  }
  if (eps_override && family != InequalityFamily::EpsCone) {
    throw std::invalid_argument("eps override only applies to the cone-condition family");
  }

  InequalityKind kind;
  kind.family = family;
  kind.n = n;
  kind.metric = metric;

  switch (family) {
    case InequalityFamily::Ppw:
    case InequalityFamily::HileProtter:
      kind.sum_template = false;
      kind.admissible = !hyperbolic;
      break;
    case InequalityFamily::Yang:
      kind.sum_template = true;
      kind.C = 4.0 / n;
      kind.a = 0.0;
      kind.admissible = !hyperbolic;
      break;
    case InequalityFamily::ChengYangHyperbolic:
      kind.sum_template = true;
      kind.C = 4.0;
      kind.a = hyp_shift;
      kind.admissible = hyperbolic;
      break;
    case InequalityFamily::ChengConjecture:
      kind.sum_template = true;
      kind.C = 4.0 / n;
      kind.a = hyp_shift;
      kind.admissible = hyperbolic;
      kind.conjecture = true;
      break;
    case InequalityFamily::LuoZheng:
      kind.sum_template = true;
      kind.rho_ratio = profile->rho_ratio;
      kind.C = profile->rho_ratio * 4.0 / n;
      kind.a = 0.25 * (n * n - 2 * n - 4);
      kind.admissible = hyperbolic;
      break;
    case InequalityFamily::RhoYangSharp:
      kind.sum_template = true;
      kind.rho_ratio = profile->rho_ratio;
      kind.C = profile->rho_ratio * 4.0 / n;
      kind.a = hyp_shift;
      kind.admissible = hyperbolic;
      break;
    case InequalityFamily::EpsRho: {
      kind.sum_template = true;
      kind.rho_ratio = profile->rho_ratio;
      const double eps = profile->rho_ratio - 1.0;
      kind.eps = eps;
      kind.C = 4.0 * (1.0 + eps) / n;
      kind.a = hyp_shift;
      kind.admissible = hyperbolic;
      break;
    }
    case InequalityFamily::EpsCone: {
      kind.sum_template = true;
      kind.s_max = profile->s_max;
      const double cap = eps_cone_cap(n);
      double eps;
      if (eps_override) {
        eps = *eps_override;
        if (!(eps > 0.0)) throw std::invalid_argument("eps override must be positive");
        kind.admissible = hyperbolic && eps <= cap &&
                          profile->s_max <= eps * eps / (1.0 + eps);
      } else if (profile->eps_cone) {
        // The profile records the minimal admissible eps when it exists;
        // use it for the sharpest conclusion.
        eps = *profile->eps_cone;
        kind.admissible = hyperbolic;
      } else {
        // Hypothesis fails for every allowed eps; evaluate at the cap so the
        // numbers are still informative, but flag the kind inadmissible.
        eps = cap;
        kind.admissible = false;
      }
      kind.eps = eps;
      kind.C = 4.0 * (1.0 + eps) / n;
      kind.a = hyp_shift;
      break;
    }
  }
  return kind;
}

std::pair<double, double> sum_inequality_eval(const std::vector<double>& eigs, int k, double C,
                                              double a) {
  if (k < 1) throw std::invalid_argument("sum_inequality_eval: k must be >= 1");
  require_ascending_prefix(eigs, k + 1, "sum_inequality_eval");
  const double top = eigs[k];
  double lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < k; ++i) {
    const double gap = top - eigs[i];
    lhs += gap * gap;
    rhs += gap * (eigs[i] - a);
  }
  return {lhs, C * rhs};
}

InequalityReport check(const InequalityKind& kind, const std::vector<double>& eigs, int k) {
  if (k < 1) throw std::invalid_argument("inequality check: k must be >= 1");
  require_ascending_prefix(eigs, k + 1, "inequality check");

  InequalityReport report;
  report.family = kind.family;
  report.k = k;
  report.admissible = kind.admissible;
  report.conjecture = kind.conjecture;
  report.rho_ratio = kind.rho_ratio;
  report.eps = kind.eps;
  report.s_max = kind.s_max;

  if (kind.sum_template) {
    report.C = kind.C;
    report.a = kind.a;
    std::tie(report.lhs, report.rhs) = sum_inequality_eval(eigs, k, kind.C, kind.a);
    report.slack = report.rhs - report.lhs;
    report.satisfied = leq_with_roundoff(report.lhs, report.rhs);
    return report;
  }

  if (kind.family == InequalityFamily::Ppw) {
    double sum = 0.0;
    for (int i = 0; i < k; ++i) sum += eigs[i];
    report.lhs = eigs[k] - eigs[k - 1];
    report.rhs = 4.0 / (static_cast<double>(k) * kind.n) * sum;
    report.slack = report.rhs - report.lhs;
    report.satisfied = leq_with_roundoff(report.lhs, report.rhs);
    return report;
  }

  // Hile-Protter: sum l_i/(l_{k+1}-l_i) >= kn/4, undefined when the top
  // eigenvalue repeats into the sum (the quotient diverges; in the limit the
  // bound holds trivially).
  report.rhs = 0.25 * k * kind.n;
  bool degenerate = false;
  double quotient = 0.0;
  for (int i = 0; i < k; ++i) {
    if (eigs[i] == eigs[k]) {
      degenerate = true;
      break;
    }
    quotient += eigs[i] / (eigs[k] - eigs[i]);
  }
  if (degenerate) {
    report.defined = false;
    report.lhs = std::numeric_limits<double>::quiet_NaN();
    report.slack = std::numeric_limits<double>::quiet_NaN();
    report.satisfied = true;
  } else {
    report.lhs = quotient;
    report.slack = report.rhs - report.lhs;
    report.satisfied = leq_with_roundoff(report.rhs, report.lhs);
  }
  return report;
}

std::pair<InequalityReport, InequalityReport> classic_checks(const std::vector<double>& eigs,
                                                             int k, int n) {
  const auto ppw = InequalityKind::make(InequalityFamily::Ppw, n, Metric::Euclidean);
  const auto hp = InequalityKind::make(InequalityFamily::HileProtter, n, Metric::Euclidean);
  return {check(ppw, eigs, k), check(hp, eigs, k)};
}

std::optional<double> implied_bound(const std::vector<double>& eigs_prefix, double C, double a) {
  const int k = static_cast<int>(eigs_prefix.size());
  if (k < 1) throw std::invalid_argument("implied_bound: needs at least one eigenvalue");
  require_ascending_prefix(eigs_prefix, k, "implied_bound");
  double s1 = 0.0, s2 = 0.0, sa = 0.0;
  for (const double l : eigs_prefix) {
    s1 += l;
    s2 += l * l;
    sa += l * (l - a);
  }
  const double b = 2.0 * s1 + C * (s1 - k * a);
  const double c = s2 + C * sa;
  const double disc = b * b - 4.0 * k * c;
  if (disc < 0.0) return std::nullopt;
  return (b + std::sqrt(disc)) / (2.0 * k);
}

nlohmann::ordered_json InequalityReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["kind"] = inequality_key(family);
  doc["k"] = k;
  doc["lhs"] = lhs;
  doc["rhs"] = rhs;
  doc["slack"] = slack;
  doc["satisfied"] = satisfied;
  doc["defined"] = defined;
  doc["admissible"] = admissible;
  nlohmann::ordered_json constants = nlohmann::ordered_json::object();
  if (C) constants["C"] = *C;
  if (a) constants["a"] = *a;
  if (rho_ratio) constants["rho_ratio"] = *rho_ratio;
  if (eps) constants["eps"] = *eps;
  if (s_max) constants["s_max"] = *s_max;
  if (conjecture) constants["conjecture"] = true;
  doc["constants"] = constants;
  doc["h"] = h;
  doc["dof"] = dof;
  return doc;
}

std::string InequalityReport::csv_header() {
  return "kind,k,lhs,rhs,slack,satisfied,admissible,C,a,rho_ratio,eps,s_max,h,dof";
}

std::string InequalityReport::csv_row() const {
  const auto cell = [](const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); };
  const auto num = [](double v) { return std::isfinite(v) ? fmt17(v) : std::string(); };
  std::string row;
  row += inequality_key(family);
  row += ',' + std::to_string(k);
  row += ',' + num(lhs);
  row += ',' + num(rhs);
  row += ',' + num(slack);
  row += ',' + std::string(satisfied ? "true" : "false");
  row += ',' + std::string(admissible ? "true" : "false");
  row += ',' + cell(C);
  row += ',' + cell(a);
  row += ',' + cell(rho_ratio);
  row += ',' + cell(eps);
  row += ',' + cell(s_max);
  row += ',' + num(h);
  row += ',' + std::to_string(dof);
  return row;
}

namespace {

// Shared quadrature sweep computing A_i and B_i for the first k modes.
FunctionalCheck accumulate_functional(const Spectrum& spec, const Mesh& m, const FieldFn& field,
                                      int k, double tol) {
  if (k < 1) throw std::invalid_argument("functional check: k must be >= 1");
  if (spec.count() < k + 1) {
    throw std::invalid_argument("functional check: spectrum needs at least k+1 eigenpairs");
  }
  if (static_cast<int>(spec.eigenvectors.size()) < k) {
    throw std::invalid_argument("functional check: spectrum is missing eigenvectors");
  }
  const int nv = m.vertex_count();
  for (const int v : spec.dof_map) {
    if (v < 0 || v >= nv) {
      throw std::invalid_argument("functional check: spectrum does not match this mesh");
    }
  }
  const bool hyper = spec.metric == Metric::Hyperbolic;

  std::vector<Eigen::VectorXd> modes(k);
  for (int i = 0; i < k; ++i) {
    modes[i] = expand_to_vertices(spec.eigenvectors[i], spec.dof_map, nv);
  }

  FunctionalCheck result;
  result.a_terms.assign(k, 0.0);
  result.b_terms.assign(k, 0.0);

  for (const auto& tri : m.triangles) {
    const Eigen::Vector2d& pa = m.vertices[tri[0]];
    const Eigen::Vector2d& pb = m.vertices[tri[1]];
    const Eigen::Vector2d& pc = m.vertices[tri[2]];
    const auto quad = tri_quadrature(pa, pb, pc);

    for (int i = 0; i < k; ++i) {
      const double ua = modes[i][tri[0]], ub = modes[i][tri[1]], uc = modes[i][tri[2]];
      const Eigen::Vector2d grad_u = p1_gradient(pa, pb, pc, ua, ub, uc);
      for (int q = 0; q < 3; ++q) {
        const Eigen::Vector2d& p = quad.points[q];
        const FieldSample s = field(p);
        const double conf = hyper ? p.y() * p.y() : 1.0;
        const double w = hyper ? std::pow(p.y(), -spec.n) : 1.0;
        const double u =
            quad.hat_values[q][0] * ua + quad.hat_values[q][1] * ub + quad.hat_values[q][2] * uc;
        const double dot = conf * s.grad0.dot(grad_u);
        const double b_lin = 2.0 * dot + u * s.laplacian;
        result.a_terms[i] += quad.weight * w * u * u * s.grad_norm_sq;
        result.b_terms[i] += quad.weight * w * b_lin * b_lin;
      }
    }
  }

  const double top = spec.eigenvalues[k];
  for (int i = 0; i < k; ++i) {
    const double gap = top - spec.eigenvalues[i];
    result.lhs += gap * gap * result.a_terms[i];
    result.rhs += gap * result.b_terms[i];
  }
  result.satisfied =
      result.lhs <= result.rhs + tol * std::max(std::abs(result.lhs), std::abs(result.rhs)) +
                        1e-12;
  return result;
}

}  // namespace

FunctionalCheck functional_check_field(const Spectrum& spec, const Mesh& m, const FieldFn& field,
                                       int k, double tol) {
  return accumulate_functional(spec, m, field, k, tol);
}

FunctionalCheck functional_check(const Spectrum& spec, const TestFunctionSpec& f, int k,
                                 const Mesh& m, double tol) {
  if (spec.metric == Metric::Hyperbolic) {
    if (f.n != spec.n) {
      throw std::invalid_argument("functional check: test function dimension mismatch");
    }
    const FieldFn field = [f](const Eigen::Vector2d& p) {
      Point x(2);
      x << p.x(), p.y();
      const auto v = eval_test_function(f, x);
      return FieldSample{Eigen::Vector2d(v.grad0[0], v.grad0[1]), v.grad_norm_sq, v.laplacian_g};
    };
    return accumulate_functional(spec, m, field, k, tol);
  }
  // Euclidean spectra reproduce the flat setting: only coordinate functions,
  // with unit gradient and vanishing Laplacian.
  if (f.family != TestFamily::Coordinate) {
    throw std::invalid_argument(
        "functional check: Euclidean spectra admit only coordinate test functions");
  }
  if (f.p < 1 || f.p > 2) {
    throw std::invalid_argument("functional check: coordinate index out of range");
  }
  Eigen::Vector2d dir = Eigen::Vector2d::Zero();
  dir[f.p - 1] = 1.0;
  const FieldFn field = [dir](const Eigen::Vector2d&) { return FieldSample{dir, 1.0, 0.0}; };
  return accumulate_functional(spec, m, field, k, tol);
}

}  // namespace hyperspec
