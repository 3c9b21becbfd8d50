#include "hyperspec/conformal.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperspec {

namespace {

void check_spec(const TestFunctionSpec& spec, const Point& x) {
  if (spec.n < 2) throw std::invalid_argument("test function: n must be >= 2");
  if (x.size() != spec.n)
    throw std::invalid_argument("test function: point dimension does not match n");
  if (spec.family != TestFamily::LogHeight && (spec.p < 1 || spec.p > spec.n - 1))
    throw std::invalid_argument("test function: p must lie in 1..n-1");
  if (!(x[spec.n - 1] > 0.0))
    throw std::domain_error("test function: requires x_n > 0");
}

}  // namespace

TestFunctionValues eval_test_function(const TestFunctionSpec& spec, const Point& x) {
  check_spec(spec, x);
  const int n = spec.n;
  const double xn = x[n - 1];

  TestFunctionValues out;
  out.grad0 = Eigen::VectorXd::Zero(n);
  switch (spec.family) {
    case TestFamily::Coordinate: {
      out.value = x[spec.p - 1];
      out.grad0[spec.p - 1] = 1.0;
      out.grad_norm_sq = xn * xn;
      out.laplacian_g = 0.0;
      break;
    }
    case TestFamily::LogHeight: {
      out.value = std::log(xn);
      out.grad0[n - 1] = 1.0 / xn;
      out.grad_norm_sq = 1.0;
      out.laplacian_g = 1.0 - n;
      break;
    }
    case TestFamily::ArcsinhRatio: {
      const double v = x[spec.p - 1] / xn;
      const double root = std::sqrt(1.0 + v * v);
      out.value = std::asinh(v);
      out.grad0[spec.p - 1] = 1.0 / (xn * root);
      out.grad0[n - 1] = -v / (xn * root);
      out.grad_norm_sq = 1.0;
      // tanh(arcsinh v) = v / sqrt(1 + v^2)
      out.laplacian_g = (n - 1) * v / root;
      break;
    }
  }
  return out;
}

double test_function_value(const TestFunctionSpec& spec, const Point& x) {
  check_spec(spec, x);
  switch (spec.family) {
    case TestFamily::Coordinate:
      return x[spec.p - 1];
    case TestFamily::LogHeight:
      return std::log(x[spec.n - 1]);
    case TestFamily::ArcsinhRatio:
      return std::asinh(x[spec.p - 1] / x[spec.n - 1]);
  }
  throw std::logic_error("unreachable");
}

FdCheckResult fd_check(const TestFunctionSpec& spec, const Point& x, double step) {
  check_spec(spec, x);
  if (!(step > 0.0)) throw std::invalid_argument("fd_check: step must be positive");
  const int n = spec.n;
  const double xn = x[n - 1];
  if (!(xn > 2.0 * step))
    throw std::invalid_argument("fd_check: point too close to the boundary for this step");

  const double f0 = test_function_value(spec, x);
  double lap0 = 0.0;
  double dn = 0.0;
  for (int q = 0; q < n; ++q) {
    Point xp = x, xm = x;
    xp[q] += step;
    xm[q] -= step;
    const double fp = test_function_value(spec, xp);
    const double fm = test_function_value(spec, xm);
    lap0 += (fp - 2.0 * f0 + fm) / (step * step);
    if (q == n - 1) dn = (fp - fm) / (2.0 * step);
  }

  FdCheckResult r;
  r.fd_laplacian = xn * xn * lap0 - (n - 2) * xn * dn;
  r.closed_form = eval_test_function(spec, x).laplacian_g;
  r.rel_err = std::abs(r.fd_laplacian - r.closed_form) /
              std::max(std::abs(r.closed_form), 1.0);
  return r;
}

const char* family_name(TestFamily f) {
  switch (f) {
    case TestFamily::Coordinate:
      return "coordinate";
    case TestFamily::LogHeight:
      return "log_height";
    case TestFamily::ArcsinhRatio:
      return "arcsinh_ratio";
  }
  return "?";
}

TestFunctionSpec family_from_name(const std::string& name, int n) {
  TestFunctionSpec spec;
  spec.n = n;
  std::string base = name;
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    base = name.substr(0, colon);
    spec.p = std::stoi(name.substr(colon + 1));
  }
  if (base == "coordinate") {
    spec.family = TestFamily::Coordinate;
  } else if (base == "log_height") {
    spec.family = TestFamily::LogHeight;
  } else if (base == "arcsinh_ratio") {
    spec.family = TestFamily::ArcsinhRatio;
  } else {
    throw std::invalid_argument("unknown test function family: " + name);
  }
  return spec;
}

}  // namespace hyperspec
