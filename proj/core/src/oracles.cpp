#include "hyperspec/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hyperspec/errors.hpp"
#include "hyperspec/geometry.hpp"

namespace hyperspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Quadrature nodes for the Bessel integral.  The integrand's Fourier
// content reaches harmonic ~ m + x, so 256 nodes keep the trapezoid rule
// at machine precision for every argument the zero scans visit.
constexpr int kBesselNodes = 256;

}  // namespace

double bessel_j(int m, double x) {
  if (m < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
  // J_m(x) = (1/2pi) \int_0^{2pi} cos(m t - x sin t) dt; the trapezoid
  // rule on a periodic analytic integrand converges spectrally.
  double sum = 0.0;
  for (int j = 0; j < kBesselNodes; ++j) {
    const double theta = 2.0 * kPi * j / kBesselNodes;
    sum += std::cos(m * theta - x * std::sin(theta));
  }
  return sum / kBesselNodes;
}

double bessel_zero(int m, int k) {
  if (m < 0 || k < 1) throw std::invalid_argument("bessel_zero: need m >= 0, k >= 1");
  // J_m > 0 on (0, j_{m,1}) and consecutive zeros are > 3 apart, so a
  // 0.2-step scan cannot skip a sign change.
  const double step = 0.2;
  const double x_max = m + (k + 0.5 * m + 2.0) * kPi + 10.0;
  double x = m + 0.05;
  double fx = bessel_j(m, x);
  int remaining = k;
  while (x < x_max) {
    const double x_next = x + step;
    const double f_next = bessel_j(m, x_next);
    if ((fx < 0.0) != (f_next < 0.0)) {
      if (--remaining == 0) {
        double lo = x, hi = x_next, flo = fx;
        while (hi - lo > 1e-12) {
          const double mid = 0.5 * (lo + hi);
          const double fmid = bessel_j(m, mid);
          if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
    }
    x = x_next;
    fx = f_next;
  }
  throw NumericalError("bessel_zero: scan exhausted its bracket range");
}

const char* reference_source_name(ReferenceSource source) {
  switch (source) {
    case ReferenceSource::BesselDisk:
      return "bessel_disk";
    case ReferenceSource::SquareAnalytic:
      return "square_analytic";
    case ReferenceSource::RadialShooting:
      return "radial_shooting";
  }
  throw std::invalid_argument("unknown reference source");
}

std::vector<double> ReferenceSpectrum::flatten() const {
  std::vector<double> out;
  out.reserve(count);
  for (const auto& e : entries) {
    for (int i = 0; i < e.multiplicity && static_cast<int>(out.size()) < count; ++i) {
      out.push_back(e.value);
    }
    if (static_cast<int>(out.size()) >= count) break;
  }
  return out;
}

nlohmann::ordered_json ReferenceSpectrum::to_json() const {
  nlohmann::ordered_json doc;
  doc["eigenvalues"] = flatten();
  doc["n"] = n;
  doc["metric"] = metric_name(metric);
  doc["source"] = reference_source_name(source);
  doc["parameters"] = parameters;
  return doc;
}

namespace {

void trim_entries(ReferenceSpectrum& spec) {
  std::sort(spec.entries.begin(), spec.entries.end(),
            [](const ReferenceEntry& a, const ReferenceEntry& b) { return a.value < b.value; });
  int weighted = 0;
  std::size_t keep = 0;
  while (keep < spec.entries.size() && weighted < spec.count) {
    weighted += spec.entries[keep].multiplicity;
    ++keep;
  }
  if (weighted < spec.count) {
    throw NumericalError("reference spectrum enumeration fell short of the requested count");
  }
  spec.entries.resize(keep);
}

ReferenceSpectrum square_spectrum(int count) {
  ReferenceSpectrum spec;
  spec.count = count;
  spec.source = ReferenceSource::SquareAnalytic;
  spec.metric = Metric::Euclidean;
  spec.n = 2;
  spec.parameters = {{"shape", "unit_square"}};
  // Collect all p^2 + q^2 <= S; about pi S / 4 lattice points, so grow S
  // until the weighted total covers `count`.
  long long S = 2 * static_cast<long long>(count) + 8;
  for (;;) {
    std::map<long long, int> mult;
    int total = 0;
    for (long long p = 1; p * p < S; ++p) {
      for (long long q = 1; p * p + q * q <= S; ++q) {
        ++mult[p * p + q * q];
        ++total;
      }
    }
    if (total >= count) {
      spec.entries.clear();
      for (const auto& [s, m] : mult) {
        spec.entries.push_back({kPi * kPi * static_cast<double>(s), m});
      }
      break;
    }
    S *= 2;
  }
  trim_entries(spec);
  return spec;
}

ReferenceSpectrum disk_spectrum(double radius, int count) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk reference: radius must be positive");
  ReferenceSpectrum spec;
  spec.count = count;
  spec.source = ReferenceSource::BesselDisk;
  spec.metric = Metric::Euclidean;
  spec.n = 2;
  spec.parameters = {{"shape", "disk"}, {"radius", radius}};
  // Zeros j_{m,k} <= X contribute (j_{m,k}/R)^2; the needed X is about
  // 2 sqrt(count) by the Weyl count, grown until the weighted total fits.
  double X = 2.0 * std::sqrt(static_cast<double>(count)) + 6.0;
  for (;;) {
    spec.entries.clear();
    int total = 0;
    for (int m = 0;; ++m) {
      if (bessel_zero(m, 1) > X) break;
      for (int k = 1;; ++k) {
        const double z = bessel_zero(m, k);
        if (z > X) break;
        const int mult = (m == 0) ? 1 : 2;
        spec.entries.push_back({(z / radius) * (z / radius), mult});
        total += mult;
      }
    }
    if (total >= count) break;
    X *= 1.4;
  }
  trim_entries(spec);
  return spec;
}

}  // namespace

ReferenceSpectrum reference_spectrum(const ReferenceShape& shape, int count) {
  if (count < 1) throw std::invalid_argument("reference_spectrum: count must be >= 1");
  if (std::holds_alternative<UnitSquareShape>(shape)) return square_spectrum(count);
  return disk_spectrum(std::get<DiskShape>(shape).radius, count);
}

namespace {

struct ShootResult {
  double u_end = 0.0;
  int interior_zeros = 0;
};

// Integrate u'' + (n-1)coth(t)u' + lambda u = 0 from the two-term series
// start at eps0 out to r with a Dormand-Prince 5(4) pair, counting sign
// changes of u along the way.
ShootResult shoot(double lambda, double r, int n, double eps0) {
  const double rtol = 1e-10, atol = 1e-12;
  // Oscillation wavelength is ~ 2pi/sqrt(lambda); cap the step so a single
  // step can never straddle two zeros.
  const double osc_cap = kPi / (4.0 * std::sqrt(lambda + 1.0));

  const auto rhs = [&](double t, double u, double v, double& du, double& dv) {
    const double coth = 1.0 / std::tanh(t);
    du = v;
    dv = -(n - 1) * coth * v - lambda * u;
  };

  double t = eps0;
  double u = 1.0 - lambda * eps0 * eps0 / (2.0 * n);
  double v = -lambda * eps0 / n;
  int zeros = 0;
  double h = eps0;

  while (t < r) {
    double cap = (t < 0.01) ? 0.5 * t : osc_cap;
    h = std::min({h, cap, r - t});

    // Dormand-Prince stages.
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, k5u, k5v, k6u, k6v, k7u, k7v;
    rhs(t, u, v, k1u, k1v);
    rhs(t + h / 5.0, u + h * (k1u / 5.0), v + h * (k1v / 5.0), k2u, k2v);
    rhs(t + 3.0 * h / 10.0, u + h * (3.0 / 40.0 * k1u + 9.0 / 40.0 * k2u),
        v + h * (3.0 / 40.0 * k1v + 9.0 / 40.0 * k2v), k3u, k3v);
    rhs(t + 4.0 * h / 5.0, u + h * (44.0 / 45.0 * k1u - 56.0 / 15.0 * k2u + 32.0 / 9.0 * k3u),
        v + h * (44.0 / 45.0 * k1v - 56.0 / 15.0 * k2v + 32.0 / 9.0 * k3v), k4u, k4v);
    rhs(t + 8.0 * h / 9.0,
        u + h * (19372.0 / 6561.0 * k1u - 25360.0 / 2187.0 * k2u + 64448.0 / 6561.0 * k3u -
                 212.0 / 729.0 * k4u),
        v + h * (19372.0 / 6561.0 * k1v - 25360.0 / 2187.0 * k2v + 64448.0 / 6561.0 * k3v -
                 212.0 / 729.0 * k4v),
        k5u, k5v);
    rhs(t + h,
        u + h * (9017.0 / 3168.0 * k1u - 355.0 / 33.0 * k2u + 46732.0 / 5247.0 * k3u +
                 49.0 / 176.0 * k4u - 5103.0 / 18656.0 * k5u),
        v + h * (9017.0 / 3168.0 * k1v - 355.0 / 33.0 * k2v + 46732.0 / 5247.0 * k3v +
                 49.0 / 176.0 * k4v - 5103.0 / 18656.0 * k5v),
        k6u, k6v);
    const double u5 = u + h * (35.0 / 384.0 * k1u + 500.0 / 1113.0 * k3u + 125.0 / 192.0 * k4u -
                               2187.0 / 6784.0 * k5u + 11.0 / 84.0 * k6u);
    const double v5 = v + h * (35.0 / 384.0 * k1v + 500.0 / 1113.0 * k3v + 125.0 / 192.0 * k4v -
                               2187.0 / 6784.0 * k5v + 11.0 / 84.0 * k6v);
    rhs(t + h, u5, v5, k7u, k7v);
    const double u4 = u + h * (5179.0 / 57600.0 * k1u + 7571.0 / 16695.0 * k3u +
                               393.0 / 640.0 * k4u - 92097.0 / 339200.0 * k5u +
                               187.0 / 2100.0 * k6u + k7u / 40.0);
    const double v4 = v + h * (5179.0 / 57600.0 * k1v + 7571.0 / 16695.0 * k3v +
                               393.0 / 640.0 * k4v - 92097.0 / 339200.0 * k5v +
                               187.0 / 2100.0 * k6v + k7v / 40.0);

    const double eu = u5 - u4;
    const double ev = v5 - v4;
    const double su = atol + rtol * std::max(std::abs(u), std::abs(u5));
    const double sv = atol + rtol * std::max(std::abs(v), std::abs(v5));
    const double err = std::sqrt(0.5 * ((eu / su) * (eu / su) + (ev / sv) * (ev / sv)));

    if (err <= 1.0) {
      if ((u < 0.0) != (u5 < 0.0)) ++zeros;
      t += h;
      u = u5;
      v = v5;
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    h *= factor;
  }
  return {u, zeros};
}

}  // namespace

std::vector<double> hyperbolic_ball_radial(double r, int n, int count, double series_start) {
  if (!(r > 0.0)) throw std::invalid_argument("hyperbolic_ball_radial: radius must be positive");
  if (n < 2) throw std::invalid_argument("hyperbolic_ball_radial: dimension must be >= 2");
  if (count < 1) throw std::invalid_argument("hyperbolic_ball_radial: count must be >= 1");
  if (!(series_start > 0.0) || !(series_start < 0.5 * r)) {
    throw std::invalid_argument("hyperbolic_ball_radial: series start must lie inside (0, r/2)");
  }

  const double eps0 = series_start;
  const double base = 0.25 * (n - 1) * (n - 1);
  const auto zeros_at = [&](double lambda) { return shoot(lambda, r, n, eps0).interior_zeros; };

  std::vector<double> out;
  out.reserve(count);
  for (int k = 1; k <= count; ++k) {
    // The interior-zero count equals the number of eigenvalues below
    // lambda, so "zeros >= k" brackets the k-th one robustly even when
    // several eigenvalues share a narrow window.
    double lo = base;
    double hi = base + 1.0;
    int c_lo = 0;  // no oscillation at or below (n-1)^2/4
    int c_hi = zeros_at(hi);
    int guard = 0;
    while (c_hi < k) {
      lo = hi;
      c_lo = c_hi;
      hi = base + 2.0 * (hi - base);
      c_hi = zeros_at(hi);
      if (++guard > 60) throw NumericalError("radial shooting: eigenvalue bracket ran away");
    }
    while (hi - lo > 0.5 || c_lo != k - 1 || c_hi != k) {
      const double mid = 0.5 * (lo + hi);
      const int c_mid = zeros_at(mid);
      if (c_mid >= k) {
        hi = mid;
        c_hi = c_mid;
      } else {
        lo = mid;
        c_lo = c_mid;
      }
      if (++guard > 400) throw NumericalError("radial shooting: zero-count bisection stalled");
    }
    // Counts are now adjacent: the k-th zero crosses t = r exactly at the
    // eigenvalue, so the endpoint sign splits the bracket cleanly.
    const bool lo_negative = shoot(lo, r, n, eps0).u_end < 0.0;
    while (hi - lo > 1e-13 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      if ((shoot(mid, r, n, eps0).u_end < 0.0) == lo_negative) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

ReferenceSpectrum radial_ball_reference(double r, int n, int count) {
  ReferenceSpectrum spec;
  spec.count = count;
  spec.source = ReferenceSource::RadialShooting;
  spec.metric = Metric::Hyperbolic;
  spec.n = n;
  spec.parameters = {{"shape", "geodesic_ball"}, {"radius", r}, {"dimension", n}};
  for (const double lambda : hyperbolic_ball_radial(r, n, count)) {
    spec.entries.push_back({lambda, 1});
  }
  return spec;
}

std::vector<double> euclidean_box_spectrum(double width, double height, int count) {
  if (!(width > 0.0) || !(height > 0.0)) {
    throw std::invalid_argument("euclidean_box_spectrum: extents must be positive");
  }
  if (count < 1) throw std::invalid_argument("euclidean_box_spectrum: count must be >= 1");
  double bound = kPi * kPi * (1.0 / (width * width) + 1.0 / (height * height)) *
                 (static_cast<double>(count) + 4.0);
  std::vector<double> values;
  for (;;) {
    values.clear();
    const int pmax = static_cast<int>(std::floor(width * std::sqrt(bound) / kPi));
    for (int p = 1; p <= pmax; ++p) {
      const double px = kPi * kPi * p * p / (width * width);
      const int qmax = static_cast<int>(std::floor(height * std::sqrt(std::max(bound - px, 0.0)) / kPi));
      for (int q = 1; q <= qmax; ++q) {
        values.push_back(px + kPi * kPi * q * q / (height * height));
      }
    }
    if (static_cast<int>(values.size()) >= count) break;
    bound *= 2.0;
  }
  std::sort(values.begin(), values.end());
  values.resize(count);
  return values;
}

double weyl_prediction(int k, int n, double vol) {
  if (k < 1) throw std::invalid_argument("weyl_prediction: k must be >= 1");
  if (n < 1) throw std::invalid_argument("weyl_prediction: dimension must be >= 1");
  if (!(vol > 0.0)) throw std::invalid_argument("weyl_prediction: volume must be positive");
  const double omega = unit_ball_volume(n);
  return 4.0 * kPi * kPi / std::pow(omega * vol, 2.0 / n) * std::pow(k, 2.0 / n);
}

}  // namespace hyperspec
