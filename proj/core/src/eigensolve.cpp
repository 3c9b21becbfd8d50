#include "hyperspec/eigensolve.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hyperspec/errors.hpp"

namespace hyperspec {

namespace {

constexpr unsigned kLanczosSeed = 0x5eed2024;

void sign_normalize(Eigen::VectorXd& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12 * scale) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

Spectrum dense_solve(const AssembledForms& forms, int k) {
  const Eigen::MatrixXd kd(forms.stiffness);
  const Eigen::MatrixXd md(forms.mass);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kd, md);
  if (es.info() != Eigen::Success)
    throw NumericalError("dense eigensolver failed (mass matrix not SPD?)");

  Spectrum s;
  s.metric = forms.metric;
  s.n = forms.n;
  s.dof_map = forms.dof_map;
  s.eigenvalues.reserve(static_cast<size_t>(k));
  s.eigenvectors.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    s.eigenvalues.push_back(es.eigenvalues()[i]);
    Eigen::VectorXd v = es.eigenvectors().col(i);
    sign_normalize(v);
    s.eigenvectors.push_back(std::move(v));
  }
  return s;
}

// Number of eigenvalues of (K, M) strictly below sigma, by Sylvester's law
// applied to an LDL^T factorization of K - sigma*M. sigma is nudged if a
// pivot lands too close to zero.
int inertia_below(const Eigen::SparseMatrix<double>& k,
                  const Eigen::SparseMatrix<double>& m, double sigma) {
  double s = sigma;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::SparseMatrix<double> shifted = k - s * m;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
    if (ldlt.info() == Eigen::Success) {
      const Eigen::VectorXd d = ldlt.vectorD();
      const double tiny = 1e-12 * d.cwiseAbs().maxCoeff();
      bool clean = true;
      int neg = 0;
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (std::abs(d[i]) <= tiny) {
          clean = false;
          break;
        }
        if (d[i] < 0.0) ++neg;
      }
      if (clean) return neg;
    }
    s *= 1.0 + 1e-6;
  }
  throw NumericalError("inertia count failed: factorization breakdown near the shift");
}

struct LanczosResult {
  std::vector<double> values;             // ascending lambda
  std::vector<Eigen::VectorXd> vectors;   // M-orthonormal
};

// One round of block inverse iteration with a Rayleigh-Ritz projection:
// Z = K^-1 M V, M-orthonormalized, then the pencil restricted to span(Z) is
// solved densely. Residuals of decent Ritz pairs drop quadratically per call.
void refine_block(const Eigen::SparseMatrix<double>& kmat,
                  const Eigen::SparseMatrix<double>& mmat,
                  const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>& kfac,
                  std::vector<double>& vals, std::vector<Eigen::VectorXd>& vecs) {
  const int kk = static_cast<int>(vecs.size());
  const int n = static_cast<int>(kmat.rows());
  Eigen::MatrixXd z(n, kk), mz(n, kk);
  for (int i = 0; i < kk; ++i) z.col(i) = kfac.solve(mmat * vecs[static_cast<size_t>(i)]);
  for (int i = 0; i < kk; ++i) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int l = 0; l < i; ++l)
        z.col(i) -= (mz.col(l).dot(z.col(i))) * z.col(l);
    }
    Eigen::VectorXd mcol = mmat * z.col(i);
    const double nrm = std::sqrt(z.col(i).dot(mcol));
    if (!(nrm > 0.0)) throw NumericalError("refinement block became singular");
    z.col(i) /= nrm;
    mz.col(i) = mcol / nrm;
  }
  Eigen::MatrixXd small(kk, kk);
  for (int i = 0; i < kk; ++i) {
    const Eigen::VectorXd kz = kmat * z.col(i);
    for (int l = 0; l < kk; ++l) small(l, i) = z.col(l).dot(kz);
  }
  small = 0.5 * (small + small.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);
  if (es.info() != Eigen::Success) throw NumericalError("block refinement eigensolve failed");
  const Eigen::MatrixXd v = z * es.eigenvectors();
  for (int i = 0; i < kk; ++i) {
    vals[static_cast<size_t>(i)] = es.eigenvalues()[i];
    vecs[static_cast<size_t>(i)] = v.col(i);
  }
}

// Shift-invert Lanczos at shift 0 on A = K^-1 M, which is self-adjoint in the
// M-inner product; its largest eigenvalues are the reciprocals of the wanted
// smallest lambda. Full reorthogonalization keeps the basis M-orthonormal, so
// repeated eigenvalues emerge through reorthogonalization noise; the caller
// verifies completeness via inertia_below and triggers deflated restarts.
LanczosResult lanczos_run(const Eigen::SparseMatrix<double>& kmat,
                          const Eigen::SparseMatrix<double>& mmat,
                          const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>& kfac,
                          const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>& mfac,
                          int want, const std::vector<Eigen::VectorXd>& deflate,
                          std::mt19937& rng) {
  const int n = static_cast<int>(kmat.rows());
  std::normal_distribution<double> gauss(0.0, 1.0);

  int mmax = std::min(n, std::max(2 * want + 40, 80));
  Eigen::MatrixXd q(n, mmax + 1), mq(n, mmax + 1);
  std::vector<double> alpha, beta;

  auto reorth = [&](Eigen::VectorXd& w, int cols) {
    for (int pass = 0; pass < 2; ++pass) {
      if (cols > 0) {
        const Eigen::VectorXd c = mq.leftCols(cols).transpose() * w;
        w.noalias() -= q.leftCols(cols) * c;
      }
      for (const auto& d : deflate) w -= (w.dot(mmat * d)) * d;
    }
  };

  auto fresh_start = [&](int cols) {
    Eigen::VectorXd w(n);
    for (int attempt = 0; attempt < 20; ++attempt) {
      for (int i = 0; i < n; ++i) w[i] = gauss(rng);
      reorth(w, cols);
      const Eigen::VectorXd mw = mmat * w;
      const double nrm = std::sqrt(w.dot(mw));
      if (nrm > 1e-8) {
        q.col(cols) = w / nrm;
        mq.col(cols) = mw / nrm;
        return true;
      }
    }
    return false;
  };

  if (!fresh_start(0)) throw NumericalError("Lanczos could not build a start vector");

  LanczosResult out;
  int j = 0;
  double alpha_scale = 0.0;
  bool stalled = false;
  while (true) {
    // One Lanczos step from column j.
    Eigen::VectorXd w = kfac.solve(mq.col(j));
    const double a = w.dot(mq.col(j));
    alpha.push_back(a);
    alpha_scale = std::max(alpha_scale, std::abs(a));
    w -= a * q.col(j);
    if (j > 0 && beta.back() != 0.0) w -= beta.back() * q.col(j - 1);
    reorth(w, j + 1);
    const Eigen::VectorXd mw = mmat * w;
    const double b = std::sqrt(std::max(0.0, w.dot(mw)));

    const bool breakdown = b <= 1e-12 * alpha_scale;
    if (!breakdown) {
      q.col(j + 1) = w / b;
      mq.col(j + 1) = mw / b;
      beta.push_back(b);
    } else {
      // Invariant subspace exhausted; restart the recurrence orthogonally.
      beta.push_back(0.0);
      stalled = !fresh_start(j + 1);
    }
    ++j;

    const bool room = j < mmax && j < n && !stalled;
    const bool check_now = j >= std::min(n, want + 2) && (j % 10 == 0 || !room || breakdown);
    if (check_now) {
      Eigen::VectorXd diag(j), sub(j - 1);
      for (int i = 0; i < j; ++i) diag[i] = alpha[static_cast<size_t>(i)];
      for (int i = 0; i + 1 < j; ++i) sub[i] = beta[static_cast<size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub);
      if (tri.info() != Eigen::Success)
        throw NumericalError("tridiagonal eigensolve failed inside Lanczos");

      // Candidates: the `want` largest mu (smallest lambda), mu > 0.
      struct Cand {
        double mu;
        int idx;
      };
      std::vector<Cand> cands;
      for (int i = j - 1; i >= 0 && static_cast<int>(cands.size()) < want; --i) {
        if (tri.eigenvalues()[i] > 0.0) cands.push_back({tri.eigenvalues()[i], i});
      }

      bool maybe_done = static_cast<int>(cands.size()) == want;
      if (maybe_done) {
        const double blast = beta.back();
        for (const auto& c : cands) {
          const double est = std::abs(blast * tri.eigenvectors()(j - 1, c.idx));
          if (est > 1e-11 * c.mu) {
            maybe_done = false;
            break;
          }
        }
      }

      if (maybe_done) {
        // Ritz vectors in ascending lambda order (cands hold descending mu).
        LanczosResult trial;
        for (const auto& c : cands) {
          const double lambda = 1.0 / c.mu;
          Eigen::VectorXd v = q.leftCols(j) * tri.eigenvectors().col(c.idx);
          const double vnorm = std::sqrt(v.dot(mmat * v));
          trial.values.push_back(lambda);
          trial.vectors.push_back(v / vnorm);
        }
        // Confirm against the true residual in the M^-1 norm; a couple of
        // block refinement rounds recover any precision the tridiagonal
        // estimate was missing.
        for (int round = 0; round < 3; ++round) {
          double worst = 0.0;
          for (size_t i = 0; i < trial.values.size(); ++i) {
            const auto& v = trial.vectors[i];
            const Eigen::VectorXd r =
                kmat * v - trial.values[i] * (mmat * v);
            const double rnorm = std::sqrt(r.dot(mfac.solve(r)));
            worst = std::max(worst, rnorm / std::abs(trial.values[i]));
          }
          if (worst <= kResidualRelTol) {
            out = std::move(trial);
            return out;
          }
          if (round < 2) refine_block(kmat, mmat, kfac, trial.values, trial.vectors);
        }
      }

      if (!room) {
        if (stalled || j >= n)
          throw NumericalError("Lanczos ran out of directions before converging");
        if (mmax >= std::min(n, 4000))
          throw NumericalError("Lanczos did not converge within the subspace limit");
        mmax = std::min(n, 2 * mmax);
        q.conservativeResize(Eigen::NoChange, mmax + 1);
        mq.conservativeResize(Eigen::NoChange, mmax + 1);
      }
    }
    if (stalled && j < std::min(n, want + 2))
      throw NumericalError("Lanczos stalled before reaching the requested count");
  }
}

Spectrum lanczos_solve(const AssembledForms& forms, int k) {
  const auto& kmat = forms.stiffness;
  const auto& mmat = forms.mass;
  const int n = static_cast<int>(kmat.rows());

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> kfac(kmat);
  if (kfac.info() != Eigen::Success)
    throw NumericalError("stiffness factorization failed (not SPD after elimination?)");
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> mfac(mmat);
  if (mfac.info() != Eigen::Success)
    throw NumericalError("mass factorization failed (not SPD?)");

  std::mt19937 rng(kLanczosSeed);

  // Ask for a few extras so the inertia check sees the gap after lambda_k.
  const int extras = std::min(n - k, 6);
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;

  for (int attempt = 0; attempt < 4; ++attempt) {
    const int want = k + extras - static_cast<int>(values.size());
    if (want > 0) {
      LanczosResult r = lanczos_run(kmat, mmat, kfac, mfac, want, vectors, rng);
      for (size_t i = 0; i < r.values.size(); ++i) {
        values.push_back(r.values[i]);
        vectors.push_back(std::move(r.vectors[i]));
      }
      // Keep ascending order; vectors follow their values.
      std::vector<int> order(values.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return values[a] < values[b]; });
      std::vector<double> sv(values.size());
      std::vector<Eigen::VectorXd> svec(values.size());
      for (size_t i = 0; i < order.size(); ++i) {
        sv[i] = values[static_cast<size_t>(order[i])];
        svec[i] = std::move(vectors[static_cast<size_t>(order[i])]);
      }
      values = std::move(sv);
      vectors = std::move(svec);
    }

    // Completeness: no eigenvalue below our k-th may be missing.
    const double sigma = values[static_cast<size_t>(k - 1)] * (1.0 + 1e-7);
    int have = 0;
    while (have < static_cast<int>(values.size()) &&
           values[static_cast<size_t>(have)] < sigma)
      ++have;
    const int truth = inertia_below(kmat, mmat, sigma);
    if (truth <= have) break;
    if (attempt == 3)
      throw NumericalError("Lanczos kept missing eigenvalue copies below the target");
  }

  Spectrum s;
  s.metric = forms.metric;
  s.n = forms.n;
  s.dof_map = forms.dof_map;
  for (int i = 0; i < k; ++i) {
    s.eigenvalues.push_back(values[static_cast<size_t>(i)]);
    Eigen::VectorXd v = std::move(vectors[static_cast<size_t>(i)]);
    sign_normalize(v);
    s.eigenvectors.push_back(std::move(v));
  }
  return s;
}

}  // namespace

std::vector<std::vector<int>> Spectrum::clusters() const {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < count(); ++i) {
    const double prev = i > 0 ? eigenvalues[static_cast<size_t>(i - 1)] : 0.0;
    const double cur = eigenvalues[static_cast<size_t>(i)];
    const double scale = std::max({std::abs(prev), std::abs(cur), 1e-300});
    if (i > 0 && std::abs(cur - prev) <= kClusterRelGap * scale) {
      out.back().push_back(i);
    } else {
      out.push_back({i});
    }
  }
  return out;
}

nlohmann::ordered_json Spectrum::to_json(bool include_vectors) const {
  nlohmann::ordered_json j;
  j["eigenvalues"] = eigenvalues;
  j["n"] = n;
  j["metric"] = metric_name(metric);
  j["dof"] = dof();
  j["h"] = h;
  j["clusters"] = clusters();
  if (include_vectors) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& v : eigenvectors)
      arr.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    j["eigenvectors"] = arr;
  }
  return j;
}

Spectrum Spectrum::from_json(const nlohmann::json& j) {
  Spectrum s;
  s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  s.n = j.at("n").get<int>();
  s.metric = metric_from_name(j.at("metric").get<std::string>());
  s.h = j.value("h", 0.0);
  const int dof = j.value("dof", 0);
  s.dof_map.resize(static_cast<size_t>(dof));
  for (int i = 0; i < dof; ++i) s.dof_map[static_cast<size_t>(i)] = i;
  for (size_t i = 1; i < s.eigenvalues.size(); ++i)
    if (s.eigenvalues[i] < s.eigenvalues[i - 1])
      throw std::invalid_argument("spectrum JSON: eigenvalues not ascending");
  return s;
}

Spectrum solve_lowest(const AssembledForms& forms, int k, SolveStrategy strategy) {
  const int n = forms.dof_count();
  if (k < 1) throw std::invalid_argument("solve_lowest: k must be >= 1");
  if (k > n) throw std::invalid_argument("solve_lowest: k exceeds the dof count");

  SolveStrategy s = strategy;
  if (s == SolveStrategy::Auto)
    s = n <= kDenseDofLimit ? SolveStrategy::Dense : SolveStrategy::ShiftInvertLanczos;

  Spectrum out = s == SolveStrategy::Dense ? dense_solve(forms, k) : lanczos_solve(forms, k);
  for (size_t i = 1; i < out.eigenvalues.size(); ++i) {
    if (out.eigenvalues[i] < out.eigenvalues[i - 1])
      throw NumericalError("eigensolver returned a non-ascending spectrum");
  }
  return out;
}

Spectrum solve_lowest(const AssembledForms& forms, int k,
                      std::shared_ptr<const Mesh> mesh, SolveStrategy strategy) {
  Spectrum s = solve_lowest(forms, k, strategy);
  if (mesh) {
    s.h = mesh->h;
    s.mesh = std::move(mesh);
  }
  return s;
}

double max_relative_residual(const AssembledForms& forms, const Spectrum& s) {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> mfac(forms.mass);
  if (mfac.info() != Eigen::Success)
    throw NumericalError("mass factorization failed in residual check");
  double worst = 0.0;
  for (int i = 0; i < s.count(); ++i) {
    const auto& v = s.eigenvectors[static_cast<size_t>(i)];
    const double lambda = s.eigenvalues[static_cast<size_t>(i)];
    const Eigen::VectorXd r = forms.stiffness * v - lambda * (forms.mass * v);
    const double rnorm = std::sqrt(r.dot(mfac.solve(r)));
    worst = std::max(worst, rnorm / std::max(std::abs(lambda), 1e-300));
  }
  return worst;
}

double angular_variance(const AssembledForms& forms, const Mesh& m,
                        const Eigen::VectorXd& v, const Eigen::Vector2d& center,
                        double radius) {
  const int dof = forms.dof_count();
  if (v.size() != dof) throw std::invalid_argument("angular_variance: size mismatch");
  if (!(radius > 0.0)) throw std::invalid_argument("angular_variance: radius must be positive");

  // Radial coordinate of a vertex.  Euclidean metric: distance to `center`.
  // Hyperbolic metric: geodesic circles about the ball's hyperbolic center
  // are Euclidean circles whose centers drift upward, so distance to any
  // fixed point cannot see their symmetry; instead recover the anchor height
  // a = sqrt(H^2 - R^2) of the embedded circle (center height H, radius R)
  // and bin by the geodesic distance acosh(1 + d^2/(2 a x_2)) to (x_1c, a).
  const bool hyper = forms.metric == Metric::Hyperbolic;
  double anchor = 0.0;
  double span = radius;
  if (hyper) {
    if (!(center.y() > radius))
      throw std::invalid_argument(
          "angular_variance: a hyperbolic ball needs center height above its radius");
    anchor = std::sqrt(center.y() * center.y() - radius * radius);
    span = std::atanh(radius / center.y());  // geodesic radius of the circle
  }
  auto radial = [&](const Eigen::Vector2d& x) {
    if (!hyper) return (x - center).norm();
    const double dx = x.x() - center.x();
    const double dy = x.y() - anchor;
    return std::acosh(1.0 + (dx * dx + dy * dy) / (2.0 * anchor * x.y()));
  };

  const Eigen::VectorXd w = forms.mass * Eigen::VectorXd::Ones(dof);
  const int segments = std::max(2, static_cast<int>(std::ceil(radius / std::max(m.h, 1e-12))));
  const int knots = segments + 1;
  const double dr = span / segments;

  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(knots, knots);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(knots);
  double total = 0.0;
  for (int i = 0; i < dof; ++i) {
    const double r =
        radial(m.vertices[static_cast<size_t>(forms.dof_map[static_cast<size_t>(i)])]);
    const double t = std::min(r / dr, static_cast<double>(segments) - 1e-12);
    const int j0 = static_cast<int>(t);
    const double th = t - j0;
    const double wi = w[i];
    const double h0 = 1.0 - th, h1 = th;
    normal(j0, j0) += wi * h0 * h0;
    normal(j0, j0 + 1) += wi * h0 * h1;
    normal(j0 + 1, j0) += wi * h0 * h1;
    normal(j0 + 1, j0 + 1) += wi * h1 * h1;
    rhs[j0] += wi * h0 * v[i];
    rhs[j0 + 1] += wi * h1 * v[i];
    total += wi * v[i] * v[i];
  }
  if (total <= 0.0) return 0.0;
  const double ridge = 1e-12 * std::max(normal.diagonal().maxCoeff(), 1e-300);
  normal.diagonal().array() += ridge;
  const Eigen::VectorXd coef = normal.ldlt().solve(rhs);

  double resid = 0.0;
  for (int i = 0; i < dof; ++i) {
    const double r =
        radial(m.vertices[static_cast<size_t>(forms.dof_map[static_cast<size_t>(i)])]);
    const double t = std::min(r / dr, static_cast<double>(segments) - 1e-12);
    const int j0 = static_cast<int>(t);
    const double th = t - j0;
    const double fit = (1.0 - th) * coef[j0] + th * coef[j0 + 1];
    resid += w[i] * (v[i] - fit) * (v[i] - fit);
  }
  return resid / total;
}

}  // namespace hyperspec
