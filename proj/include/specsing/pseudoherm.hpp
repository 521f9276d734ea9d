#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specsing/core.hpp"

namespace specsing {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// H is not diagonalizable within the conditioning threshold (an exceptional point).
class DefectiveMatrixError : public std::runtime_error {
 public:
  DefectiveMatrixError(const std::string& what, double condition)
      : std::runtime_error(what), condition(condition) {}
  double condition;
};

/// A metric was requested for a matrix whose spectrum is not real.
class ComplexSpectrumError : public std::runtime_error {
 public:
  ComplexSpectrumError(const std::string& what, cplx eigenvalue)
      : std::runtime_error(what), eigenvalue(eigenvalue) {}
  cplx eigenvalue;
};

/// Largest singular value.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

inline double condition_number(const Matrix& m) {
  const Eigen::VectorXd s = Eigen::JacobiSVD<Matrix>(m).singularValues();
  const double smallest = s(s.size() - 1);
  return smallest == 0.0 ? std::numeric_limits<double>::infinity() : s(0) / smallest;
}

/// Right eigenvectors psi_n (columns of `right`) and the dual vectors phi_n (columns of
/// `left`, eigenvectors of H^dagger with eigenvalues E_n^*), normalized so that
/// <phi_m|psi_n> = delta_mn and sum_n |psi_n><phi_n| = 1.
struct BiorthSystem {
  Vector eigenvalues;
  Matrix right;
  Matrix left;

  Eigen::Index dimension() const { return eigenvalues.size(); }

  /// max(||Phi^dagger Psi - 1||, ||Psi Phi^dagger - 1||) in operator norm.
  double residual() const {
    const auto n = dimension();
    const Matrix id = Matrix::Identity(n, n);
    return std::max(operator_norm(left.adjoint() * right - id), operator_norm(right * left.adjoint() - id));
  }
};

struct BiorthOptions {
  /// Eigenvector matrices conditioned worse than this count as defective.
  double defect_condition = 1e10;
};

namespace detail {

inline void require_square(const Matrix& h, const char* who) {
  require(h.rows() == h.cols() && h.rows() > 0, std::string(who) + ": matrix must be square and non-empty");
  require(h.allFinite(), std::string(who) + ": matrix has non-finite entries");
}

inline BiorthSystem dual_of(Vector eigenvalues, Matrix right, double defect_condition) {
  const double cond = condition_number(right);
  if (!(cond <= defect_condition))
    throw DefectiveMatrixError("matrix is defective (eigenvector condition number " +
                                   std::to_string(cond) + ")",
                               cond);
  Matrix left = right.inverse().adjoint();
  return {std::move(eigenvalues), std::move(right), std::move(left)};
}

}  // namespace detail

/// Biorthonormal eigensystem with unit-norm right eigenvectors, ordered by (Re E, Im E).
inline BiorthSystem biorth(const Matrix& h, BiorthOptions opt = {}) {
  detail::require_square(h, "biorth");
  Eigen::ComplexEigenSolver<Matrix> solver(h);
  require(solver.info() == Eigen::Success, "biorth: eigen-decomposition failed");
  const Eigen::Index n = h.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  const Vector& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });
  Vector values(n);
  Matrix right(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    values(i) = ev(src);
    right.col(i) = solver.eigenvectors().col(src).normalized();
  }
  return detail::dual_of(std::move(values), std::move(right), opt.defect_condition);
}

/// Biorthonormal system built on caller-chosen right eigenvectors (columns of `right`).
/// Each column must satisfy H psi = E psi for E = <psi|H psi>/<psi|psi> within tol.
inline BiorthSystem biorth_with_right(const Matrix& h, const Matrix& right, double tol = 1e-10,
                                      BiorthOptions opt = {}) {
  detail::require_square(h, "biorth_with_right");
  require(right.rows() == h.rows() && right.cols() == h.cols(), "biorth_with_right: shape mismatch");
  const Eigen::Index n = h.rows();
  Vector values(n);
  const double scale = std::max(1.0, operator_norm(h));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector v = right.col(i);
    const cplx e = v.dot(h * v) / v.squaredNorm();
    require((h * v - e * v).norm() <= tol * scale * v.norm(),
            "biorth_with_right: column " + std::to_string(i) + " is not an eigenvector");
    values(i) = e;
  }
  return detail::dual_of(std::move(values), right, opt.defect_condition);
}

/// psi_n -> N_n psi_n, phi_n -> phi_n / N_n^*; preserves biorthonormality.
inline BiorthSystem rescale(const BiorthSystem& sys, std::span<const cplx> factors) {
  require(static_cast<Eigen::Index>(factors.size()) == sys.dimension(), "rescale: one factor per eigenvector");
  BiorthSystem out = sys;
  for (Eigen::Index i = 0; i < sys.dimension(); ++i) {
    const cplx f = factors[static_cast<std::size_t>(i)];
    require(f != cplx{}, "rescale: factors must be nonzero");
    out.right.col(i) *= f;
    out.left.col(i) /= std::conj(f);
  }
  return out;
}

/// Positive metric eta_+ = sum_n |phi_n><phi_n| with its positive square root rho.
struct MetricOperator {
  Matrix eta;
  Matrix rho;
  Matrix rho_inverse;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;

  double condition() const { return max_eigenvalue / min_eigenvalue; }
};

inline MetricOperator metric(const BiorthSystem& sys, double tol = 1e-9) {
  for (Eigen::Index i = 0; i < sys.dimension(); ++i) {
    const cplx e = sys.eigenvalues(i);
    if (std::abs(e.imag()) > tol * std::max(1.0, std::abs(e)))
      throw ComplexSpectrumError("metric: eigenvalue with non-zero imaginary part; no positive metric "
                                 "intertwines H and its adjoint",
                                 e);
  }
  MetricOperator mo;
  const Matrix raw = sys.left * sys.left.adjoint();
  mo.eta = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(mo.eta);
  const Eigen::VectorXd w = es.eigenvalues();
  mo.min_eigenvalue = w(0);
  mo.max_eigenvalue = w(w.size() - 1);
  if (!(mo.min_eigenvalue > 0.0))
    throw ComplexSpectrumError("metric: eta_+ is not positive definite", cplx{mo.min_eigenvalue, 0.0});
  const Matrix& U = es.eigenvectors();
  mo.rho = U * w.cwiseSqrt().cast<cplx>().asDiagonal() * U.adjoint();
  mo.rho_inverse = U * w.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * U.adjoint();
  return mo;
}

/// ||H^dagger eta_+ - eta_+ H|| (operator norm).
inline double intertwine_residual(const Matrix& h, const MetricOperator& mo) {
  require(h.rows() == mo.eta.rows() && h.cols() == mo.eta.cols(), "intertwine_residual: shape mismatch");
  return operator_norm(h.adjoint() * mo.eta - mo.eta * h);
}

struct Hermitized {
  Matrix h;
  double rho_condition = 0.0;
  /// rho is conditioned worse than the threshold; h may carry amplified round-off.
  bool ill_conditioned = false;
  /// ||h - h^dagger||
  double hermiticity_defect = 0.0;
};

/// h = rho H rho^{-1}, Hermitian in the standard inner product.
inline Hermitized hermitize(const Matrix& h, const MetricOperator& mo, double condition_threshold = 1e6) {
  require(h.rows() == mo.rho.rows() && h.cols() == mo.rho.cols(), "hermitize: shape mismatch");
  Hermitized out;
  out.h = mo.rho * h * mo.rho_inverse;
  out.rho_condition = std::sqrt(mo.condition());
  out.ill_conditioned = !(out.rho_condition <= condition_threshold);
  out.hermiticity_defect = operator_norm(out.h - out.h.adjoint());
  return out;
}

// ---------------------------------------------------------------------------------------
// Exceptional points

struct EigenCluster {
  cplx eigenvalue;
  int algebraic = 1;
  int geometric = 1;

  bool defective() const { return geometric < algebraic; }
};

struct ExceptionalPointOptions {
  /// Singular values below rank_tol * max(1, ||H||) count as zero.
  double rank_tol = 1e-8;
  /// Eigenvalues within cluster_tol * max(1, ||H||) form one cluster.
  double cluster_tol = 1e-6;
  /// Each grid cell is resampled this many times to separate nearby events.
  int subdivisions = 8;
  /// Golden-section bracket width at which refinement stops, relative to the cell.
  double refine_tol = 1e-12;
};

/// Eigenvalue clusters of H with algebraic (cluster size) and geometric (null-space
/// dimension of H - E) multiplicities.
inline std::vector<EigenCluster> eigen_clusters(const Matrix& h, const ExceptionalPointOptions& opt = {}) {
  detail::require_square(h, "eigen_clusters");
  const double scale = std::max(1.0, operator_norm(h));
  Eigen::ComplexEigenSolver<Matrix> solver(h, false);
  std::vector<cplx> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + h.rows());
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<bool> used(ev.size(), false);
  std::vector<EigenCluster> clusters;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    cplx sum = ev[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < ev.size(); ++j)
      if (!used[j] && std::abs(ev[j] - ev[i]) <= opt.cluster_tol * scale) {
        used[j] = true;
        sum += ev[j];
        ++count;
      }
    const cplx mean = sum / static_cast<double>(count);
    const Matrix shifted = h - mean * Matrix::Identity(h.rows(), h.cols());
    const Eigen::VectorXd s = Eigen::JacobiSVD<Matrix>(shifted).singularValues();
    int nullity = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
      if (s(k) <= opt.rank_tol * scale) ++nullity;
    clusters.push_back({mean, count, std::max(1, nullity)});
  }
  return clusters;
}

struct ExceptionalPoint {
  double t = 0.0;
  cplx eigenvalue;
  int algebraic = 2;
  int geometric = 1;
};

/// Eigenvalue coalescence where H stays diagonalizable (e.g. a Hermitian level crossing).
struct Degeneracy {
  double t = 0.0;
  cplx eigenvalue;
  int multiplicity = 2;
};

struct ExceptionalScan {
  std::vector<ExceptionalPoint> exceptional;
  std::vector<Degeneracy> degeneracies;
};

namespace detail {

/// 1/cond of the unit-column eigenvector matrix: tends to zero at an exceptional point.
inline double eigenbasis_quality(const Matrix& h) {
  Eigen::ComplexEigenSolver<Matrix> solver(h);
  Matrix v = solver.eigenvectors();
  for (Eigen::Index i = 0; i < v.cols(); ++i) v.col(i).normalize();
  const Eigen::VectorXd s = Eigen::JacobiSVD<Matrix>(v).singularValues();
  return s(s.size() - 1) / s(0);
}

/// Smallest pairwise eigenvalue distance relative to max(1, ||H||).
inline double eigen_gap(const Matrix& h) {
  if (h.rows() < 2) return 1.0;
  Eigen::ComplexEigenSolver<Matrix> solver(h, false);
  const Vector& ev = solver.eigenvalues();
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    for (Eigen::Index j = i + 1; j < ev.size(); ++j) gap = std::min(gap, std::abs(ev(i) - ev(j)));
  return gap / std::max(1.0, operator_norm(h));
}

inline double golden_minimize(const std::function<double(double)>& f, double a, double b, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Parameter values along t_grid where some eigenvalue's geometric multiplicity drops below
/// its algebraic multiplicity. Candidates are local minima of the eigenbasis quality and of
/// the eigenvalue gap on a subdivided grid, refined by golden-section search and classified
/// by their multiplicities. Diagonalizable coalescences are reported as degeneracies.
inline ExceptionalScan exceptional_scan(const std::function<Matrix(double)>& family,
                                        std::span<const double> t_grid,
                                        const ExceptionalPointOptions& opt = {}) {
  require(t_grid.size() >= 2, "exceptional_scan: need at least two parameter values");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    require(t_grid[i] > t_grid[i - 1], "exceptional_scan: grid must be strictly increasing");
  require(opt.subdivisions >= 1, "exceptional_scan: subdivisions must be positive");

  std::vector<double> ts;
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    for (int s = 0; s < opt.subdivisions; ++s)
      ts.push_back(t_grid[i] + (t_grid[i + 1] - t_grid[i]) * s / static_cast<double>(opt.subdivisions));
  ts.push_back(t_grid.back());

  const std::function<double(double)> quality = [&](double t) { return detail::eigenbasis_quality(family(t)); };
  const std::function<double(double)> gap = [&](double t) { return detail::eigen_gap(family(t)); };

  ExceptionalScan out;
  const double span = t_grid.back() - t_grid.front();
  const double merge = 1e-9 * std::max(1.0, span);
  auto record = [&](double t) {
    for (const auto& e : out.exceptional)
      if (std::abs(e.t - t) < merge) return;
    for (const auto& d : out.degeneracies)
      if (std::abs(d.t - t) < merge) return;
    for (const EigenCluster& c : eigen_clusters(family(t), opt)) {
      if (c.defective()) {
        out.exceptional.push_back({t, c.eigenvalue, c.algebraic, c.geometric});
        return;
      }
    }
    for (const EigenCluster& c : eigen_clusters(family(t), opt))
      if (c.algebraic > 1) {
        out.degeneracies.push_back({t, c.eigenvalue, c.algebraic});
        return;
      }
  };

  for (const auto* stat : {&quality, &gap}) {
    std::vector<double> v(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) v[i] = (*stat)(ts[i]);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double left = i > 0 ? v[i - 1] : std::numeric_limits<double>::infinity();
      const double right = i + 1 < ts.size() ? v[i + 1] : std::numeric_limits<double>::infinity();
      const double eps = 1e-9 * std::max(1.0, std::abs(v[i]));
      // strict on at least one side so flat stretches (Hermitian families) are ignored
      if (!(v[i] <= left && v[i] <= right && (v[i] < left - eps || v[i] < right - eps))) continue;
      const double a = i > 0 ? ts[i - 1] : ts[i];
      const double b = i + 1 < ts.size() ? ts[i + 1] : ts[i];
      const double t = detail::golden_minimize(*stat, a, b, opt.refine_tol * std::max(1.0, b - a));
      record(t);
    }
  }
  std::sort(out.exceptional.begin(), out.exceptional.end(),
            [](const auto& x, const auto& y) { return x.t < y.t; });
  std::sort(out.degeneracies.begin(), out.degeneracies.end(),
            [](const auto& x, const auto& y) { return x.t < y.t; });
  return out;
}

// ---------------------------------------------------------------------------------------
// Antilinear symmetry X = U o (complex conjugation)

enum class AntilinearVerdict { NotSymmetric, SymmetricBroken, Exact };

inline std::string_view to_string(AntilinearVerdict v) {
  switch (v) {
    case AntilinearVerdict::NotSymmetric: return "not-symmetric";
    case AntilinearVerdict::SymmetricBroken: return "symmetric-not-exact";
    case AntilinearVerdict::Exact: return "exact";
  }
  return "unknown";
}

struct AntilinearCheck {
  AntilinearVerdict verdict = AntilinearVerdict::NotSymmetric;
  /// ||H U - U H^*||, the commutator [H, X] in operator norm.
  double commutator = 0.0;
  Vector eigenvalues;
  /// Eigenvectors satisfying X psi = psi (only filled for an exact symmetry).
  Matrix aligned;
};

inline AntilinearCheck antilinear_check(const Matrix& h, const Matrix& u, double tol = 1e-9) {
  detail::require_square(h, "antilinear_check");
  require(u.rows() == h.rows() && u.cols() == h.cols(), "antilinear_check: shape mismatch");
  const Eigen::Index n = h.rows();
  require(operator_norm(u * u.conjugate() - Matrix::Identity(n, n)) <= tol,
          "antilinear_check: X^2 != 1 (U U^* must be the identity)");
  require(operator_norm(u.adjoint() * u - Matrix::Identity(n, n)) <= tol, "antilinear_check: U must be unitary");

  AntilinearCheck out;
  const double scale = std::max(1.0, operator_norm(h));
  out.commutator = operator_norm(h * u - u * h.conjugate());
  Eigen::ComplexEigenSolver<Matrix> solver(h);
  out.eigenvalues = solver.eigenvalues();
  if (out.commutator > tol * scale) return out;

  auto X = [&](const Vector& v) -> Vector { return u * v.conjugate(); };
  ExceptionalPointOptions copt;
  const Vector& ev = out.eigenvalues;
  Matrix aligned(n, n);
  Eigen::Index filled = 0;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    std::vector<Eigen::Index> members;
    for (Eigen::Index j = i; j < n; ++j)
      if (!used[static_cast<std::size_t>(j)] && std::abs(ev(j) - ev(i)) <= copt.cluster_tol * scale) {
        used[static_cast<std::size_t>(j)] = true;
        members.push_back(j);
      }
    Matrix basis(n, static_cast<Eigen::Index>(members.size()));
    for (std::size_t m = 0; m < members.size(); ++m) basis.col(static_cast<Eigen::Index>(m)) = solver.eigenvectors().col(members[m]);
    const Eigen::HouseholderQR<Matrix> qr(basis);
    const Matrix Q = qr.householderQ() * Matrix::Identity(n, basis.cols());
    // the eigenspace must be mapped into itself by X
    for (Eigen::Index c = 0; c < Q.cols(); ++c) {
      const Vector xq = X(Q.col(c));
      if ((xq - Q * (Q.adjoint() * xq)).norm() > std::sqrt(tol)) {
        out.verdict = AntilinearVerdict::SymmetricBroken;
        return out;
      }
    }
    // X-fixed vectors q + Xq and i(q - Xq); keep a linearly independent subset
    std::vector<Vector> picked;
    for (Eigen::Index c = 0; c < Q.cols() && static_cast<Eigen::Index>(picked.size()) < Q.cols(); ++c) {
      const Vector q = Q.col(c);
      for (const Vector& cand : {Vector(q + X(q)), Vector(I * (q - X(q)))}) {
        if (cand.norm() < 1e-6) continue;
        Matrix trial(n, static_cast<Eigen::Index>(picked.size()) + 1);
        for (std::size_t p = 0; p < picked.size(); ++p) trial.col(static_cast<Eigen::Index>(p)) = picked[p];
        trial.col(trial.cols() - 1) = cand.normalized();
        const Eigen::VectorXd s = Eigen::JacobiSVD<Matrix>(trial).singularValues();
        if (s(s.size() - 1) > 1e-6) picked.push_back(cand.normalized());
        if (static_cast<Eigen::Index>(picked.size()) == Q.cols()) break;
      }
    }
    for (const Vector& v : picked) aligned.col(filled++) = v;
  }
  out.verdict = AntilinearVerdict::Exact;
  out.aligned = aligned;
  return out;
}

// ---------------------------------------------------------------------------------------
// Metric eta_+ = cosh(kappa) 1 - sinh(kappa) P for the free particle on a symmetric grid

struct ParityMetricRecord {
  /// <phi, X psi>_eta - <X phi, psi>_eta
  cplx difference;
  /// 2 sinh(kappa) \int x phi(x)^* psi(-x) dx on the same grid
  cplx predicted;
  /// eigenvalues of eta_+ on even and odd vectors: e^{-kappa} and e^{+kappa}
  double even_eigenvalue = 0.0;
  double odd_eigenvalue = 0.0;
};

inline ParityMetricRecord parity_metric_demo(double kappa, std::span<const double> grid,
                                             const std::function<cplx(double)>& phi,
                                             const std::function<cplx(double)>& psi) {
  const std::size_t n = grid.size();
  require(n >= 3, "parity_metric_demo: grid needs at least three points");
  for (std::size_t i = 0; i < n; ++i) {
    require(std::abs(grid[i] + grid[n - 1 - i]) <= 1e-12 * std::max(1.0, std::abs(grid[i])),
            "parity_metric_demo: grid must be symmetric about 0");
    if (i > 0) require(grid[i] > grid[i - 1], "parity_metric_demo: grid must be increasing");
  }
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = grid[i + 1] - grid[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  const double ch = std::cosh(kappa), sh = std::sinh(kappa);
  auto eta = [&](const std::vector<cplx>& f) {
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = ch * f[i] - sh * f[n - 1 - i];
    return out;
  };
  auto inner = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const auto eb = eta(b);
    cplx s{};
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::conj(a[i]) * eb[i];
    return s;
  };
  std::vector<cplx> f(n), g(n), xf(n), xg(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = phi(grid[i]);
    g[i] = psi(grid[i]);
    xf[i] = grid[i] * f[i];
    xg[i] = grid[i] * g[i];
  }
  ParityMetricRecord rec;
  rec.difference = inner(f, xg) - inner(xf, g);
  cplx integral{};
  for (std::size_t i = 0; i < n; ++i) integral += w[i] * grid[i] * std::conj(f[i]) * g[n - 1 - i];
  rec.predicted = 2.0 * sh * integral;

  std::vector<cplx> even(n), odd(n);
  for (std::size_t i = 0; i < n; ++i) {
    even[i] = std::exp(-grid[i] * grid[i]);
    odd[i] = grid[i] * std::exp(-grid[i] * grid[i]);
  }
  const auto ee = eta(even), eo = eta(odd);
  const std::size_t probe = n / 4;
  rec.even_eigenvalue = (ee[probe] / even[probe]).real();
  rec.odd_eigenvalue = (eo[probe] / odd[probe]).real();
  return rec;
}

/// Two-level model H = [[0, 1], [x^2, 0]] and its eigenvectors (N_n/sqrt 2)((-1)^n, x), n = 1, 2.
inline Matrix two_level_hamiltonian(double x) {
  Matrix h(2, 2);
  h << 0.0, 1.0, x * x, 0.0;
  return h;
}

inline Matrix two_level_right_eigenvectors(double x, cplx n1 = 1.0, cplx n2 = 1.0) {
  Matrix v(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  v << -n1 * r, n2 * r, n1 * r * x, n2 * r * x;
  return v;
}

}  // namespace specsing
