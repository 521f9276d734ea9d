#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>

#include "specsing/core.hpp"

namespace specsing {

struct NewtonOptions {
  /// Converged when the residual norm drops below this.
  double tol = 1e-8;
  int max_iterations = 80;
  /// Central-difference step, relative to the coordinate scale.
  double fd_step = 1e-7;
  /// Typical magnitude of each unknown; sets difference steps.
  std::array<double, 2> scale{1.0, 1.0};
};

struct NewtonResult2 {
  std::array<double, 2> x{};
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Residual2 = std::function<std::array<double, 2>(double, double)>;
using Jacobian2 = std::function<Eigen::Matrix2d(double, double)>;

namespace detail {

inline double norm2(const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); }

inline Eigen::Matrix2d fd_jacobian(const Residual2& F, const std::array<double, 2>& x,
                                   const NewtonOptions& opt) {
  Eigen::Matrix2d J;
  for (int j = 0; j < 2; ++j) {
    const double h = opt.fd_step * std::max(opt.scale[j], std::abs(x[j]));
    std::array<double, 2> a = x, b = x;
    a[j] += h;
    b[j] -= h;
    const auto fa = F(a[0], a[1]);
    const auto fb = F(b[0], b[1]);
    J(0, j) = (fa[0] - fb[0]) / (2.0 * h);
    J(1, j) = (fa[1] - fb[1]) / (2.0 * h);
  }
  return J;
}

}  // namespace detail

/// Damped Gauss-Newton for F(x, y) = 0 in two real unknowns. Steps are minimum-norm
/// least-squares solutions, so a rank-deficient Jacobian (a curve of zeros) still
/// converges onto the zero set. Halves the step until the residual decreases.
inline NewtonResult2 newton2(const Residual2& F, std::array<double, 2> x0, const NewtonOptions& opt,
                             const Jacobian2& jacobian = {}) {
  NewtonResult2 r;
  r.x = x0;
  auto f = F(x0[0], x0[1]);
  r.residual = detail::norm2(f);
  const double polish = opt.tol * 1e-6;
  for (r.iterations = 0; r.iterations < opt.max_iterations; ++r.iterations) {
    if (!std::isfinite(r.residual) || r.residual <= polish) break;
    const Eigen::Matrix2d J = jacobian ? jacobian(r.x[0], r.x[1]) : detail::fd_jacobian(F, r.x, opt);
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-11);
    const Eigen::Vector2d step = svd.solve(-Eigen::Vector2d(f[0], f[1]));
    if (!step.allFinite()) break;
    bool improved = false;
    double lambda = 1.0;
    for (int h = 0; h < 30; ++h, lambda *= 0.5) {
      const std::array<double, 2> trial{r.x[0] + lambda * step[0], r.x[1] + lambda * step[1]};
      const auto ft = F(trial[0], trial[1]);
      const double rt = detail::norm2(ft);
      if (std::isfinite(rt) && rt < r.residual) {
        r.x = trial;
        f = ft;
        r.residual = rt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    const double size = std::abs(lambda) * std::hypot(step[0] / opt.scale[0], step[1] / opt.scale[1]);
    if (size < 1e-15 && r.residual < opt.tol) break;
  }
  r.converged = std::isfinite(r.residual) && r.residual < opt.tol;
  return r;
}

struct NewtonResultC {
  cplx z;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton for an analytic f(z) = 0 with a central-difference derivative.
inline NewtonResultC newton_complex(const std::function<cplx(cplx)>& f, cplx z0, double tol,
                                    int max_iterations = 100) {
  NewtonResultC r{z0, std::abs(f(z0)), 0, false};
  cplx fz = f(z0);
  for (; r.iterations < max_iterations; ++r.iterations) {
    if (!std::isfinite(r.residual) || r.residual <= tol * 1e-6) break;
    const double h = 1e-6 * std::max(1.0, std::abs(r.z));
    const cplx df = (f(r.z + h) - f(r.z - h)) / (2.0 * h);
    if (!is_finite(df) || df == cplx{}) break;
    const cplx step = -fz / df;
    bool improved = false;
    double lambda = 1.0;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      const cplx trial = r.z + lambda * step;
      const cplx ft = f(trial);
      if (is_finite(ft) && std::abs(ft) < r.residual) {
        r.z = trial;
        fz = ft;
        r.residual = std::abs(ft);
        improved = true;
        break;
      }
    }
    if (!improved) break;
    if (std::abs(lambda * step) < 1e-15 * std::max(1.0, std::abs(r.z)) && r.residual < tol) break;
  }
  r.converged = std::isfinite(r.residual) && r.residual < tol;
  return r;
}

}  // namespace specsing
