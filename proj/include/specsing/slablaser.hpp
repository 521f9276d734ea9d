#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "specsing/core.hpp"
#include "specsing/newton.hpp"
#include "specsing/potentials.hpp"
#include "specsing/spectral.hpp"

namespace specsing {

/// Homogeneous slab of index eta + i*kappa and thickness `length` in vacuum, with an
/// optional Kerr coefficient. `wavelength` is the design wavelength used to convert
/// between kappa and the gain coefficient.
struct SlabSpec {
  double eta = 1.0;
  double kappa = 0.0;
  double length = 1.0;
  double wavelength = 2.0 * pi;
  double sigma = 0.0;

  cplx n() const { return {eta, kappa}; }
  void validate() const {
    require(eta > 0.0, "slab: eta must be positive");
    require(length > 0.0, "slab: length must be positive");
    require(wavelength > 0.0, "slab: wavelength must be positive");
    require(sigma >= 0.0, "slab: Kerr coefficient must be non-negative");
  }
};

/// ((n - 1)/(n + 1))^2
inline cplx reflectivity(cplx n) {
  require(n != cplx{-1.0, 0.0}, "reflectivity: n = -1");
  const cplx r = (n - 1.0) / (n + 1.0);
  return r * r;
}

/// e^{-2inkL} - ((n-1)/(n+1))^2; vanishes exactly at the slab's spectral singularities.
inline cplx ss_residual(cplx n, double k, double length) {
  require(k > 0.0, "ss_residual: wavenumber must be positive");
  require(length > 0.0, "ss_residual: length must be positive");
  return std::exp(-2.0 * I * n * k * length) - reflectivity(n);
}

/// Threshold gain (1/2L) ln(1/|R|^2) for real index eta; +infinity when eta == 1.
inline double threshold_gain(double eta, double length) {
  require(eta > 0.0, "threshold_gain: eta must be positive");
  require(length > 0.0, "threshold_gain: length must be positive");
  if (eta == 1.0) return std::numeric_limits<double>::infinity();
  return std::log(1.0 / std::norm(reflectivity(cplx{eta, 0.0}))) / (2.0 * length);
}

/// Same formula with the reflectivity of a complex index.
inline double threshold_gain(cplx n, double length) {
  require(length > 0.0, "threshold_gain: length must be positive");
  const double r2 = std::norm(reflectivity(n));
  if (r2 == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(1.0 / r2) / (2.0 * length);
}

/// g = -4 pi kappa / lambda
inline double gain_coefficient(double kappa, double wavelength) {
  require(wavelength > 0.0, "gain_coefficient: wavelength must be positive");
  return -4.0 * pi * kappa / wavelength;
}

struct LasingMode {
  int index = 0;
  double k = 0.0;
  double kappa = 0.0;
  /// gain_coefficient(kappa, 2 pi / k)
  double gain = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Jacobian of (Re, Im) ss_residual with respect to (k, kappa).
inline Eigen::Matrix2d ss_jacobian(double eta, double length, double k, double kappa) {
  const cplx n{eta, kappa};
  const cplx e = std::exp(-2.0 * I * n * k * length);
  const cplx d_k = -2.0 * I * n * length * e;
  const cplx d_n = -2.0 * I * k * length * e - 4.0 * (n - 1.0) / std::pow(n + 1.0, 3);
  const cplx d_kappa = I * d_n;
  Eigen::Matrix2d J;
  J << d_k.real(), d_kappa.real(), d_k.imag(), d_kappa.imag();
  return J;
}

/// Spectral singularities of the slab (k_m, kappa_m) with k_m in the window, seeded at
/// k_m = (2 pi m - arg R)/(2 eta L), kappa_m = ln|R|/(2 k_m L) and polished by Newton.
/// eta == 1 has no modes. Modes whose Newton run stalls are returned with converged = false.
inline std::vector<LasingMode> lasing_modes(double eta, double length, Window k_window,
                                            double tol = 1e-12) {
  require(eta > 0.0, "lasing_modes: eta must be positive");
  require(length > 0.0, "lasing_modes: length must be positive");
  require(k_window.lo > 0.0 && k_window.hi > k_window.lo, "lasing_modes: empty or non-positive window");
  std::vector<LasingMode> modes;
  if (eta == 1.0) return modes;
  const cplx R = reflectivity(cplx{eta, 0.0});
  const double phase = std::arg(R);
  const double spacing = 2.0 * pi / (2.0 * eta * length);
  const auto m_lo = static_cast<long>(std::ceil((k_window.lo + phase / (2.0 * eta * length)) / spacing));
  const auto m_hi = static_cast<long>(std::floor((k_window.hi + phase / (2.0 * eta * length)) / spacing));
  NewtonOptions opt;
  opt.tol = tol;
  const Residual2 F = [&](double k, double kappa) -> std::array<double, 2> {
    const cplx r = std::exp(-2.0 * I * cplx{eta, kappa} * k * length) - reflectivity(cplx{eta, kappa});
    return {r.real(), r.imag()};
  };
  const Jacobian2 J = [&](double k, double kappa) { return ss_jacobian(eta, length, k, kappa); };
  for (long m = std::max(1L, m_lo); m <= m_hi; ++m) {
    const double k0 = (2.0 * pi * static_cast<double>(m) - phase) / (2.0 * eta * length);
    const double kappa0 = std::log(std::abs(R)) / (2.0 * k0 * length);
    opt.scale = {std::max(1.0, k0), std::max(1e-3, std::abs(kappa0))};
    const NewtonResult2 r = newton2(F, {k0, kappa0}, opt, J);
    LasingMode mode;
    mode.index = static_cast<int>(m);
    mode.k = r.x[0];
    mode.kappa = r.x[1];
    mode.residual = r.residual;
    mode.iterations = r.iterations;
    mode.converged = r.converged;
    mode.gain = mode.k > 0.0 ? gain_coefficient(mode.kappa, 2.0 * pi / mode.k) : NAN;
    if (!r.converged || k_window.contains(mode.k)) modes.push_back(mode);
  }
  return modes;
}

/// Slab of index eta + i*theta centred at the origin; parameter name "kappa".
inline Family slab_family(double eta, double length) {
  return medium_family("kappa", [eta, length](double kappa) { return slab_medium(cplx{eta, kappa}, length); });
}

/// Two adjacent layers of thickness L/2: eta + i kappa on [-L/2, 0], eta - i kappa on [0, L/2].
inline Medium pt_bilayer_medium(double eta, double kappa, double length) {
  require(length > 0.0, "pt_bilayer_medium: length must be positive");
  return Medium({{-0.5 * length, 0.0, cplx{eta, kappa}}, {0.0, 0.5 * length, cplx{eta, -kappa}}});
}

inline Family pt_bilayer_family(double eta, double length) {
  return medium_family("kappa",
                       [eta, length](double kappa) { return pt_bilayer_medium(eta, kappa, length); });
}

// ---------------------------------------------------------------------------------------
// Kerr-nonlinear slab

struct NonlinearOptions {
  /// Newton tolerance on the incoming-wave coefficient (relative to the outgoing amplitude).
  double tol = 1e-11;
  /// Converged sigma*I below -threshold_tol means no lasing solution.
  double threshold_tol = 1e-8;
  double steps_per_wavelength = 1600.0;
  std::size_t min_steps = 2000;
  int max_iterations = 60;
};

enum class NonlinearStatus { Lasing, NoSolution, NotConverged };

struct NonlinearResult {
  NonlinearStatus status = NonlinearStatus::NotConverged;
  /// |outgoing amplitude|^2; zero unless status == Lasing.
  double intensity = 0.0;
  /// sigma * intensity as solved (negative below threshold).
  double kerr_shift = 0.0;
  double k = 0.0;
  double kappa = 0.0;
  double gain = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {

/// Shoots psi'' + k^2 (n^2 + s|psi|^2) psi = 0 from the right face with the purely outgoing
/// data psi = e^{ikx}, then returns the coefficient of the incoming wave e^{ikx} on the left.
/// Here s = sigma * A^2 absorbs the outgoing amplitude A, so s < 0 means no physical solution.
inline cplx kerr_incoming(double eta, double kappa, double length, double k, double s,
                          const NonlinearOptions& opt) {
  const cplx n2 = cplx{eta, kappa} * cplx{eta, kappa};
  const double x_right = 0.5 * length, x_left = -0.5 * length;
  const double wavelength = 2.0 * pi / (k * std::abs(cplx{eta, kappa}));
  const auto steps = std::max<std::size_t>(
      opt.min_steps, static_cast<std::size_t>(std::ceil(length / wavelength * opt.steps_per_wavelength)));
  const double h = (x_left - x_right) / static_cast<double>(steps);
  const double k2 = k * k;
  cplx psi = std::exp(I * k * x_right);
  cplx dpsi = I * k * psi;
  auto accel = [&](cplx p) { return -k2 * (n2 + s * std::norm(p)) * p; };
  for (std::size_t i = 0; i < steps; ++i) {
    const cplx a1 = dpsi, b1 = accel(psi);
    const cplx a2 = dpsi + 0.5 * h * b1, b2 = accel(psi + 0.5 * h * a1);
    const cplx a3 = dpsi + 0.5 * h * b2, b3 = accel(psi + 0.5 * h * a2);
    const cplx a4 = dpsi + h * b3, b4 = accel(psi + h * a3);
    psi += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    dpsi += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
  }
  return (I * k * psi + dpsi) / (2.0 * I * k) * std::exp(-I * k * x_left);
}

}  // namespace detail

/// Nonlinear spectral singularity of a Kerr slab at fixed kappa: finds the outgoing
/// intensity I and wavenumber k for which the slab emits purely outgoing waves.
inline NonlinearResult nonlinear_outgoing_solve(const SlabSpec& spec, const LasingMode& seed,
                                                const NonlinearOptions& opt = {},
                                                double kerr_shift_guess = 0.0) {
  spec.validate();
  require(spec.sigma > 0.0, "nonlinear_outgoing_solve: Kerr coefficient must be positive");
  require(seed.k > 0.0, "nonlinear_outgoing_solve: seed wavenumber must be positive");
  const Residual2 F = [&](double s, double k) -> std::array<double, 2> {
    if (!(k > 0.0)) return {NAN, NAN};
    const cplx c = detail::kerr_incoming(spec.eta, spec.kappa, spec.length, k, s, opt);
    return {c.real(), c.imag()};
  };
  NewtonOptions nopt;
  nopt.tol = opt.tol;
  nopt.max_iterations = opt.max_iterations;
  nopt.scale = {1.0, seed.k};
  const NewtonResult2 r = newton2(F, {kerr_shift_guess, seed.k}, nopt);

  NonlinearResult out;
  out.kerr_shift = r.x[0];
  out.k = r.x[1];
  out.kappa = spec.kappa;
  out.gain = gain_coefficient(spec.kappa, spec.wavelength);
  out.residual = r.residual;
  out.iterations = r.iterations;
  if (!r.converged) {
    out.status = NonlinearStatus::NotConverged;
  } else if (r.x[0] < -opt.threshold_tol) {
    out.status = NonlinearStatus::NoSolution;
  } else {
    out.status = NonlinearStatus::Lasing;
    out.intensity = std::max(0.0, r.x[0]) / spec.sigma;
  }
  return out;
}

/// Inverse problem at a prescribed output intensity: solves for (k, kappa).
inline NonlinearResult nonlinear_mode_at_intensity(const SlabSpec& spec, double intensity,
                                                   const LasingMode& seed,
                                                   const NonlinearOptions& opt = {}) {
  spec.validate();
  require(intensity >= 0.0, "nonlinear_mode_at_intensity: intensity must be non-negative");
  const double s = spec.sigma * intensity;
  const Residual2 F = [&](double k, double kappa) -> std::array<double, 2> {
    if (!(k > 0.0)) return {NAN, NAN};
    const cplx c = detail::kerr_incoming(spec.eta, kappa, spec.length, k, s, opt);
    return {c.real(), c.imag()};
  };
  NewtonOptions nopt;
  nopt.tol = opt.tol;
  nopt.max_iterations = opt.max_iterations;
  nopt.scale = {seed.k, std::max(1e-3, std::abs(seed.kappa))};
  const NewtonResult2 r = newton2(F, {seed.k, seed.kappa}, nopt);
  NonlinearResult out;
  out.status = r.converged ? NonlinearStatus::Lasing : NonlinearStatus::NotConverged;
  out.intensity = intensity;
  out.kerr_shift = s;
  out.k = r.x[0];
  out.kappa = r.x[1];
  out.gain = gain_coefficient(r.x[1], spec.wavelength);
  out.residual = r.residual;
  out.iterations = r.iterations;
  return out;
}

struct IntensityPoint {
  double gain = 0.0;
  double intensity = 0.0;
  double k = 0.0;
};

struct IntensityCurve {
  std::vector<IntensityPoint> points;
  double slope = 0.0;
  /// Gain at which the fitted line reaches I = 0.
  double threshold_fit = 0.0;
  double r_squared = 0.0;
};

/// Output intensity versus gain just above threshold, with a least-squares line fit.
/// spec.kappa is ignored: each gain g sets kappa = -g * wavelength / (4 pi).
inline IntensityCurve intensity_curve(const SlabSpec& spec, const LasingMode& seed,
                                      std::span<const double> gains,
                                      const NonlinearOptions& opt = {}) {
  spec.validate();
  require(spec.sigma > 0.0, "intensity_curve: Kerr coefficient must be positive");
  require(gains.size() >= 2, "intensity_curve: need at least two gain values");
  require(std::is_sorted(gains.begin(), gains.end()), "intensity_curve: gains must be increasing");
  const double g_th = threshold_gain(spec.eta, spec.length);
  for (double g : gains)
    require(g > g_th && g <= 1.2 * g_th, "intensity_curve: gains must lie in (g_th, 1.2 g_th]");

  IntensityCurve curve;
  double guess = 0.0;
  LasingMode start = seed;
  for (double g : gains) {
    SlabSpec at = spec;
    at.kappa = -g * spec.wavelength / (4.0 * pi);
    const NonlinearResult r = nonlinear_outgoing_solve(at, start, opt, guess);
    if (r.status != NonlinearStatus::Lasing)
      throw ConvergenceError("intensity_curve: no lasing solution at g = " + std::to_string(g));
    curve.points.push_back({g, r.intensity, r.k});
    guess = r.kerr_shift;
    start.k = r.k;
  }

  const auto n = static_cast<double>(curve.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : curve.points) {
    sx += p.gain;
    sy += p.intensity;
    sxx += p.gain * p.gain;
    sxy += p.gain * p.intensity;
    syy += p.intensity * p.intensity;
  }
  const double cov = sxy - sx * sy / n, var_x = sxx - sx * sx / n, var_y = syy - sy * sy / n;
  curve.slope = cov / var_x;
  const double intercept = (sy - curve.slope * sx) / n;
  curve.threshold_fit = -intercept / curve.slope;
  curve.r_squared = var_y > 0.0 ? cov * cov / (var_x * var_y) : 1.0;
  return curve;
}

}  // namespace specsing
