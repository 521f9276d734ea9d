#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "specsing/core.hpp"
#include "specsing/potentials.hpp"

namespace specsing {

/// Dense 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
  cplx a{1.0}, b{}, c{}, d{1.0};

  static Mat2 identity() { return {}; }
  cplx det() const { return a * d - b * c; }
  Mat2 inverse() const {
    const cplx D = det();
    return {d / D, -b / D, -c / D, a / D};
  }
  Mat2 conj() const { return {std::conj(a), std::conj(b), std::conj(c), std::conj(d)}; }
  /// sigma_1 * M * sigma_1: swaps both diagonals.
  Mat2 flipped() const { return {d, c, b, a}; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend Mat2 operator*(cplx s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }

  double max_abs_diff(const Mat2& o) const {
    return std::max({std::abs(a - o.a), std::abs(b - o.b), std::abs(c - o.c), std::abs(d - o.d)});
  }
};

/// Wavefunction value and derivative at a point.
struct State {
  cplx psi;
  cplx dpsi;
};

inline State operator*(const Mat2& m, const State& s) {
  return {m.a * s.psi + m.b * s.dpsi, m.c * s.psi + m.d * s.dpsi};
}

/// Maps left asymptotic plane-wave coefficients (A-, B-) to right ones (A+, B+)
/// for psi -> A e^{ikx} + B e^{-ikx}.
struct TransferMatrix {
  cplx m11{1.0}, m12{}, m21{}, m22{1.0};
  cplx k{1.0};

  Mat2 matrix() const { return {m11, m12, m21, m22}; }
  cplx det() const { return m11 * m22 - m12 * m21; }

  static TransferMatrix from(const Mat2& m, cplx k) { return {m.a, m.b, m.c, m.d, k}; }
};

/// Reflection and transmission amplitudes in the Jost normalization (A^{l/r} T = 1).
struct Amplitudes {
  cplx reflection_left;
  cplx reflection_right;
  cplx transmission;
};

/// Step control for RK4 integration across sampled potentials.
struct RkOptions {
  /// RK4 substeps per local wavelength 2*pi/sqrt(max|k^2 - v|); never below 50.
  double steps_per_wavelength = 800.0;
  /// Grids with fewer samples than this per local wavelength are rejected.
  double min_samples_per_wavelength = 20.0;
};

namespace detail {

/// (psi, psi') at x for A e^{ikx} + B e^{-ikx}, as a matrix acting on (A, B).
inline Mat2 plane_wave_basis(cplx k, double x) {
  const cplx e = std::exp(I * k * x);
  const cplx ik = I * k;
  return {e, 1.0 / e, ik * e, -ik / e};
}

inline Mat2 plane_wave_basis_inverse(cplx k, double x) {
  const cplx e = std::exp(I * k * x);
  const cplx ik = I * k;
  return {0.5 / e, 0.5 / (ik * e), 0.5 * e, -0.5 * e / ik};
}

/// Exact propagator of psi'' = -w2 psi over a signed length. cos(w l) and sin(w l)/w are
/// even in w, so the square-root branch does not matter.
inline Mat2 constant_propagator(cplx w2, double length) {
  if (w2 == cplx{}) return {1.0, length, 0.0, 1.0};
  const cplx w = std::sqrt(w2);
  const cplx C = std::cos(w * length);
  const cplx S = std::sin(w * length) / w;
  return {C, S, -w2 * S, C};
}

inline Mat2 delta_jump(cplx strength) { return {1.0, 0.0, strength, 1.0}; }

}  // namespace detail

/// Propagates solutions of -psi'' + v psi = k^2 psi between arbitrary points.
/// States are right limits at delta positions.
class Propagator {
 public:
  Propagator(const Potential& p, cplx k, RkOptions rk = {}) : p_(&p), k_(k), k2_(k * k), rk_(rk) {
    if (const Sampled* s = p.get_if<Sampled>()) {
      double peak = 0.0;
      for (const cplx& v : s->values) peak = std::max(peak, std::abs(k2_ - v));
      const double dx = s->dx();
      if (peak > 0.0) {
        const double wavelength = 2.0 * pi / std::sqrt(peak);
        require(dx * rk.min_samples_per_wavelength <= wavelength,
                "sampled grid too coarse: fewer than " +
                    std::to_string(rk.min_samples_per_wavelength) +
                    " samples per local wavelength");
        const double per = std::max(50.0, rk.steps_per_wavelength);
        substeps_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dx * per / wavelength)));
      }
    }
  }

  cplx k() const { return k_; }

  /// Fundamental matrix Phi with (psi, psi')(to) = Phi * (psi, psi')(from).
  Mat2 fundamental(double from, double to) const {
    if (from == to) return Mat2::identity();
    if (const auto* layers = p_->get_if<std::vector<Layer>>()) return through_layers(*layers, from, to);
    if (const auto* deltas = p_->get_if<std::vector<Delta>>()) return through_deltas(*deltas, from, to);
    return through_samples(*p_->get_if<Sampled>(), from, to);
  }

  State propagate(const State& s, double from, double to) const { return fundamental(from, to) * s; }

 private:
  Mat2 free(double length) const { return detail::constant_propagator(k2_, length); }

  Mat2 through_layers(const std::vector<Layer>& layers, double from, double to) const {
    std::vector<double> cuts;
    cuts.reserve(2 * layers.size());
    for (const Layer& l : layers) {
      cuts.push_back(l.x_left);
      cuts.push_back(l.x_right);
    }
    auto value_on = [&](double lo, double hi) -> cplx {
      const double mid = 0.5 * (lo + hi);
      auto it = std::upper_bound(layers.begin(), layers.end(), mid,
                                 [](double x, const Layer& l) { return x < l.x_right; });
      if (it != layers.end() && it->x_left <= mid) return it->value;
      return {};
    };
    Mat2 phi;
    double x = from;
    if (to > from) {
      while (x < to) {
        auto it = std::upper_bound(cuts.begin(), cuts.end(), x);
        const double next = (it == cuts.end()) ? to : std::min(to, *it);
        phi = detail::constant_propagator(k2_ - value_on(x, next), next - x) * phi;
        x = next;
      }
    } else {
      while (x > to) {
        auto it = std::lower_bound(cuts.begin(), cuts.end(), x);
        const double prev = (it == cuts.begin()) ? to : std::max(to, *std::prev(it));
        phi = detail::constant_propagator(k2_ - value_on(prev, x), prev - x) * phi;
        x = prev;
      }
    }
    return phi;
  }

  Mat2 through_deltas(const std::vector<Delta>& deltas, double from, double to) const {
    Mat2 phi;
    double x = from;
    if (to > from) {
      for (const Delta& d : deltas) {
        if (d.position <= from || d.position > to) continue;
        phi = detail::delta_jump(d.strength) * free(d.position - x) * phi;
        x = d.position;
      }
    } else {
      for (auto it = deltas.rbegin(); it != deltas.rend(); ++it) {
        if (it->position > from || it->position <= to) continue;
        phi = detail::delta_jump(-it->strength) * free(it->position - x) * phi;
        x = it->position;
      }
    }
    return free(to - x) * phi;
  }

  /// Y' = [[0, 1], [v(x) - k^2, 0]] Y with v linear between samples.
  Mat2 rk4_cell(const Sampled& s, std::size_t cell, double a, double b) const {
    const double x0 = s.x(cell);
    const double dx = s.dx();
    const cplx v0 = s.values[cell];
    const cplx slope = (s.values[cell + 1] - v0) / dx;
    auto q = [&](double x) { return v0 + slope * (x - x0) - k2_; };
    const double cell_step = dx / static_cast<double>(substeps_);
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(std::abs(b - a) / cell_step - 1e-9)));
    const double h = (b - a) / static_cast<double>(n);
    Mat2 Y;
    auto f = [](cplx qq, const Mat2& y) { return Mat2{y.c, y.d, qq * y.a, qq * y.b}; };
    for (std::size_t i = 0; i < n; ++i) {
      const double x = a + h * static_cast<double>(i);
      const cplx q1 = q(x), q2 = q(x + 0.5 * h), q3 = q(x + h);
      const Mat2 k1 = f(q1, Y);
      const Mat2 k2 = f(q2, Y + cplx(0.5 * h) * k1);
      const Mat2 k3 = f(q2, Y + cplx(0.5 * h) * k2);
      const Mat2 k4 = f(q3, Y + cplx(h) * k3);
      Y = Y + cplx(h / 6.0) * (k1 + cplx(2.0) * k2 + cplx(2.0) * k3 + k4);
    }
    return Y;
  }

  Mat2 through_samples(const Sampled& s, double from, double to) const {
    const double lo = std::max(std::min(from, to), s.x_min);
    const double hi = std::min(std::max(from, to), s.x_max);
    if (lo >= hi) return free(to - from);
    const std::size_t cells = s.values.size() - 1;
    const double dx = s.dx();
    Mat2 phi;
    if (to > from) {
      // cell c spans [x(c), x(c+1)]
      auto c = static_cast<std::size_t>(std::max(0.0, std::floor((lo - s.x_min) / dx)));
      c = std::min(c, cells - 1);
      while (c > 0 && s.x(c) > lo) --c;
      while (c + 1 < cells && s.x(c + 1) <= lo) ++c;
      phi = free(lo - from);
      for (double x = lo; x < hi && c < cells; ++c) {
        const double end = std::min(hi, s.x(c + 1));
        if (end > x) phi = rk4_cell(s, c, x, end) * phi;
        x = end;
      }
      return free(to - hi) * phi;
    }
    auto c = static_cast<std::size_t>(std::max(0.0, std::ceil((hi - s.x_min) / dx) - 1.0));
    c = std::min(c, cells - 1);
    while (c > 0 && s.x(c) >= hi) --c;
    while (c + 1 < cells && s.x(c + 1) < hi) ++c;
    phi = free(hi - from);
    for (double x = hi; x > lo;) {
      const double start = std::max(lo, s.x(c));
      if (start < x) phi = rk4_cell(s, c, x, start) * phi;
      x = start;
      if (c == 0) break;
      --c;
    }
    return free(to - lo) * phi;
  }

  const Potential* p_;
  cplx k_;
  cplx k2_;
  RkOptions rk_;
  std::size_t substeps_ = 1;
};

/// Transfer matrix at complex wavenumber k != 0 (analytic continuation off the real axis).
inline TransferMatrix transfer_matrix(const Potential& p, cplx k, RkOptions rk = {}) {
  require(is_finite(k) && k != cplx{}, "transfer_matrix: wavenumber must be finite and nonzero");
  if (const auto* deltas = p.get_if<std::vector<Delta>>()) {
    // I + z/(2ik) [[1, e^{-2ikx}], [-e^{2ikx}, -1]] per delta, composed left to right
    Mat2 m;
    for (const Delta& d : *deltas) {
      const cplx s = d.strength / (2.0 * I * k);
      const cplx e = std::exp(2.0 * I * k * d.position);
      m = Mat2{1.0 + s, s / e, -s * e, 1.0 - s} * m;
    }
    return TransferMatrix::from(m, k);
  }
  if (p.is_zero()) return TransferMatrix::from(Mat2::identity(), k);
  const double lo = p.x_min(), hi = p.x_max();
  const Mat2 phi = Propagator(p, k, rk).fundamental(lo, hi);
  return TransferMatrix::from(
      detail::plane_wave_basis_inverse(k, hi) * phi * detail::plane_wave_basis(k, lo), k);
}

inline TransferMatrix transfer_matrix(const Potential& p, double k, RkOptions rk = {}) {
  require(k > 0.0 && std::isfinite(k), "transfer_matrix: wavenumber must be positive");
  return transfer_matrix(p, cplx{k, 0.0}, rk);
}

inline TransferMatrix transfer_matrix(const Medium& m, double k, RkOptions rk = {}) {
  return transfer_matrix(from_medium(m, k), k, rk);
}

/// True when |M22| is small enough that the amplitudes diverge.
inline bool is_spectral_singularity(const TransferMatrix& m, double singular_tol = 1e-12) {
  return std::abs(m.m22) <= singular_tol;
}

/// T = 1/M22, R^r = M12/M22, R^l = -M21/M22. Empty when M22 vanishes (spectral singularity).
inline std::optional<Amplitudes> amplitudes(const TransferMatrix& m, double singular_tol = 1e-12) {
  if (is_spectral_singularity(m, singular_tol)) return std::nullopt;
  return Amplitudes{-m.m21 / m.m22, m.m12 / m.m22, 1.0 / m.m22};
}

/// (|R^l|^2 + |T|^2 - 1, |R^r|^2 + |T|^2 - 1); zero for real potentials.
inline std::pair<double, double> unitarity_defect(const Amplitudes& a) {
  const double t2 = std::norm(a.transmission);
  return {std::norm(a.reflection_left) + t2 - 1.0, std::norm(a.reflection_right) + t2 - 1.0};
}

struct JostSample {
  double x = 0.0;
  State plus;   // -> e^{ikx} as x -> +inf
  State minus;  // -> e^{-ikx} as x -> -inf
};

/// psi_+' psi_- - psi_+ psi_-'; equals 2ik M22 for the Jost pair.
inline cplx wronskian(const JostSample& s) {
  return s.plus.dpsi * s.minus.psi - s.plus.psi * s.minus.dpsi;
}

/// Jost solutions psi_{k+-} sampled on a non-decreasing grid. Outside the support the
/// exact asymptotic forms are used; inside, the solutions are propagated from the edges.
inline std::vector<JostSample> jost_solutions(const Potential& p, double k,
                                              std::span<const double> grid, RkOptions rk = {}) {
  require(k > 0.0 && std::isfinite(k), "jost_solutions: wavenumber must be positive");
  require(std::is_sorted(grid.begin(), grid.end()), "jost_solutions: grid must be sorted");
  const TransferMatrix M = transfer_matrix(p, k, rk);
  const double lo = p.x_min(), hi = p.x_max();
  const cplx ik = I * k;
  auto wave = [&](cplx a, cplx b, double x) {
    const cplx e = std::exp(ik * x);
    return State{a * e + b / e, ik * (a * e - b / e)};
  };
  std::vector<JostSample> out(grid.size());
  const Propagator prop(p, k, rk);
  const double left_anchor = lo - 1.0, right_anchor = hi + 1.0;

  State minus = wave(0.0, 1.0, left_anchor);
  double at = left_anchor;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    out[i].x = x;
    if (x < lo) {
      out[i].minus = wave(0.0, 1.0, x);
    } else if (x >= hi) {
      out[i].minus = wave(M.m12, M.m22, x);
    } else {
      minus = prop.propagate(minus, at, x);
      at = x;
      out[i].minus = minus;
    }
  }
  State plus = wave(1.0, 0.0, right_anchor);
  at = right_anchor;
  for (std::size_t j = grid.size(); j-- > 0;) {
    const double x = grid[j];
    if (x >= hi) {
      out[j].plus = wave(1.0, 0.0, x);
    } else if (x < lo) {
      out[j].plus = wave(M.m22, -M.m21, x);
    } else {
      plus = prop.propagate(plus, at, x);
      at = x;
      out[j].plus = plus;
    }
  }
  return out;
}

}  // namespace specsing
