#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specsing/core.hpp"
#include "specsing/newton.hpp"
#include "specsing/parallel.hpp"
#include "specsing/potentials.hpp"
#include "specsing/transfer.hpp"

namespace specsing {

enum class Kind { LasingSS, CPA, Resonance, BoundState, VirtualState };

inline std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::LasingSS: return "lasing-SS";
    case Kind::CPA: return "CPA";
    case Kind::Resonance: return "resonance";
    case Kind::BoundState: return "bound-state";
    case Kind::VirtualState: return "virtual-state";
  }
  return "unknown";
}

struct TunedParameter {
  std::string name;
  double value = 0.0;
};

/// A located zero of M22 (or M11 for CPA).
struct SingularityReport {
  cplx k_star;
  std::optional<TunedParameter> tuned;
  /// |M22| (or |M11|) re-evaluated at the solution.
  double residual = 0.0;
  Kind kind = Kind::LasingSS;
  int multiplicity = 1;
};

struct SearchResult {
  std::vector<SingularityReport> roots;
  /// Seeds that bracket a zero (nonzero winding) but where Newton stalled.
  std::vector<SingularityReport> unconverged;
};

/// One-parameter family of potentials, evaluated at (k, theta).
struct Family {
  std::string parameter;
  std::function<Potential(double k, double theta)> at;
};

inline Family medium_family(std::string parameter, std::function<Medium(double theta)> medium) {
  return {std::move(parameter), [medium = std::move(medium)](double k, double theta) {
            return from_medium(medium(theta), k);
          }};
}

inline Family potential_family(std::string parameter,
                               std::function<Potential(double theta)> potential) {
  return {std::move(parameter),
          [potential = std::move(potential)](double, double theta) { return potential(theta); }};
}

/// Evaluates the family after applying parity to every member.
inline Family parity_family(const Family& f) {
  return {f.parameter, [at = f.at](double k, double theta) { return parity_transform(at(k, theta)); }};
}

struct ScanRow {
  double k = 0.0;
  TransferMatrix m;
  /// Empty at a spectral singularity (amplitudes diverge).
  std::optional<Amplitudes> amplitudes;
  std::pair<double, double> defect{0.0, 0.0};

  bool singular() const { return !amplitudes.has_value(); }
};

/// Transfer matrix, amplitudes and unitarity defects along a strictly increasing k grid.
inline std::vector<ScanRow> scan(const std::function<Potential(double k)>& source,
                                 std::span<const double> k_grid, std::size_t threads = 0,
                                 RkOptions rk = {}) {
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    require(k_grid[i] > 0.0, "scan: wavenumbers must be positive");
    if (i > 0) require(k_grid[i] > k_grid[i - 1], "scan: k grid must be strictly increasing");
  }
  std::vector<ScanRow> rows(k_grid.size());
  parallel_for(
      k_grid.size(),
      [&](std::size_t i) {
        const double k = k_grid[i];
        ScanRow& row = rows[i];
        row.k = k;
        row.m = transfer_matrix(source(k), k, rk);
        row.amplitudes = amplitudes(row.m);
        if (row.amplitudes) row.defect = unitarity_defect(*row.amplitudes);
      },
      threads);
  return rows;
}

inline std::vector<ScanRow> scan(const Potential& p, std::span<const double> k_grid,
                                 std::size_t threads = 0, RkOptions rk = {}) {
  return scan([&p](double) { return p; }, k_grid, threads, rk);
}

inline std::vector<ScanRow> scan(const Medium& m, std::span<const double> k_grid,
                                 std::size_t threads = 0, RkOptions rk = {}) {
  return scan([&m](double k) { return from_medium(m, k); }, k_grid, threads, rk);
}

struct SearchOptions {
  /// Accept a root when |M22| (|M11|) falls below this.
  double tol = 1e-8;
  std::size_t k_points = 400;
  std::size_t theta_points = 400;
  /// Roots closer than this many grid cells are merged.
  double cluster_cells = 2.0;
  std::size_t threads = 0;
  int max_iterations = 80;
  RkOptions rk;
};

namespace detail {

using Entry = cplx (*)(const TransferMatrix&);
inline cplx entry_m22(const TransferMatrix& m) { return m.m22; }
inline cplx entry_m11(const TransferMatrix& m) { return m.m11; }

inline double wrapped_angle(cplx from, cplx to) { return std::arg(to / from); }

/// Zeros of entry(M(k, theta)) over a (k, theta) window: coarse-grid seeding by winding
/// cells and |entry| local minima, then Gauss-Newton in window-normalized coordinates.
inline SearchResult find_zeros_2d(const Family& family, Entry entry, Window k_window,
                                  Window theta_window, const SearchOptions& opt, Kind kind) {
  require(opt.tol > 0.0, "search tolerance must be positive");
  require(k_window.lo > 0.0 && k_window.hi > k_window.lo, "k window must be positive and non-empty");
  require(theta_window.hi > theta_window.lo, "parameter window must be non-empty");
  require(opt.k_points >= 2 && opt.theta_points >= 2, "search grid needs at least 2x2 points");
  k_window.n = opt.k_points;
  theta_window.n = opt.theta_points;
  const std::size_t nk = k_window.n, nt = theta_window.n;

  auto evaluate = [&](double k, double theta) -> cplx {
    if (!(k > 0.0) || !std::isfinite(k) || !std::isfinite(theta)) return {NAN, NAN};
    try {
      return entry(transfer_matrix(family.at(k, theta), k, opt.rk));
    } catch (const InvalidArgument&) {
      return {NAN, NAN};
    }
  };

  std::vector<cplx> grid(nk * nt);
  parallel_for(
      nk,
      [&](std::size_t i) {
        const double k = k_window.at(i);
        for (std::size_t j = 0; j < nt; ++j) grid[i * nt + j] = evaluate(k, theta_window.at(j));
      },
      opt.threads);
  auto g = [&](std::size_t i, std::size_t j) { return grid[i * nt + j]; };

  struct Seed {
    double u, v;
    bool bracketed;
  };
  std::vector<Seed> seeds;
  const double du = 1.0 / static_cast<double>(nk - 1), dv = 1.0 / static_cast<double>(nt - 1);
  for (std::size_t i = 0; i + 1 < nk; ++i)
    for (std::size_t j = 0; j + 1 < nt; ++j) {
      const std::array<cplx, 4> c{g(i, j), g(i + 1, j), g(i + 1, j + 1), g(i, j + 1)};
      bool finite = true;
      for (const cplx& z : c) finite = finite && is_finite(z) && z != cplx{};
      if (!finite) continue;
      double turn = 0.0;
      for (int e = 0; e < 4; ++e) turn += wrapped_angle(c[e], c[(e + 1) % 4]);
      if (std::lround(turn / (2.0 * pi)) != 0)
        seeds.push_back({(static_cast<double>(i) + 0.5) * du, (static_cast<double>(j) + 0.5) * dv, true});
    }
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      const double here = std::abs(g(i, j));
      if (!std::isfinite(here)) continue;
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di)
        for (int dj = -1; dj <= 1 && minimum; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<long>(nk) || jj >= static_cast<long>(nt)) continue;
          const double there = std::abs(g(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj)));
          if (std::isfinite(there) && there < here) minimum = false;
        }
      if (minimum)
        seeds.push_back({static_cast<double>(i) * du, static_cast<double>(j) * dv, false});
    }

  auto to_k = [&](double u) { return k_window.lo + u * k_window.width(); };
  auto to_theta = [&](double v) { return theta_window.lo + v * theta_window.width(); };
  const Residual2 F = [&](double u, double v) -> std::array<double, 2> {
    const cplx z = evaluate(to_k(u), to_theta(v));
    return {z.real(), z.imag()};
  };
  NewtonOptions nopt;
  nopt.tol = opt.tol;
  nopt.max_iterations = opt.max_iterations;

  struct Solved {
    NewtonResult2 r;
    bool bracketed;
  };
  std::vector<Solved> solved(seeds.size());
  parallel_for(
      seeds.size(),
      [&](std::size_t s) { solved[s] = {newton2(F, {seeds[s].u, seeds[s].v}, nopt), seeds[s].bracketed}; },
      opt.threads);

  auto report = [&](const NewtonResult2& r) {
    SingularityReport rep;
    rep.k_star = cplx{to_k(r.x[0]), 0.0};
    rep.tuned = TunedParameter{family.parameter, to_theta(r.x[1])};
    rep.residual = std::abs(evaluate(to_k(r.x[0]), to_theta(r.x[1])));
    rep.kind = kind;
    return rep;
  };

  const double slack = 1e-9;
  const double radius = opt.cluster_cells * std::max(du, dv);
  std::vector<NewtonResult2> kept;
  std::vector<NewtonResult2> stalled;
  for (const Solved& s : solved) {
    const auto& r = s.r;
    const bool inside = r.x[0] >= -slack && r.x[0] <= 1.0 + slack && r.x[1] >= -slack && r.x[1] <= 1.0 + slack;
    if (!r.converged || !inside) {
      if (s.bracketed) stalled.push_back(r);
      continue;
    }
    bool merged = false;
    for (auto& other : kept)
      if (std::hypot(other.x[0] - r.x[0], other.x[1] - r.x[1]) < radius) {
        if (r.residual < other.residual) other = r;
        merged = true;
        break;
      }
    if (!merged) kept.push_back(r);
  }

  SearchResult out;
  for (const auto& r : kept) {
    SingularityReport rep = report(r);
    if (rep.residual < opt.tol) out.roots.push_back(std::move(rep));
  }
  for (const auto& r : stalled) {
    const bool near_root = std::any_of(kept.begin(), kept.end(), [&](const NewtonResult2& k) {
      return std::hypot(k.x[0] - r.x[0], k.x[1] - r.x[1]) < radius;
    });
    if (!near_root) out.unconverged.push_back(report(r));
  }
  auto by_k = [](const SingularityReport& a, const SingularityReport& b) {
    if (a.k_star.real() != b.k_star.real()) return a.k_star.real() < b.k_star.real();
    return a.tuned->value < b.tuned->value;
  };
  std::sort(out.roots.begin(), out.roots.end(), by_k);
  std::sort(out.unconverged.begin(), out.unconverged.end(), by_k);
  return out;
}

}  // namespace detail

/// Spectral singularities: real k > 0 and parameter theta with M22(k, theta) = 0.
inline SearchResult find_ss(const Family& family, Window k_window, Window theta_window,
                            const SearchOptions& opt = {}) {
  return detail::find_zeros_2d(family, detail::entry_m22, k_window, theta_window, opt, Kind::LasingSS);
}

/// Coherent perfect absorption points: real k > 0 and theta with M11(k, theta) = 0.
inline SearchResult find_cpa(const Family& family, Window k_window, Window theta_window,
                             const SearchOptions& opt = {}) {
  return detail::find_zeros_2d(family, detail::entry_m11, k_window, theta_window, opt, Kind::CPA);
}

/// Axis-aligned rectangle in the complex k plane.
struct Rectangle {
  double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;

  double width() const { return re_hi - re_lo; }
  double height() const { return im_hi - im_lo; }
  cplx center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
  bool contains(cplx z, double slack = 0.0) const {
    return z.real() >= re_lo - slack && z.real() <= re_hi + slack && z.imag() >= im_lo - slack &&
           z.imag() <= im_hi + slack;
  }
  bool contains_origin() const { return contains(cplx{}); }
};

struct ResonanceOptions {
  double tol = 1e-8;
  /// Boxes smaller than this that still enclose several zeros are one multiple root.
  double cluster_radius = 1e-7;
  int edge_samples = 32;
  int max_depth = 60;
  RkOptions rk;
};

/// Location-based label for a complex zero of M22.
inline Kind classify_zero(cplx k, double axis_tol) {
  if (std::abs(k.imag()) <= axis_tol) return k.real() > 0.0 ? Kind::LasingSS : Kind::CPA;
  if (std::abs(k.real()) <= axis_tol) return k.imag() > 0.0 ? Kind::BoundState : Kind::VirtualState;
  return k.imag() > 0.0 ? Kind::BoundState : Kind::Resonance;
}

namespace detail {

struct ContourZero {};

class WindingCounter {
 public:
  WindingCounter(const std::function<cplx(cplx)>& f, int edge_samples, double zero_floor)
      : f_(f), samples_(edge_samples), floor_(zero_floor) {}

  /// Number of zeros minus poles of f inside r (argument principle).
  int count(const Rectangle& r) const {
    const std::array<cplx, 4> corners{cplx{r.re_lo, r.im_lo}, cplx{r.re_hi, r.im_lo},
                                      cplx{r.re_hi, r.im_hi}, cplx{r.re_lo, r.im_hi}};
    double turn = 0.0;
    for (int e = 0; e < 4; ++e) {
      const cplx a = corners[e], b = corners[(e + 1) % 4];
      cplx prev_z = a, prev_f = value(a);
      for (int s = 1; s <= samples_; ++s) {
        const cplx z = a + (b - a) * (static_cast<double>(s) / samples_);
        const cplx fz = value(z);
        turn += segment(prev_z, prev_f, z, fz, 0);
        prev_z = z;
        prev_f = fz;
      }
    }
    const double winds = turn / (2.0 * pi);
    if (std::abs(winds - std::round(winds)) > 0.05) throw ContourZero{};
    return static_cast<int>(std::lround(winds));
  }

 private:
  cplx value(cplx z) const {
    const cplx v = f_(z);
    if (!is_finite(v) || std::abs(v) <= floor_) throw ContourZero{};
    return v;
  }

  double segment(cplx za, cplx fa, cplx zb, cplx fb, int depth) const {
    const double d = std::arg(fb / fa);
    if (std::abs(d) < pi / 4.0 || depth > 24) return d;
    const cplx zm = 0.5 * (za + zb);
    const cplx fm = value(zm);
    return segment(za, fa, zm, fm, depth + 1) + segment(zm, fm, zb, fb, depth + 1);
  }

  const std::function<cplx(cplx)>& f_;
  int samples_;
  double floor_;
};

}  // namespace detail

/// Complex-k zeros of M22 inside a rectangle that excludes k = 0: bound states, virtual
/// states, resonances, and real spectral singularities. Counts zeros by the argument
/// principle, isolates them by subdivision, and polishes each with Newton.
inline std::vector<SingularityReport> find_resonances(const Potential& p, const Rectangle& rect,
                                                      const ResonanceOptions& opt = {}) {
  require(rect.width() > 0.0 && rect.height() > 0.0, "resonance rectangle must be non-empty");
  require(!rect.contains(cplx{}, 0.0), "resonance rectangle must exclude k = 0");
  require(opt.tol > 0.0, "resonance tolerance must be positive");
  const std::function<cplx(cplx)> f = [&](cplx k) { return transfer_matrix(p, k, opt.rk).m22; };
  const double floor = opt.tol * 1e-3;
  const detail::WindingCounter winding(f, opt.edge_samples, floor);

  int total = 0;
  try {
    total = winding.count(rect);
  } catch (const detail::ContourZero&) {
    throw InvalidArgument("find_resonances: a zero lies on (or too close to) the rectangle boundary");
  }

  std::vector<SingularityReport> found;
  const std::array<double, 3> fractions{0.4713, 0.5381, 0.4129};

  std::function<void(const Rectangle&, int, int)> isolate = [&](const Rectangle& r, int count,
                                                                int depth) {
    if (count == 0) return;
    const double size = std::max(r.width(), r.height());
    if (size < opt.cluster_radius || depth > opt.max_depth) {
      const auto nr = newton_complex(f, r.center(), opt.tol);
      const cplx at = r.contains(nr.z, size) ? nr.z : r.center();
      SingularityReport rep;
      rep.k_star = at;
      rep.residual = std::abs(f(at));
      rep.multiplicity = count;
      found.push_back(rep);
      return;
    }
    if (count == 1) {
      const auto nr = newton_complex(f, r.center(), opt.tol);
      if (nr.converged && r.contains(nr.z, 1e-12 * size)) {
        found.push_back({nr.z, std::nullopt, nr.residual, Kind::Resonance, 1});
        return;
      }
    }
    for (double frac : fractions) {
      const double xm = r.re_lo + frac * r.width();
      const double ym = r.im_lo + (1.0 - frac) * r.height();
      const std::array<Rectangle, 4> parts{Rectangle{r.re_lo, xm, r.im_lo, ym},
                                           Rectangle{xm, r.re_hi, r.im_lo, ym},
                                           Rectangle{r.re_lo, xm, ym, r.im_hi},
                                           Rectangle{xm, r.re_hi, ym, r.im_hi}};
      std::array<int, 4> counts{};
      try {
        for (int q = 0; q < 4; ++q) counts[q] = winding.count(parts[q]);
      } catch (const detail::ContourZero&) {
        continue;
      }
      if (counts[0] + counts[1] + counts[2] + counts[3] != count) continue;
      for (int q = 0; q < 4; ++q) isolate(parts[q], counts[q], depth + 1);
      return;
    }
    throw ConvergenceError("find_resonances: could not split a box enclosing " +
                           std::to_string(count) + " zeros");
  };
  isolate(rect, total, 0);

  int refined = 0;
  for (const auto& rep : found) refined += rep.multiplicity;
  if (refined != total)
    throw ConvergenceError("find_resonances: winding count " + std::to_string(total) +
                           " disagrees with " + std::to_string(refined) + " refined zeros");

  for (auto& rep : found) {
    rep.kind = classify_zero(rep.k_star, 1e-8 * std::max(1.0, std::abs(rep.k_star)));
    if (rep.kind == Kind::CPA) rep.k_star = -rep.k_star;  // M22(-k) = M11(k)
  }
  std::sort(found.begin(), found.end(), [](const SingularityReport& a, const SingularityReport& b) {
    if (a.k_star.real() != b.k_star.real()) return a.k_star.real() < b.k_star.real();
    return a.k_star.imag() < b.k_star.imag();
  });
  return found;
}

}  // namespace specsing
