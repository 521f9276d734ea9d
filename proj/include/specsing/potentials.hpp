#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "specsing/core.hpp"

namespace specsing {

/// Constant complex value on [x_left, x_right].
struct Layer {
  double x_left = 0.0;
  double x_right = 0.0;
  cplx value;

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// strength * delta(x - position)
struct Delta {
  double position = 0.0;
  cplx strength;

  friend bool operator==(const Delta&, const Delta&) = default;
};

/// Values on a uniform grid spanning [x_min, x_max]; linearly interpolated in between
/// and identically zero outside.
struct Sampled {
  double x_min = 0.0;
  double x_max = 0.0;
  std::vector<cplx> values;

  double dx() const { return (x_max - x_min) / static_cast<double>(values.size() - 1); }
  double x(std::size_t i) const {
    return i + 1 == values.size() ? x_max : x_min + dx() * static_cast<double>(i);
  }

  friend bool operator==(const Sampled&, const Sampled&) = default;
};

/// A compactly supported, possibly complex, one-dimensional scattering potential.
/// Immutable once built; the factories validate ordering and finiteness.
class Potential {
 public:
  using Data = std::variant<std::vector<Layer>, std::vector<Delta>, Sampled>;

  Potential() : data_(std::vector<Layer>{}) {}

  static Potential zero() { return Potential(); }

  static Potential layers(std::vector<Layer> layers) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const Layer& l = layers[i];
      require(std::isfinite(l.x_left) && std::isfinite(l.x_right) && is_finite(l.value),
              "layer " + std::to_string(i) + " has non-finite data");
      require(l.x_left < l.x_right, "layer " + std::to_string(i) + " has x_left >= x_right");
      if (i > 0)
        require(layers[i - 1].x_right <= l.x_left,
                "layers must be disjoint and sorted (layer " + std::to_string(i) + ")");
    }
    return Potential(Data(std::move(layers)));
  }

  static Potential deltas(std::vector<Delta> deltas) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      require(std::isfinite(deltas[i].position) && is_finite(deltas[i].strength),
              "delta " + std::to_string(i) + " has non-finite data");
      if (i > 0)
        require(deltas[i - 1].position < deltas[i].position,
                "delta positions must be strictly increasing");
    }
    return Potential(Data(std::move(deltas)));
  }

  static Potential sampled(double x_min, double x_max, std::vector<cplx> values) {
    require(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max,
            "sampled support must be a finite interval with x_min < x_max");
    require(values.size() >= 2, "sampled potential needs at least two samples");
    for (const cplx& v : values) require(is_finite(v), "sampled potential has non-finite values");
    return Potential(Data(Sampled{x_min, x_max, std::move(values)}));
  }

  const Data& data() const { return data_; }

  template <typename T>
  const T* get_if() const { return std::get_if<T>(&data_); }

  bool is_zero() const {
    if (const auto* l = get_if<std::vector<Layer>>())
      return std::all_of(l->begin(), l->end(), [](const Layer& x) { return x.value == cplx{}; });
    if (const auto* d = get_if<std::vector<Delta>>())
      return std::all_of(d->begin(), d->end(), [](const Delta& x) { return x.strength == cplx{}; });
    const auto& s = std::get<Sampled>(data_);
    return std::all_of(s.values.begin(), s.values.end(), [](cplx v) { return v == cplx{}; });
  }

  bool is_real() const {
    if (const auto* l = get_if<std::vector<Layer>>())
      return std::all_of(l->begin(), l->end(), [](const Layer& x) { return x.value.imag() == 0.0; });
    if (const auto* d = get_if<std::vector<Delta>>())
      return std::all_of(d->begin(), d->end(), [](const Delta& x) { return x.strength.imag() == 0.0; });
    const auto& s = std::get<Sampled>(data_);
    return std::all_of(s.values.begin(), s.values.end(), [](cplx v) { return v.imag() == 0.0; });
  }

  /// Support bounds; both zero for an empty potential.
  double x_min() const {
    if (const auto* l = get_if<std::vector<Layer>>()) return l->empty() ? 0.0 : l->front().x_left;
    if (const auto* d = get_if<std::vector<Delta>>()) return d->empty() ? 0.0 : d->front().position;
    return std::get<Sampled>(data_).x_min;
  }
  double x_max() const {
    if (const auto* l = get_if<std::vector<Layer>>()) return l->empty() ? 0.0 : l->back().x_right;
    if (const auto* d = get_if<std::vector<Delta>>()) return d->empty() ? 0.0 : d->back().position;
    return std::get<Sampled>(data_).x_max;
  }

  friend bool operator==(const Potential&, const Potential&) = default;

 private:
  explicit Potential(Data data) : data_(std::move(data)) {}
  Data data_;
};

/// Layer of refractive index n = eta + i*kappa on [x_left, x_right].
struct MediumLayer {
  double x_left = 0.0;
  double x_right = 0.0;
  cplx n{1.0, 0.0};

  double eta() const { return n.real(); }
  double kappa() const { return n.imag(); }

  friend bool operator==(const MediumLayer&, const MediumLayer&) = default;
};

/// Layered optical medium in vacuum (n = 1 outside every layer).
class Medium {
 public:
  Medium() = default;
  explicit Medium(std::vector<MediumLayer> layers) : layers_(std::move(layers)) {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const MediumLayer& l = layers_[i];
      require(std::isfinite(l.x_left) && std::isfinite(l.x_right) && is_finite(l.n),
              "medium layer " + std::to_string(i) + " has non-finite data");
      require(l.x_left < l.x_right, "medium layer " + std::to_string(i) + " has x_left >= x_right");
      require(l.n.real() > 0.0, "medium layer " + std::to_string(i) + " needs Re n > 0");
      if (i > 0)
        require(layers_[i - 1].x_right <= l.x_left,
                "medium layers must be disjoint and sorted (layer " + std::to_string(i) + ")");
    }
  }

  const std::vector<MediumLayer>& layers() const { return layers_; }
  bool empty() const { return layers_.empty(); }

  friend bool operator==(const Medium&, const Medium&) = default;

 private:
  std::vector<MediumLayer> layers_;
};

/// Homogeneous slab of index n on [-L/2, L/2].
inline Medium slab_medium(cplx n, double length) {
  require(length > 0.0, "slab length must be positive");
  return Medium({{-0.5 * length, 0.5 * length, n}});
}

/// Optical potential v(x) = k^2 (1 - n(x)^2) at wavenumber k. Vacuum layers (n == 1) are dropped.
inline Potential from_medium(const Medium& medium, double k) {
  require(k > 0.0 && std::isfinite(k), "from_medium: wavenumber must be positive");
  std::vector<Layer> out;
  out.reserve(medium.layers().size());
  const double k2 = k * k;
  for (const MediumLayer& l : medium.layers()) {
    if (l.n == cplx{1.0, 0.0}) continue;
    out.push_back({l.x_left, l.x_right, k2 * (1.0 - l.n * l.n)});
  }
  return Potential::layers(std::move(out));
}

/// \int (1 + |x|) |v(x)| dx. Delta combs use the sum analogue, sampled data the trapezoid rule.
inline double moment_norm(const Potential& p) {
  if (const auto* layers = p.get_if<std::vector<Layer>>()) {
    // antiderivative of 1 + |x|
    auto F = [](double x) { return x + 0.5 * x * std::abs(x); };
    double total = 0.0;
    for (const Layer& l : *layers) total += std::abs(l.value) * (F(l.x_right) - F(l.x_left));
    return total;
  }
  if (const auto* deltas = p.get_if<std::vector<Delta>>()) {
    double total = 0.0;
    for (const Delta& d : *deltas) total += (1.0 + std::abs(d.position)) * std::abs(d.strength);
    return total;
  }
  const Sampled& s = *p.get_if<Sampled>();
  const std::size_t n = s.values.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    total += w * (1.0 + std::abs(s.x(i))) * std::abs(s.values[i]);
  }
  return total * s.dx();
}

/// v(x) -> v(x)^*
inline Potential time_reverse(const Potential& p) {
  if (const auto* layers = p.get_if<std::vector<Layer>>()) {
    std::vector<Layer> out = *layers;
    for (Layer& l : out) l.value = std::conj(l.value);
    return Potential::layers(std::move(out));
  }
  if (const auto* deltas = p.get_if<std::vector<Delta>>()) {
    std::vector<Delta> out = *deltas;
    for (Delta& d : out) d.strength = std::conj(d.strength);
    return Potential::deltas(std::move(out));
  }
  const Sampled& s = *p.get_if<Sampled>();
  std::vector<cplx> values = s.values;
  for (cplx& v : values) v = std::conj(v);
  return Potential::sampled(s.x_min, s.x_max, std::move(values));
}

/// n(x) -> n(x)^*: turns gain layers into lossy ones and vice versa.
inline Medium time_reverse(const Medium& m) {
  std::vector<MediumLayer> out = m.layers();
  for (MediumLayer& l : out) l.n = std::conj(l.n);
  return Medium(std::move(out));
}

/// v(x) -> v(-x)
inline Potential parity_transform(const Potential& p) {
  if (const auto* layers = p.get_if<std::vector<Layer>>()) {
    std::vector<Layer> out;
    out.reserve(layers->size());
    for (auto it = layers->rbegin(); it != layers->rend(); ++it)
      out.push_back({-it->x_right, -it->x_left, it->value});
    return Potential::layers(std::move(out));
  }
  if (const auto* deltas = p.get_if<std::vector<Delta>>()) {
    std::vector<Delta> out;
    out.reserve(deltas->size());
    for (auto it = deltas->rbegin(); it != deltas->rend(); ++it)
      out.push_back({-it->position, it->strength});
    return Potential::deltas(std::move(out));
  }
  const Sampled& s = *p.get_if<Sampled>();
  std::vector<cplx> values(s.values.rbegin(), s.values.rend());
  return Potential::sampled(-s.x_max, -s.x_min, std::move(values));
}

inline Medium parity_transform(const Medium& m) {
  std::vector<MediumLayer> out;
  out.reserve(m.layers().size());
  for (auto it = m.layers().rbegin(); it != m.layers().rend(); ++it)
    out.push_back({-it->x_right, -it->x_left, it->n});
  return Medium(std::move(out));
}

/// zeta-controlled imaginary barrier: -i*zeta on [-1, 0], +i*zeta on [0, 1].
inline Potential pt_barrier(double zeta) {
  return Potential::layers({{-1.0, 0.0, cplx{0.0, -zeta}}, {0.0, 1.0, cplx{0.0, zeta}}});
}

/// z_minus * delta(x + a) + z_plus * delta(x - a), a > 0.
inline Potential double_delta(cplx z_minus, cplx z_plus, double a) {
  require(a > 0.0, "double_delta: separation parameter must be positive");
  return Potential::deltas({{-a, z_minus}, {a, z_plus}});
}

}  // namespace specsing
