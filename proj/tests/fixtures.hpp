#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "specsing/potentials.hpp"

namespace specsing::test {

inline Potential gaussian_samples(cplx amplitude = {1.0, -0.5}, double half_width = 4.0, std::size_t n = 801) {
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(n - 1);
    v[i] = amplitude * std::exp(-x * x);
  }
  return Potential::sampled(-half_width, half_width, std::move(v));
}

/// Test potentials as functions of k (optical media are materialized at each k).
inline std::vector<std::pair<std::string, std::function<Potential(double)>>> bundled_potentials() {
  return {
      {"delta", [](double) { return Potential::deltas({{0.0, {0.0, 1.5}}}); }},
      {"double-delta", [](double) { return double_delta({1.0, 0.5}, {-0.5, 2.0}, 0.75); }},
      {"real-barrier", [](double) { return Potential::layers({{-1.0, 1.0, 2.0}}); }},
      {"complex-barrier", [](double) { return Potential::layers({{-1.0, 1.0, {2.0, -0.8}}}); }},
      {"pt-barrier", [](double) { return pt_barrier(0.6); }},
      {"pt-bilayer",
       [](double k) { return from_medium(Medium({{-0.5, 0.0, {3.0, -0.05}}, {0.0, 0.5, {3.0, 0.05}}}), k); }},
      {"gain-slab", [](double k) { return from_medium(slab_medium({3.0, -0.05}, 1.0), k); }},
      {"sampled-gaussian", [](double) { return gaussian_samples(); }},
  };
}

}  // namespace specsing::test
