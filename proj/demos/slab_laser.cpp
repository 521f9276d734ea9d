// Threshold gain and lasing modes of a homogeneous slab, checked against the
// transfer-matrix spectral-singularity search.
#include <cstdio>

#include "specsing/specsing.hpp"

using namespace specsing;

int main() {
  const double eta = 3.0, length = 1.0;
  std::printf("g_th = %.9f\n", threshold_gain(eta, length));

  const auto modes = lasing_modes(eta, length, {10.0, 14.0});
  std::printf("%6s %18s %20s %14s\n", "m", "k", "kappa", "gain");
  for (const auto& m : modes) std::printf("%6d %18.12f %20.14f %14.9f\n", m.index, m.k, m.kappa, m.gain);

  SearchOptions opt;
  opt.k_points = 200;
  opt.theta_points = 60;
  const auto ss = find_ss(slab_family(eta, length), {10.0, 14.0}, {-0.1, -0.03}, opt);
  std::printf("find_ss on the slab medium:\n");
  for (const auto& r : ss.roots)
    std::printf("  k = %.12f  kappa = %.14f  |M22| = %.2e\n", r.k_star.real(), r.tuned->value, r.residual);
}
