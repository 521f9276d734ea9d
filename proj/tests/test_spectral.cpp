#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "specsing/slablaser.hpp"
#include "specsing/spectral.hpp"

using namespace specsing;

namespace {

Family imaginary_delta() {
  return potential_family("alpha", [](double a) { return Potential::deltas({{0.0, cplx{0.0, a}}}); });
}

cplx barrier_m22(cplx v0, double len, cplx k) {
  const cplx q = std::sqrt(k * k - v0);
  return std::exp(I * k * len) * (std::cos(q * len) - I * (k * k + q * q) / (2.0 * k * q) * std::sin(q * len));
}

}  // namespace

TEST(Scan, EmptyMediumGivesIdentityRows) {
  const Window w{1.0, 2.0, 100};
  const auto ks = w.points();
  const auto rows = scan(Medium(), ks);
  ASSERT_EQ(rows.size(), 100u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.m.m11, cplx(1.0));
    EXPECT_EQ(r.m.m12, cplx(0.0));
    EXPECT_EQ(r.m.m21, cplx(0.0));
    EXPECT_EQ(r.m.m22, cplx(1.0));
    EXPECT_FALSE(r.singular());
  }
}

TEST(Scan, ThreadCountDoesNotChangeResults) {
  const auto ks = Window{0.3, 5.0, 64}.points();
  const Potential p = test::gaussian_samples();
  const auto a = scan(p, ks, 1), b = scan(p, ks, 4);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    EXPECT_EQ(a[i].m.m11, b[i].m.m11);
    EXPECT_EQ(a[i].m.m22, b[i].m.m22);
  }
}

TEST(Scan, RejectsBadGrids) {
  const std::vector<double> unsorted{1.0, 0.5}, nonpositive{0.0, 1.0};
  EXPECT_THROW(scan(Potential::zero(), unsorted), InvalidArgument);
  EXPECT_THROW(scan(Potential::zero(), nonpositive), InvalidArgument);
}

TEST(Scan, GainSlabHasPositiveDefect) {
  const auto ks = Window{0.5, 8.0, 50}.points();
  for (const auto& r : scan(slab_medium({3.0, -0.05}, 1.0), ks)) EXPECT_GT(r.defect.first, 0.0);
}

TEST(FindSs, ImaginaryDeltaLiesOnAlphaEqualsTwoK) {
  const SearchResult r = find_ss(imaginary_delta(), {0.5, 3.0}, {0.0, 8.0});
  ASSERT_FALSE(r.roots.empty());
  EXPECT_TRUE(r.unconverged.empty());
  double k_lo = 1e9, k_hi = 0.0;
  for (const auto& root : r.roots) {
    EXPECT_NEAR(root.tuned->value, 2.0 * root.k_star.real(), 1e-8);
    EXPECT_EQ(root.kind, Kind::LasingSS);
    EXPECT_EQ(root.tuned->name, "alpha");
    k_lo = std::min(k_lo, root.k_star.real());
    k_hi = std::max(k_hi, root.k_star.real());
  }
  // the line alpha = 2k crosses the whole k window
  EXPECT_LT(k_lo, 0.6);
  EXPECT_GT(k_hi, 2.9);
}

TEST(FindSs, RealFamiliesHaveNoSingularities) {
  const Family real_delta = potential_family("z", [](double z) { return Potential::deltas({{0.0, z}}); });
  EXPECT_TRUE(find_ss(real_delta, {0.5, 3.0}, {-8.0, 8.0}).roots.empty());
  const Family real_barrier =
      potential_family("h", [](double h) { return Potential::layers({{-1.0, 1.0, h}}); });
  EXPECT_TRUE(find_ss(real_barrier, {0.5, 5.0}, {-5.0, 5.0}).roots.empty());
}

TEST(FindSs, ParityPreservesSingularities) {
  const Family f = pt_bilayer_family(3.0, 1.0);
  const auto a = find_ss(f, {1.0, 6.0}, {0.0, 2.0});
  const auto b = find_ss(parity_family(f), {1.0, 6.0}, {0.0, 2.0});
  ASSERT_EQ(a.roots.size(), b.roots.size());
  for (std::size_t i = 0; i < a.roots.size(); ++i) {
    EXPECT_NEAR(a.roots[i].k_star.real(), b.roots[i].k_star.real(), 1e-8);
    EXPECT_NEAR(a.roots[i].tuned->value, b.roots[i].tuned->value, 1e-8);
  }
}

TEST(FindSs, PtBilayerRegression) {
  const auto r = find_ss(pt_bilayer_family(3.0, 1.0), {1.0, 6.0}, {0.0, 2.0});
  ASSERT_EQ(r.roots.size(), 2u);
  EXPECT_NEAR(r.roots[0].k_star.real(), 2.7263357861696, 1e-9);
  EXPECT_NEAR(r.roots[0].tuned->value, 0.800271345959793, 1e-9);
  EXPECT_NEAR(r.roots[1].k_star.real(), 4.78683023740924, 1e-9);
  EXPECT_NEAR(r.roots[1].tuned->value, 0.5429342358338, 1e-9);
}

TEST(FindSs, ValidatesWindows) {
  EXPECT_THROW(find_ss(imaginary_delta(), {0.0, 1.0}, {0.0, 1.0}), InvalidArgument);
  EXPECT_THROW(find_ss(imaginary_delta(), {1.0, 2.0}, {1.0, 1.0}), InvalidArgument);
}

TEST(FindCpa, TimeReversedGainSlab) {
  const Family gain = slab_family(3.0, 1.0);
  const Family loss =
      medium_family("kappa", [](double kappa) { return time_reverse(slab_medium({3.0, kappa}, 1.0)); });
  const auto ss = find_ss(gain, {1.0, 6.0}, {-0.3, -0.01});
  const auto cpa = find_cpa(loss, {1.0, 6.0}, {-0.3, -0.01});
  ASSERT_EQ(ss.roots.size(), 3u);
  ASSERT_EQ(cpa.roots.size(), ss.roots.size());
  for (std::size_t i = 0; i < ss.roots.size(); ++i) {
    EXPECT_NEAR(ss.roots[i].k_star.real(), cpa.roots[i].k_star.real(), 1e-8);
    EXPECT_NEAR(ss.roots[i].tuned->value, cpa.roots[i].tuned->value, 1e-8);
    EXPECT_EQ(cpa.roots[i].kind, Kind::CPA);
  }
}

TEST(Resonances, AttractiveDeltaBoundState) {
  const auto r = find_resonances(Potential::deltas({{0.0, -2.0}}), {-1.0, 1.0, 0.5, 1.5});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_LT(std::abs(r[0].k_star - I), 1e-8);
  EXPECT_EQ(r[0].kind, Kind::BoundState);
}

TEST(Resonances, RepulsiveDeltaVirtualState) {
  const auto r = find_resonances(Potential::deltas({{0.0, 2.0}}), {-1.0, 1.0, -1.5, -0.5});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_LT(std::abs(r[0].k_star + I), 1e-8);
  EXPECT_EQ(r[0].kind, Kind::VirtualState);
}

TEST(Resonances, BarrierPolesAreZerosOfClosedForm) {
  const Potential p = Potential::layers({{-1.0, 1.0, 2.0}});
  const auto r = find_resonances(p, {0.1, 5.0, -2.0, -0.01});
  ASSERT_EQ(r.size(), 3u);
  for (const auto& z : r) {
    EXPECT_EQ(z.kind, Kind::Resonance);
    EXPECT_LT(z.k_star.imag(), 0.0);
    EXPECT_LT(std::abs(barrier_m22(2.0, 2.0, z.k_star)), 1e-9);
  }
  // the mirror image -k^* is also a resonance of a real potential
  const auto mirrored = find_resonances(p, {-5.0, -0.1, -2.0, -0.01});
  ASSERT_EQ(mirrored.size(), r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    EXPECT_LT(std::abs(mirrored[r.size() - 1 - i].k_star + std::conj(r[i].k_star)), 1e-8);
}

TEST(Resonances, RejectsOriginAndBoundaryZeros) {
  EXPECT_THROW(find_resonances(Potential::deltas({{0.0, -2.0}}), {-1.0, 1.0, -1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(find_resonances(Potential::deltas({{0.0, -2.0}}), {-1.0, 1.0, 1.0, 2.0}), InvalidArgument);
}

TEST(Resonances, ClassifyZero) {
  EXPECT_EQ(classify_zero({2.0, 0.0}, 1e-9), Kind::LasingSS);
  EXPECT_EQ(classify_zero({-2.0, 0.0}, 1e-9), Kind::CPA);
  EXPECT_EQ(classify_zero({0.0, 1.0}, 1e-9), Kind::BoundState);
  EXPECT_EQ(classify_zero({0.0, -1.0}, 1e-9), Kind::VirtualState);
  EXPECT_EQ(classify_zero({1.0, -1.0}, 1e-9), Kind::Resonance);
}

TEST(Kind, Labels) {
  EXPECT_EQ(to_string(Kind::LasingSS), "lasing-SS");
  EXPECT_EQ(to_string(Kind::CPA), "CPA");
  EXPECT_EQ(to_string(Kind::Resonance), "resonance");
}
