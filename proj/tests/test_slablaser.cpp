#include <gtest/gtest.h>

#include <cmath>

#include "specsing/slablaser.hpp"

using namespace specsing;

TEST(Threshold, ClosedFormValues) {
  EXPECT_NEAR(threshold_gain(3.0, 1.0), 2.0 * std::log(2.0), 1e-15);
  EXPECT_NEAR(threshold_gain(3.0, 1.0), 1.386294, 1e-6);
  // eta = 2: R = 1/9, so g = ln(81) / (2L)
  EXPECT_NEAR(threshold_gain(2.0, 0.5), std::log(81.0), 1e-14);
  // eta = 5: R = 4/9
  EXPECT_NEAR(threshold_gain(5.0, 1.0), std::log(2.25), 1e-14);
  EXPECT_NEAR(threshold_gain(1.0 / 3.0, 1.0), threshold_gain(3.0, 1.0), 1e-14);
}

TEST(Threshold, UnitIndexHasNoThreshold) {
  EXPECT_TRUE(std::isinf(threshold_gain(1.0, 1.0)));
  EXPECT_TRUE(lasing_modes(1.0, 1.0, {1.0, 50.0}).empty());
  EXPECT_THROW(threshold_gain(3.0, 0.0), InvalidArgument);
}

TEST(GainCoefficient, Conversion) {
  EXPECT_DOUBLE_EQ(gain_coefficient(-1.0, 4.0 * pi), 1.0);
  EXPECT_DOUBLE_EQ(gain_coefficient(0.5, 2.0 * pi), -1.0);
}

TEST(Reflectivity, Values) {
  EXPECT_DOUBLE_EQ(reflectivity(cplx{3.0}).real(), 0.25);
  EXPECT_LT(std::abs(ss_residual(cplx{3.0}, pi / 3.0, 1.0) - 0.75), 1e-15);
  EXPECT_THROW(ss_residual(cplx{3.0}, 0.0, 1.0), InvalidArgument);
}

TEST(Modes, ResidualAndSeeds) {
  const auto modes = lasing_modes(3.0, 1.0, {1.0, 40.0});
  ASSERT_FALSE(modes.empty());
  for (const auto& m : modes) {
    EXPECT_TRUE(m.converged);
    EXPECT_LT(std::abs(ss_residual({3.0, m.kappa}, m.k, 1.0)), 1e-10);
    EXPECT_LT(m.kappa, 0.0);
    // Newton moves the real-index seed only slightly
    EXPECT_NEAR(m.k, pi * m.index / 3.0, 0.05);
  }
  EXPECT_EQ(modes.front().index, 1);
}

TEST(Modes, RegressionModeTen) {
  const auto modes = lasing_modes(3.0, 1.0, {10.0, 10.6});
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_EQ(modes[0].index, 10);
  EXPECT_NEAR(modes[0].k, 10.47748173597799, 1e-11);
  EXPECT_NEAR(modes[0].kappa, -0.06611680706860855, 1e-13);
  EXPECT_NEAR(modes[0].gain, 1.3854752770050531, 1e-11);
}

TEST(Modes, GainEqualsComplexIndexThreshold) {
  for (const auto& m : lasing_modes(3.0, 1.0, {1.0, 60.0}))
    EXPECT_NEAR(m.gain, threshold_gain(cplx{3.0, m.kappa}, 1.0), 1e-12 * m.gain);
}

TEST(Modes, GainApproachesRealIndexThreshold) {
  const double g = threshold_gain(3.0, 1.0);
  double previous = 1.0;
  for (double k : {10.0, 100.0, 1000.0}) {
    const auto modes = lasing_modes(3.0, 1.0, {k, k + 1.1});
    ASSERT_FALSE(modes.empty());
    const double rel = std::abs(modes.front().gain / g - 1.0);
    EXPECT_LT(rel, previous);
    previous = rel;
  }
  EXPECT_LT(previous, 1e-6);
}

TEST(Modes, SpacingApproachesPiOverEtaL) {
  for (double eta : {1.5, 3.0}) {
    const auto modes = lasing_modes(eta, 2.0, {30.0, 60.0});
    ASSERT_GE(modes.size(), 3u);
    for (std::size_t i = 1; i < modes.size(); ++i)
      EXPECT_NEAR((modes[i].k - modes[i - 1].k) / (pi / (eta * 2.0)), 1.0, 5e-3);
  }
}

TEST(Modes, MatchTransferMatrixSingularities) {
  for (const auto& m : lasing_modes(3.0, 1.0, {2.0, 8.0})) {
    const TransferMatrix M = transfer_matrix(slab_medium({3.0, m.kappa}, 1.0), m.k);
    EXPECT_LT(std::abs(M.m22), 1e-9);
  }
}

TEST(Modes, RejectBadInput) {
  EXPECT_THROW(lasing_modes(-3.0, 1.0, {1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(lasing_modes(3.0, 1.0, {0.0, 2.0}), InvalidArgument);
  EXPECT_THROW(lasing_modes(3.0, 1.0, {2.0, 1.0}), InvalidArgument);
}

class Nonlinear : public ::testing::Test {
 protected:
  void SetUp() override {
    mode = lasing_modes(3.0, 1.0, {10.0, 10.6}).at(0);
    spec = SlabSpec{3.0, 0.0, 1.0, 2.0 * pi / mode.k, 0.01};
    g_th = threshold_gain(3.0, 1.0);
  }
  SlabSpec at_gain(double g) const {
    SlabSpec s = spec;
    s.kappa = -g * spec.wavelength / (4.0 * pi);
    return s;
  }
  LasingMode mode;
  SlabSpec spec;
  double g_th = 0.0;
};

TEST_F(Nonlinear, NoSolutionBelowThreshold) {
  for (double r : {0.9, 0.99, 0.999}) {
    const NonlinearResult res = nonlinear_outgoing_solve(at_gain(r * g_th), mode);
    EXPECT_EQ(res.status, NonlinearStatus::NoSolution) << r;
    EXPECT_LT(res.kerr_shift, 0.0);
    EXPECT_EQ(res.intensity, 0.0);
  }
}

TEST_F(Nonlinear, IntensityVanishesAtThreshold) {
  SlabSpec s = spec;
  s.kappa = mode.kappa;
  const NonlinearResult res = nonlinear_outgoing_solve(s, mode);
  EXPECT_EQ(res.status, NonlinearStatus::Lasing);
  EXPECT_LT(res.intensity, 1e-6);
  EXPECT_NEAR(res.k, mode.k, 1e-8);
}

TEST_F(Nonlinear, RegressionAtFivePercentAboveThreshold) {
  const NonlinearResult res = nonlinear_outgoing_solve(at_gain(1.05 * g_th), mode);
  ASSERT_EQ(res.status, NonlinearStatus::Lasing);
  EXPECT_NEAR(res.intensity, 127.300942363, 1e-5);
  EXPECT_NEAR(res.k, 9.978790648379, 1e-8);
}

TEST_F(Nonlinear, IntensityScalesInverselyWithSigma) {
  const NonlinearResult a = nonlinear_outgoing_solve(at_gain(1.05 * g_th), mode);
  SlabSpec s = at_gain(1.05 * g_th);
  s.sigma = 0.001;
  const NonlinearResult b = nonlinear_outgoing_solve(s, mode);
  EXPECT_NEAR(b.intensity * 0.001, a.intensity * 0.01, 1e-8);
}

TEST_F(Nonlinear, WeakKerrRecoversLinearMode) {
  double previous = 1.0;
  for (double sigma : {1e-2, 1e-4, 1e-6}) {
    SlabSpec s = spec;
    s.sigma = sigma;
    const NonlinearResult r = nonlinear_mode_at_intensity(s, 1.0, mode);
    ASSERT_EQ(r.status, NonlinearStatus::Lasing);
    const double d = std::abs(r.k - mode.k);
    EXPECT_LT(d, previous);
    previous = d;
  }
  EXPECT_LT(previous, 1e-6);
}

TEST_F(Nonlinear, CurveIsLinearNearThreshold) {
  std::vector<double> gains;
  for (int i = 1; i <= 10; ++i) gains.push_back(g_th * (1.0 + 0.01 * i));
  const IntensityCurve c = intensity_curve(spec, mode, gains);
  ASSERT_EQ(c.points.size(), gains.size());
  EXPECT_GT(c.r_squared, 0.99);
  EXPECT_NEAR(c.threshold_fit / g_th, 1.0, 0.02);
  EXPECT_GT(c.slope, 0.0);
  for (std::size_t i = 1; i < c.points.size(); ++i) EXPECT_GT(c.points[i].intensity, c.points[i - 1].intensity);
}

TEST_F(Nonlinear, CurveRejectsGainsOutsideRange) {
  const std::vector<double> below{0.9 * g_th, 1.05 * g_th}, above{1.05 * g_th, 1.3 * g_th};
  EXPECT_THROW(intensity_curve(spec, mode, below), InvalidArgument);
  EXPECT_THROW(intensity_curve(spec, mode, above), InvalidArgument);
  SlabSpec linear = spec;
  linear.sigma = 0.0;
  const std::vector<double> ok{1.01 * g_th, 1.02 * g_th};
  EXPECT_THROW(intensity_curve(linear, mode, ok), InvalidArgument);
}
