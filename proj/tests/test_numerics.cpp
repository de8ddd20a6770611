#include "lpreg/numerics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lpreg;
using lpreg::testing::TestRng;

TEST(LpNorm, Euclidean) {
  Vector x(2);
  x << 3.0, 4.0;
  EXPECT_DOUBLE_EQ(lp_norm(x, 2.0), 5.0);
}

TEST(LpNorm, AllOnesClosedForm) {
  for (Index n : {1, 3, 17}) {
    const Vector x = Vector::Ones(n);
    for (double p : {1.0, 2.0, 3.5, 8.0})
      EXPECT_NEAR(lp_norm(x, p), std::pow(double(n), 1.0 / p), 1e-14);
  }
}

TEST(LpNorm, OverflowGuard) {
  Vector x(2);
  x << 1e200, 1e200;
  EXPECT_NEAR(lp_norm(x, 8.0), 1e200 * std::pow(2.0, 0.125), 1e186);
}

TEST(LpNorm, ZeroVector) {
  EXPECT_EQ(lp_norm(Vector::Zero(5), 3.0), 0.0);
  EXPECT_EQ(lp_norm(Vector(0), 3.0), 0.0);
}

TEST(LpNorm, HomogeneousAndMonotoneInP) {
  TestRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + Index(rng.below(6));
    const Vector x = rng.normal_vector(n);
    const double c = rng.uniform(-3.0, 3.0);
    const double p1 = rng.uniform(1.0, 6.0);
    const double p2 = p1 + rng.uniform(0.0, 6.0);
    EXPECT_NEAR(lp_norm(c * x, p1), std::abs(c) * lp_norm(x, p1),
                1e-12 * (1.0 + lp_norm(x, p1)));
    EXPECT_GE(lp_norm(x, p1), lp_norm(x, p2) * (1.0 - 1e-12));
  }
}

TEST(LpNorm, SandwichAgainstL2) {
  // ||x||_2 / n^{1/2 - 1/(2p)} <= ||x||_{2p} <= ||x||_2
  TestRng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + Index(rng.below(8));
    const Vector x = rng.normal_vector(n);
    const double p = rng.uniform(1.0, 8.0);
    const double l2 = x.norm();
    const double l2p = lp_norm(x, 2.0 * p);
    EXPECT_LE(l2p, l2 * (1.0 + 1e-12));
    EXPECT_GE(l2p, l2 / std::pow(double(n), 0.5 - 0.5 / (2.0 * p)) *
                       (1.0 - 1e-12));
  }
}

TEST(NormParams, DualExponent) {
  EXPECT_DOUBLE_EQ(dual_exponent(2.0), 2.0);
  EXPECT_DOUBLE_EQ(dual_exponent(4.0), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(NormParams::primal(1.5).q, 3.0);
  EXPECT_THROW(dual_exponent(1.0), SolverError);
}

TEST(GammaStep, ZeroIterateNeverTriggers) {
  const Vector x = Vector::Zero(4);
  const Vector r = Vector::Constant(4, 0.3);
  const GammaStep gs = gamma_step_detail(x, r, 2.0, 2.0, 1.1);
  EXPECT_FALSE(gs.any_triggered);
  EXPECT_TRUE(gs.gamma.isApprox(Vector::Ones(4)));
}

TEST(GammaStep, SingleCoordinateDirectFormula) {
  // n=1, r=(1): ||r||_q = 1, ratio = x^2 = 4 M^2 >= 2 M^2 -> gamma = 4
  const double M = 3.0;
  Vector x(1), r(1);
  x << 2.0 * M;
  r << 1.0;
  const Vector g = gamma_step(x, r, M, 2.0, 2.0);
  EXPECT_NEAR(g[0], 4.0, 1e-12);
}

TEST(GammaStep, MatchesBruteReimplementation) {
  TestRng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 6;
    Vector x = rng.normal_vector(n);
    Vector r = rng.uniform_vector(n, 0.05, 2.0);
    const double M = rng.uniform(0.1, 3.0);
    const double q = rng.uniform(1.1, 5.0);
    const double thr = rng.uniform(1.01, 2.0);
    const GammaStep gs = gamma_step_detail(x, r, M, q, thr);

    // independent oracle: plain pow arithmetic
    double rq = 0.0;
    for (Index i = 0; i < n; ++i) rq += std::pow(r[i], q);
    rq = std::pow(rq, 1.0 / q);
    for (Index i = 0; i < n; ++i) {
      const double ratio =
          x[i] * x[i] * std::pow(rq, q - 1.0) / std::pow(r[i], q - 1.0);
      const bool trig = ratio >= thr * M * M;
      EXPECT_EQ(gs.triggered[i], trig);
      const double expected = trig ? ratio / (M * M) : 1.0;
      EXPECT_NEAR(gs.gamma[i], expected, 1e-9 * expected);
    }
  }
}

TEST(GammaStep, TriggerSetReproducible) {
  TestRng rng(14);
  const Vector x = rng.normal_vector(8);
  const Vector r = rng.uniform_vector(8, 0.01, 1.0);
  const GammaStep a = gamma_step_detail(x, r, 0.7, 3.0, 1.05);
  const GammaStep b = gamma_step_detail(x, r, 0.7, 3.0, 1.05);
  for (Index i = 0; i < 8; ++i) {
    EXPECT_EQ(a.triggered[i], b.triggered[i]);
    EXPECT_EQ(a.gamma[i], b.gamma[i]);
  }
}

TEST(GammaStep, ExtremeExponentStaysUsable) {
  // q large enough that raw gamma overflows; alpha must stay finite.
  Vector x(3), r(3);
  x << 1e8, 0.0, 1e-3;
  r << 1e-6, 0.5, 0.5;
  const double q = 200.0;
  const GammaStep gs = gamma_step_detail(x, r, 1.0, q, 2.0);
  ASSERT_TRUE(gs.any_triggered);
  const Vector alpha = alpha_from_gamma(gs, q);
  EXPECT_TRUE(alpha.allFinite());
  EXPECT_GE(alpha.minCoeff(), 1.0);
}

TEST(AlphaFromGamma, Identities) {
  EXPECT_TRUE(alpha_from_gamma(Vector::Ones(5), 3.0)
                  .isApprox(Vector::Ones(5)));
  Vector g(1);
  g << 16.0;
  EXPECT_NEAR(alpha_from_gamma(g, 2.0)[0], 4.0, 1e-14);
  const double q = 7.0;
  g[0] = std::pow(2.0, q);
  EXPECT_NEAR(alpha_from_gamma(g, q)[0], 2.0, 1e-12);
}

TEST(AlphaFromGamma, OneWhereGammaOne) {
  Vector g(3);
  g << 1.0, 9.0, 1.0;
  const Vector a = alpha_from_gamma(g, 2.0);
  EXPECT_EQ(a[0], 1.0);
  EXPECT_EQ(a[2], 1.0);
  EXPECT_NEAR(a[1], 3.0, 1e-14);
}
