#include "lpreg/low_precision.hpp"

#include "lpreg/numerics.hpp"
#include "lpreg/refinement.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lpreg;
using lpreg::testing::TestRng;

namespace {

Matrix row(std::initializer_list<double> vals) {
  Matrix m(1, static_cast<Index>(vals.size()));
  Index j = 0;
  for (double v : vals) m(0, j++) = v;
  return m;
}

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Index>(vals.size()));
  Index j = 0;
  for (double x : vals) v[j++] = x;
  return v;
}

}  // namespace

TEST(SubSolver, IdentityConstraintsCaseOne) {
  SubSolverConfig cfg;
  cfg.epsilon = 0.1;
  cfg.p = 2.0;
  cfg.M = 2.0;  // any M >= ||b||_4 / (1+eps)
  const auto res = sub_solver(Matrix::Identity(2, 2), vec({1, 1}), cfg);
  ASSERT_TRUE(res.outcome.is_primal());
  EXPECT_EQ(res.iterations, 1);
  EXPECT_NEAR(res.outcome.x[0], 1.0, 1e-10);
  EXPECT_NEAR(res.outcome.x[1], 1.0, 1e-10);
}

TEST(SubSolver, ScalarCaseOne) {
  SubSolverConfig cfg;
  cfg.epsilon = 0.2;
  cfg.p = 2.0;
  cfg.M = 5.0 / 1.2 + 0.1;
  const auto res = sub_solver(row({1}), vec({5}), cfg);
  ASSERT_TRUE(res.outcome.is_primal());
  EXPECT_NEAR(res.outcome.x[0], 5.0, 1e-10);
}

TEST(SubSolver, LowGuessProducesValidCertificate) {
  // l4 on x1 + x2 = 1: optimum 2^{-3/4} ~ 0.5946 >> M = 0.01
  const Matrix A = row({1, 1});
  const Vector b = vec({1});
  SubSolverConfig cfg;
  cfg.epsilon = 0.1;
  cfg.p = 2.0;
  cfg.M = 0.01;
  const auto res = sub_solver(A, b, cfg);
  ASSERT_FALSE(res.outcome.is_primal());
  const double q = dual_exponent(cfg.p);
  EXPECT_NEAR(lp_norm(res.outcome.r, q), 1.0, 1e-12);
  const double E = energy(A, b, res.outcome.r);
  EXPECT_GE(E, std::pow(cfg.M / (1.0 + cfg.epsilon), 2.0) * (1.0 - 1e-9));
}

TEST(SubSolver, PrimalOutputsMeetTheirBound) {
  TestRng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 2 + Index(rng.below(5));
    const Index d = 1 + Index(rng.below(std::uint64_t(n - 1)));
    const auto inst = lpreg::testing::random_feasible(rng, d, n);
    SubSolverConfig cfg;
    cfg.epsilon = 0.15;
    cfg.p = 2.0;
    PlainSystem sys(inst.A, inst.b);
    const double l2 = sys.minimize_energy(Vector::Ones(n)).x.norm();
    cfg.M = l2 * rng.uniform(0.3, 1.2);
    const auto res = sub_solver(sys, cfg);
    if (res.outcome.is_primal()) {
      EXPECT_LE(lp_norm(res.outcome.x, 2.0 * cfg.p),
                (1.0 + cfg.epsilon) * cfg.M * (1.0 + 1e-9));
      EXPECT_LE((inst.A * res.outcome.x - inst.b).norm(),
                1e-7 * (1.0 + inst.b.norm()));
    } else {
      const double q = dual_exponent(cfg.p);
      const double E = energy(inst.A, inst.b, res.outcome.r);
      EXPECT_GE(E, std::pow(cfg.M / (1.0 + cfg.epsilon), 2.0) * (1.0 - 1e-9));
    }
  }
}

TEST(SubSolver, DualMonotoneAndInvariantHolds) {
  const Matrix A = row({1, 1, 1});
  const Vector b = vec({1});
  PlainSystem sys(A, b);
  SubSolverConfig cfg;
  cfg.epsilon = 0.1;
  cfg.p = 2.0;
  cfg.M = 0.2;  // below the l4 optimum 3^{-3/4} ~ 0.438
  const double q = dual_exponent(cfg.p);
  long checked = 0;
  cfg.on_step = [&](const SubSolverStep& step) {
    // pointwise nondecreasing, strictly increasing somewhere
    EXPECT_TRUE((step.r_after.array() >= step.r_before.array() * (1 - 1e-15)).all());
    EXPECT_GT((step.r_after - step.r_before).cwiseAbs().maxCoeff(), 0.0);
    const auto [lhs, rhs] =
        invariant_witness(sys, q, step.r_before, step.r_after, step.M);
    EXPECT_GE(lhs, rhs * (1.0 - 1e-9));
    ++checked;
  };
  const auto res = sub_solver(sys, cfg);
  EXPECT_GT(checked, 0);
}

TEST(InvariantWitness, NoUpdateIsZero) {
  PlainSystem sys(row({1, 1}), vec({1}));
  const Vector r = Vector::Constant(2, 0.5);
  const auto [lhs, rhs] = invariant_witness(sys, 2.0, r, r, 1.0);
  EXPECT_EQ(lhs, 0.0);
  EXPECT_EQ(rhs, 0.0);
}

TEST(InvariantWitness, SingleCoordinateHandComputation) {
  // n=1, A=[1], b=[2]: E(r) = 4r, ||r||_q = r.
  PlainSystem sys(row({1}), vec({2}));
  const Vector r1 = Vector::Constant(1, 1.0);
  const Vector r2 = Vector::Constant(1, 3.0);
  const double M = 1.5;
  const auto [lhs, rhs] = invariant_witness(sys, 2.0, r1, r2, M);
  EXPECT_NEAR(lhs, 4.0 * (3.0 - 1.0), 1e-10);
  EXPECT_NEAR(rhs, M * M * (3.0 - 1.0), 1e-12);
}

TEST(L2pMinimization, IdentityReturnsB) {
  const auto res =
      l2p_minimization(Matrix::Identity(3, 3), vec({1, -2, 3}), 0.1, 2.0);
  EXPECT_NEAR(res.x[0], 1.0, 1e-9);
  EXPECT_NEAR(res.x[1], -2.0, 1e-9);
  EXPECT_NEAR(res.x[2], 3.0, 1e-9);
}

TEST(L2pMinimization, PEqualsOneIsLeastSquares) {
  const auto res = l2p_minimization(row({1, 1}), vec({1}), 0.1, 1.0);
  EXPECT_NEAR(res.x[0], 0.5, 1e-10);
  EXPECT_NEAR(res.x[1], 0.5, 1e-10);
}

TEST(L2pMinimization, SymmetricL4Optimum) {
  // min ||x||_4 over x1+x2+x3 = 1: optimum at (1/3,1/3,1/3), value 3^{-3/4}
  const double eps = 0.1;
  const auto res = l2p_minimization(row({1, 1, 1}), vec({1}), eps, 2.0);
  const double opt = std::pow(3.0, -0.75);
  EXPECT_LE(lp_norm(res.x, 4.0), (1.0 + eps) * opt);
}

TEST(L2pMinimization, WithinEpsOfHighAccuracyOracle) {
  TestRng rng(33);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = 2 + Index(rng.below(5));
    const Index d = 1 + Index(rng.below(std::uint64_t(n)));
    const auto inst = lpreg::testing::random_feasible(rng, d, n);
    const double p = rng.below(2) == 0 ? 2.0 : 4.0;
    const double eps = 0.1;
    const auto res = l2p_minimization(inst.A, inst.b, eps, p);
    const auto oracle = lp_refine(inst.A, inst.b, 2.0 * p, 1e-12);
    EXPECT_LE(lp_norm(res.x, 2.0 * p),
              (1.0 + eps) * oracle.objective * (1.0 + 1e-12))
        << "n=" << n << " d=" << d << " p=" << p;
  }
}

TEST(L2pMinimization, ProbeObserverSeesBinarySearch) {
  long probes = 0;
  long certs = 0;
  L2pOptions opts;
  opts.epsilon = 0.1;
  opts.p = 2.0;
  opts.on_probe = [&](const L2pProbe& probe) {
    ++probes;
    if (!probe.outcome->is_primal()) ++certs;
    EXPECT_GT(probe.M, 0.0);
  };
  PlainSystem sys(row({1, 1}), vec({1}));
  const auto res = l2p_minimization(sys, opts);
  EXPECT_EQ(res.probes, probes);
  EXPECT_GT(probes, 1);
}
