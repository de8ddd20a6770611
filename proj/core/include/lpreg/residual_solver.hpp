#pragma once

#include "lpreg/low_precision.hpp"
#include "lpreg/system.hpp"
#include "lpreg/types.hpp"

#include <functional>
#include <utility>

namespace lpreg {

/// Mixed-objective subproblem min ||x^2||_p + <theta, x^2> over the system
/// obtained from A by appending the row g, with right-hand side zero except
/// a final entry of `target`.
struct ResidualProblem {
  double p_res = 2.0;  // norm exponent of the residual objective
  Matrix A;            // homogeneous rows (may be 0 x n)
  Vector g;            // the appended row
  double target = 0.0; // last entry of the augmented rhs
  Vector theta;        // nonnegative quadratic weights
  double M = 1.0;      // target value

  void validate() const;
};

struct ResidualStep {
  Vector r_before;
  Vector r_after;
  Vector x;  // objective part
  double M = 0.0;
  bool triggered = false;
};

struct ResidualHooks {
  std::function<void(const ResidualStep&)> on_step;
};

struct ResidualOutcome {
  SolveOutcome outcome;
  double kappa = 1.0;  // branch constant: 1 (small p) or q (large p)
  long iterations = 0;
  long linear_solves = 0;
};

/// Constant-factor solver for the mixed objective. Branches on the residual
/// exponent: when q = dual(p_res) >= ln m one weighted solve decides; the
/// large-p branch runs the primal-dual loop with trigger threshold 2 and
/// accumulator cap m^{2/(2q+1)}. Primal outputs satisfy ||x||_{2p} <= 2M and
/// <theta, x^2> <= OPT; certificates satisfy E(r/||r||_q + theta) >= M^2/(2 kappa).
/// A DegenerateDirection from the inner solves becomes a certificate (the
/// subproblem energy is unbounded along the requested row).
ResidualOutcome residual_solve(const ConstraintSystem& sys, double p_res,
                               const Vector& g, double target,
                               const Vector& theta, double M,
                               const ResidualHooks& hooks = {});
ResidualOutcome residual_solve(const ResidualProblem& prob,
                               const ResidualHooks& hooks = {});

/// Both sides of the Lemma-14 invariant with energies at r + theta:
/// (E(r_next + theta) - E(r_prev + theta), M^2 (||r_next||_q - ||r_prev||_q)).
/// Energies are evaluated on the augmented system (constraints of `sys`
/// plus <g, z> = target).
std::pair<double, double> residual_invariant_witness(
    const ConstraintSystem& sys, const Vector& g, double target,
    const Vector& theta, double q, const Vector& r_prev, const Vector& r_next,
    double M);

}  // namespace lpreg
