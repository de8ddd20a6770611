#pragma once

#include "lpreg/system.hpp"
#include "lpreg/types.hpp"

#include <functional>
#include <utility>

namespace lpreg {

/// Primal solution or normalized infeasibility certificate (||r||_q = 1).
struct SolveOutcome {
  enum class Kind { Primal, Certificate };
  Kind kind = Kind::Primal;
  Vector x;  // full iterate when Primal
  Vector r;  // normalized dual when Certificate

  bool is_primal() const { return kind == Kind::Primal; }
};

/// SubSolver state: positive nondecreasing dual r, step counter, and the
/// running sum of low-step primal iterates.
struct DualIterate {
  Vector r;
  long t = 0;
  Vector s;
  long t_low = 0;
};

/// One dual update, reported to observers when gamma != 1 was possible.
struct SubSolverStep {
  Vector r_before;
  Vector r_after;
  Vector x;  // objective part of the iterate that produced the step
  double M = 0.0;
  bool triggered = false;
};

struct SubSolverConfig {
  double epsilon = 0.1;
  double M = 1.0;
  double p = 2.0;       // half exponent: the solver targets || . ||_{2p}
  double step_cap = 0;  // 0 -> n^{2/(2q+1)} (1/eps)^{(q-1)/(2q+1)}
  long max_iterations = 0;  // 0 -> safety default (see implementation)
  std::function<void(const SubSolverStep&)> on_step;
};

struct SubSolverResult {
  SolveOutcome outcome;
  long iterations = 0;  // one weighted LS solve per iteration
};

/// Algorithm: primal-dual subsolver for min ||x||_{2p} s.t. feasibility,
/// guessing the optimum M. Returns a primal x with ||x||_{2p} <= (1+eps) M
/// (no coordinate triggers, or the low-step average passes its check) or a
/// certificate with E(r)/||r||_q >= (M/(1+eps))^2.
SubSolverResult sub_solver(const ConstraintSystem& sys,
                           const SubSolverConfig& cfg);
SubSolverResult sub_solver(const Matrix& A, const Vector& b,
                           const SubSolverConfig& cfg);

struct L2pProbe {
  double M = 0.0;
  double epsilon = 0.0;  // epsilon the subsolver ran with
  const SolveOutcome* outcome = nullptr;
  long iterations = 0;
};

struct L2pOptions {
  double epsilon = 0.1;
  double p = 2.0;
  std::function<void(const L2pProbe&)> on_probe;
  std::function<void(const SubSolverStep&)> on_step;
};

struct L2pResult {
  Vector x;
  long linear_solves = 0;
  long probes = 0;
};

/// Binary search over M = (1+eps')^i driving the subsolver; returns x with
/// ||x||_{2p} <= (1+eps) * optimum. The search runs at eps' = eps/4: a
/// certificate only proves opt >= M/(1+eps'), so the literal grid gives
/// (1+eps')^3 and the quarter restores the contract.
L2pResult l2p_minimization(const ConstraintSystem& sys, const L2pOptions& opts);
L2pResult l2p_minimization(const Matrix& A, const Vector& b, double epsilon,
                           double p);

/// Both sides of the dual invariant at one step:
/// (E(r_next) - E(r_prev), M^2 (||r_next||_q - ||r_prev||_q)),
/// each energy evaluated by a fresh weighted LS solve.
std::pair<double, double> invariant_witness(const ConstraintSystem& sys,
                                            double q, const Vector& r_prev,
                                            const Vector& r_next, double M);
std::pair<double, double> invariant_witness(const ConstraintSystem& sys,
                                            double q, const DualIterate& prev,
                                            const DualIterate& next, double M);

}  // namespace lpreg
