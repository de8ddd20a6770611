#pragma once

#include "lpreg/residual_solver.hpp"
#include "lpreg/system.hpp"
#include "lpreg/types.hpp"

#include <array>
#include <functional>

namespace lpreg {

/// g = |x|^{p-2} x and R = 2 |x|^{p-2}, with g_i = R_i = 0 where x_i = 0.
struct ResidualGradientPair {
  Vector g;
  Vector R;

  static ResidualGradientPair from(const Vector& x, double p);
};

/// Driver state after each step, for observers.
struct RefinementState {
  Vector x;                     // full iterate
  double M = 0.0;               // gap bound
  double kappa = 1.0;
  long t = 0;
  long linear_solve_count = 0;
};

/// Context of one residual-solver call (for certificate validation).
struct ResidualCallContext {
  double p_res = 2.0;
  Vector g;        // objective-block gradient row
  double target = 0.0;
  Vector theta;
  double M = 1.0;  // residual target value
};

struct RefineOptions {
  double epsilon = 1e-8;
  long max_steps = 0;       // 0 -> max(10'000, 1000 p^2 ln n ln(n/eps))
  bool line_search = true;  // exact search along the residual direction
  std::function<void(const RefinementState&)> on_state;
  std::function<void(const ResidualCallContext&, const ResidualOutcome&)>
      on_residual;
  ResidualHooks residual_hooks;
};

struct RefineResult {
  Vector x;                 // full iterate; objective part carries the norm
  double objective = 0.0;   // ||z||_p
  long steps = 0;
  long halvings = 0;
  long improvements = 0;
  long residual_calls = 0;
  long linear_solves = 0;
};

/// High-precision lp solver: M-halving iterative refinement driving the
/// residual solver. Returns x with ||x||_p <= (1+eps) * optimum.
RefineResult lp_refine(const ConstraintSystem& sys, double p,
                       const RefineOptions& opts = {});
RefineResult lp_refine(const Matrix& A, const Vector& b, double p,
                       double epsilon);

/// res_x(Delta) = <g, Delta> - <R, Delta^2> - ||Delta||_p^p.
double res_value(const Vector& x, const Vector& delta, double p);

/// (lower, middle, upper) of the Bregman-divergence sandwich for ||.||_p^p:
///   p/8 <r, d^2> + 2^{-(p+1)} ||d||_p^p
///     <= ||x+d||_p^p - ||x||_p^p - <g, d>
///     <= 2 p^2 <r, d^2> + p^p ||d||_p^p,
/// with r = |x|^{p-2} (0 at x = 0) and g = p |x|^{p-2} x.
std::array<double, 3> bregman_sandwich_check(const Vector& x, const Vector& d,
                                             double p);

}  // namespace lpreg
