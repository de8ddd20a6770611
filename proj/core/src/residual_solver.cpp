#include "lpreg/residual_solver.hpp"

#include "lpreg/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

namespace lpreg {

namespace {

bool small_p_branch(double p_res, Index m) {
  // "p <= log n / (log n - 1)" in the robust, equivalent form q >= ln m.
  if (p_res <= 1.0) return true;  // q = inf
  return dual_exponent(p_res) >= std::log(static_cast<double>(m));
}

}  // namespace

void ResidualProblem::validate() const {
  if (!(p_res >= 1.0)) throw SolverError("ResidualProblem: need p_res >= 1");
  if (!(M > 0.0)) throw SolverError("ResidualProblem: need M > 0");
  if (g.size() == 0) throw SolverError("ResidualProblem: empty gradient row");
  if (A.rows() > 0 && A.cols() != g.size())
    throw SolverError("ResidualProblem: size mismatch");
  if (theta.size() != g.size())
    throw SolverError("ResidualProblem: theta size mismatch");
  if ((theta.array() < 0.0).any())
    throw SolverError("ResidualProblem: theta must be nonnegative");
}

ResidualOutcome residual_solve(const ConstraintSystem& sys, double p_res,
                               const Vector& g, double target,
                               const Vector& theta, double M,
                               const ResidualHooks& hooks) {
  const Index m = sys.objective_size();
  if (g.size() != m || theta.size() != m)
    throw SolverError("residual_solve: size mismatch");
  if (!(M > 0.0)) throw SolverError("residual_solve: need M > 0");

  ResidualOutcome out;
  const double md = static_cast<double>(m);

  if (small_p_branch(p_res, m)) {
    out.kappa = 1.0;
    const double q = p_res > 1.0 ? dual_exponent(p_res)
                                 : std::numeric_limits<double>::infinity();
    const Vector r = std::isfinite(q)
                         ? Vector::Constant(m, std::pow(md, -1.0 / q))
                         : Vector::Ones(m);
    out.iterations = 1;
    try {
      const EnergySolution sol =
          sys.minimize_energy_augmented(r + theta, g, target);
      out.linear_solves = 1;
      if (lp_norm(sys.objective_part(sol.x), 2.0 * p_res) <= 2.0 * M) {
        out.outcome.kind = SolveOutcome::Kind::Primal;
        out.outcome.x = sol.x;
        return out;
      }
    } catch (const DegenerateDirection&) {
      out.linear_solves = 1;
    }
    out.outcome.kind = SolveOutcome::Kind::Certificate;
    out.outcome.r = r;  // ||r||_q = 1 by construction
    return out;
  }

  const double q = dual_exponent(p_res);
  out.kappa = q;
  const double S = std::pow(md, 2.0 / (2.0 * q + 1.0));
  const double soft_cap = 100.0 * std::pow(md, 1.0 / (2.0 * q + 1.0));
  const long hard_cap =
      std::max<long>(10000, static_cast<long>(1000.0 * std::pow(md, 1.0 / (2.0 * q + 1.0))));

  // ||r0||_q = (2q-1)/(2q) exactly.
  Vector r = Vector::Constant(m, (2.0 * q - 1.0) / (2.0 * q) *
                                     std::pow(md, -1.0 / q));
  Vector s = Vector::Zero(sys.iterate_size());
  long t_low = 0;
  bool soft_warned = false;

  while (lp_norm_pow(r, q) <= 1.0) {
    EnergySolution sol;
    try {
      sol = sys.minimize_energy_augmented(r + theta, g, target);
    } catch (const DegenerateDirection&) {
      ++out.linear_solves;
      out.outcome.kind = SolveOutcome::Kind::Certificate;
      out.outcome.r = r / lp_norm(r, q);
      return out;
    }
    ++out.linear_solves;
    ++out.iterations;
    const Vector z = sys.objective_part(sol.x);

    const GammaStep gs = gamma_step_detail(z, r, M, q, 2.0);
    if (!gs.any_triggered) {  // Case 1
      out.outcome.kind = SolveOutcome::Kind::Primal;
      out.outcome.x = sol.x;
      return out;
    }
    const Vector alpha = alpha_from_gamma(gs, q);
    const Vector r_next = r.cwiseProduct(alpha);
    if (hooks.on_step) hooks.on_step({r, r_next, z, M, true});
    r = r_next;

    if (alpha.maxCoeff() <= S) {
      s += sol.x;
      ++t_low;
    }
    if (t_low > 0 && lp_norm(sys.objective_part(s) / double(t_low),
                             2.0 * p_res) <= 2.0 * M) {  // Case 2
      out.outcome.kind = SolveOutcome::Kind::Primal;
      out.outcome.x = s / double(t_low);
      return out;
    }
    if (!soft_warned && out.iterations > soft_cap) {
      std::fprintf(stderr,
                   "lpreg: residual_solve exceeded soft iteration bound (%.3g)\n",
                   soft_cap);
      soft_warned = true;
    }
    if (out.iterations >= hard_cap)
      throw IterationBudgetExceeded("residual_solve hit iteration budget");
  }
  // Case 3
  out.outcome.kind = SolveOutcome::Kind::Certificate;
  out.outcome.r = r / lp_norm(r, q);
  return out;
}

ResidualOutcome residual_solve(const ResidualProblem& prob,
                               const ResidualHooks& hooks) {
  prob.validate();
  Matrix A = prob.A.rows() > 0 ? prob.A : Matrix(0, prob.g.size());
  PlainSystem sys(std::move(A), Vector::Zero(prob.A.rows()));
  return residual_solve(sys, prob.p_res, prob.g, prob.target, prob.theta,
                        prob.M, hooks);
}

std::pair<double, double> residual_invariant_witness(
    const ConstraintSystem& sys, const Vector& g, double target,
    const Vector& theta, double q, const Vector& r_prev, const Vector& r_next,
    double M) {
  if ((r_next - r_prev).cwiseAbs().maxCoeff() == 0.0) return {0.0, 0.0};
  const double e_prev =
      sys.minimize_energy_augmented(r_prev + theta, g, target).energy;
  const double e_next =
      sys.minimize_energy_augmented(r_next + theta, g, target).energy;
  const double lhs = e_next - e_prev;
  const double rhs = M * M * (lp_norm(r_next, q) - lp_norm(r_prev, q));
  return {lhs, rhs};
}

}  // namespace lpreg
