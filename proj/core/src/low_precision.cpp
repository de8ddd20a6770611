#include "lpreg/low_precision.hpp"

#include "lpreg/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace lpreg {

namespace {

// Lemma-9 style iteration bound with explicit constant; computed in logs and
// clamped so extreme (q, eps) combinations stay finite.
double lemma9_bound(double n, double q, double eps) {
  const double li = std::log(1.0 / eps);
  const double t1 = (q + 3.0) / 2.0 * li;
  const double t2 = std::log(n) / (2.0 * q + 1.0) +
                    (q * q + 2.0 * q) / (2.0 * q + 1.0) * li;
  const double lg = std::max(t1, t2) + std::log(2.0);
  const double logfac = std::log(std::max(std::log(n / std::pow(eps, q)), 2.0));
  const double total = lg + logfac;
  if (total > 34.5) return 1e15;  // ~e^34.5
  return std::exp(total);
}

}  // namespace

SubSolverResult sub_solver(const ConstraintSystem& sys,
                           const SubSolverConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
    throw SolverError("sub_solver: need 0 < eps < 1");
  if (!(cfg.M > 0.0)) throw SolverError("sub_solver: need M > 0");
  if (!(cfg.p > 1.0)) throw SolverError("sub_solver: need p > 1");

  const Index m = sys.objective_size();
  const double n = static_cast<double>(m);
  const double q = dual_exponent(cfg.p);
  const double eps = cfg.epsilon;
  const double S =
      cfg.step_cap > 0.0
          ? cfg.step_cap
          : std::pow(n, 2.0 / (2.0 * q + 1.0)) *
                std::pow(1.0 / eps, (q - 1.0) / (2.0 * q + 1.0));
  const double soft_cap = 100.0 * lemma9_bound(n, q, eps);
  const long hard_cap =
      cfg.max_iterations > 0
          ? cfg.max_iterations
          : std::max<long>(10000, static_cast<long>(std::min(1e15, 10.0 * soft_cap)));

  Vector r = Vector::Constant(m, std::pow(n, -1.0 / q));
  Vector s = Vector::Zero(sys.iterate_size());
  long t_low = 0;
  long it = 0;
  bool soft_warned = false;

  SubSolverResult out;
  while (lp_norm(r, q) <= 1.0 / eps) {
    const EnergySolution sol = sys.minimize_energy(r);
    const Vector z = sys.objective_part(sol.x);
    ++it;

    const GammaStep gs = gamma_step_detail(z, r, cfg.M, q, 1.0 + eps);
    if (!gs.any_triggered) {  // Case 1
      out.outcome.kind = SolveOutcome::Kind::Primal;
      out.outcome.x = sol.x;
      out.iterations = it;
      return out;
    }
    const Vector alpha = alpha_from_gamma(gs, q);
    const Vector r_next = r.cwiseProduct(alpha);
    if (cfg.on_step) cfg.on_step({r, r_next, z, cfg.M, true});
    r = r_next;

    if (alpha.maxCoeff() <= S) {
      s += sol.x;
      ++t_low;
    }
    if (t_low > 0 &&
        lp_norm(sys.objective_part(s) / double(t_low), 2.0 * cfg.p) <=
            (1.0 + eps) * cfg.M) {  // Case 2
      out.outcome.kind = SolveOutcome::Kind::Primal;
      out.outcome.x = s / double(t_low);
      out.iterations = it;
      return out;
    }
    if (!soft_warned && it > soft_cap) {
      std::fprintf(stderr,
                   "lpreg: sub_solver exceeded soft iteration bound (%.3g)\n",
                   soft_cap);
      soft_warned = true;
    }
    if (it >= hard_cap)
      throw IterationBudgetExceeded("sub_solver hit max_iterations");
  }
  // Case 3
  out.outcome.kind = SolveOutcome::Kind::Certificate;
  out.outcome.r = r / lp_norm(r, q);
  out.iterations = it;
  return out;
}

SubSolverResult sub_solver(const Matrix& A, const Vector& b,
                           const SubSolverConfig& cfg) {
  PlainSystem sys(A, b);
  return sub_solver(sys, cfg);
}

L2pResult l2p_minimization(const ConstraintSystem& sys,
                           const L2pOptions& opts) {
  if (!(opts.epsilon > 0.0 && opts.epsilon < 1.0))
    throw SolverError("l2p_minimization: need 0 < eps < 1");
  if (!(opts.p >= 1.0)) throw SolverError("l2p_minimization: need p >= 1");

  L2pResult out;
  const EnergySolution init =
      sys.minimize_energy(Vector::Ones(sys.objective_size()));
  out.linear_solves = 1;
  out.x = init.x;
  const double base = sys.objective_part(init.x).norm();
  if (opts.p == 1.0 || base == 0.0) return out;  // plain least squares

  const double eps = opts.epsilon / 4.0;
  const double n = static_cast<double>(sys.objective_size());
  const double lo = base / std::pow(n, 0.5 - 0.5 / (2.0 * opts.p));
  const double le = std::log1p(eps);
  long L = static_cast<long>(std::floor(std::log(lo) / le));
  long U = static_cast<long>(std::ceil(std::log(base) / le));

  SubSolverConfig scfg;
  scfg.epsilon = eps;
  scfg.p = opts.p;
  scfg.on_step = opts.on_step;

  bool retained = false;
  auto probe = [&](long P) {
    scfg.M = std::exp(double(P) * le);
    const SubSolverResult res = sub_solver(sys, scfg);
    out.linear_solves += res.iterations;
    ++out.probes;
    if (opts.on_probe)
      opts.on_probe({scfg.M, eps, &res.outcome, res.iterations});
    return res;
  };

  while (L < U) {
    // floor((L+U)/2) also for negative sums
    const long sum = L + U;
    const long P = sum >= 0 ? sum / 2 : -((-sum + 1) / 2);
    const SubSolverResult res = probe(P);
    if (res.outcome.is_primal()) {
      U = P;
      out.x = res.outcome.x;
      retained = true;
    } else {
      L = P + 1;
    }
  }
  if (!retained) {
    // Probe the initial upper endpoint; it is feasible unless something is
    // deeply wrong, in which case the search has genuinely collapsed.
    const SubSolverResult res = probe(U);
    if (!res.outcome.is_primal())
      throw SearchCollapsed("upper endpoint of the M-search is infeasible");
    out.x = res.outcome.x;
  }
  return out;
}

L2pResult l2p_minimization(const Matrix& A, const Vector& b, double epsilon,
                           double p) {
  PlainSystem sys(A, b);
  L2pOptions opts;
  opts.epsilon = epsilon;
  opts.p = p;
  return l2p_minimization(sys, opts);
}

std::pair<double, double> invariant_witness(const ConstraintSystem& sys,
                                            double q, const Vector& r_prev,
                                            const Vector& r_next, double M) {
  if ((r_next - r_prev).cwiseAbs().maxCoeff() == 0.0) return {0.0, 0.0};
  const double e_prev = sys.minimize_energy(r_prev).energy;
  const double e_next = sys.minimize_energy(r_next).energy;
  const double lhs = e_next - e_prev;
  const double rhs = M * M * (lp_norm(r_next, q) - lp_norm(r_prev, q));
  return {lhs, rhs};
}

std::pair<double, double> invariant_witness(const ConstraintSystem& sys,
                                            double q, const DualIterate& prev,
                                            const DualIterate& next,
                                            double M) {
  return invariant_witness(sys, q, prev.r, next.r, M);
}

}  // namespace lpreg
