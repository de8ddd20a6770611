#include "lpreg/refinement.hpp"

#include "lpreg/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace lpreg {

namespace {

double pow_abs(double x, double e) {
  const double a = std::abs(x);
  return a == 0.0 ? 0.0 : std::pow(a, e);
}

double golden_section_min(const std::function<double(double)>& phi, double lo,
                          double hi, int iters) {
  constexpr double kGolden = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = phi(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ResidualGradientPair ResidualGradientPair::from(const Vector& x, double p) {
  ResidualGradientPair out;
  out.g.resize(x.size());
  out.R.resize(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double m = pow_abs(x[i], p - 2.0);
    out.g[i] = m * x[i];
    out.R[i] = 2.0 * m;
  }
  return out;
}

RefineResult lp_refine(const ConstraintSystem& sys, double p,
                       const RefineOptions& opts) {
  if (!(p >= 2.0)) throw SolverError("lp_refine: need p >= 2");
  if (!(opts.epsilon > 0.0 && opts.epsilon < 1.0))
    throw SolverError("lp_refine: need 0 < eps < 1");

  const Index m = sys.objective_size();
  const double md = static_cast<double>(m);
  const double eps = opts.epsilon;

  const double lnm = std::log(std::max(md, 2.0));
  const double soft_cap =
      100.0 * p * p * lnm * std::max(std::log(md / eps), 1.0);
  const long max_steps =
      opts.max_steps > 0
          ? opts.max_steps
          : std::max<long>(10000, static_cast<long>(std::min(1e15, 10.0 * soft_cap)));

  // kappa = 1 iff the residual solver takes its small-p branch at p/2, i.e.
  // q_res = p/(p-2) >= ln m.
  const double q_res =
      p > 2.0 ? p / (p - 2.0) : std::numeric_limits<double>::infinity();
  const double kappa = q_res >= std::log(md) ? 1.0 : q_res;

  RefineResult out;
  {
    const EnergySolution init = sys.minimize_energy(Vector::Ones(m));
    out.x = init.x;
    out.linear_solves = 1;
  }
  const auto objective_pow = [&](const Vector& full) {
    return lp_norm_pow(sys.objective_part(full), p);
  };

  double obj = objective_pow(out.x);
  double M = obj / (16.0 * p);
  bool soft_warned = false;

  while (obj > 0.0 && M >= eps / (16.0 * p * (1.0 + eps)) * obj &&
         M > std::numeric_limits<double>::min()) {
    const Vector z = sys.objective_part(out.x);
    const ResidualGradientPair gr = ResidualGradientPair::from(z, p);
    const Vector theta = std::pow(M, (2.0 - p) / p) * gr.R;
    const double M_res = 2.0 * std::sqrt(kappa) * std::pow(M, 1.0 / p);

    const ResidualOutcome res = residual_solve(
        sys, p / 2.0, gr.g, M / 2.0, theta, M_res, opts.residual_hooks);
    out.linear_solves += res.linear_solves;
    ++out.residual_calls;
    if (opts.on_residual)
      opts.on_residual({p / 2.0, gr.g, M / 2.0, theta, M_res}, res);

    bool halve = !res.outcome.is_primal();
    if (!halve) {
      // <R, Delta^2> with the original (unfloored) R.
      const Vector dz = sys.objective_part(res.outcome.x);
      if (!res.outcome.x.allFinite() || gr.R.dot(dz.cwiseAbs2()) >= 2.0 * M)
        halve = true;
    }

    if (halve) {
      M *= 0.5;
      ++out.halvings;
    } else {
      const Vector& dir = res.outcome.x;
      const double eta0 = 1.0 / (64.0 * p * kappa);
      double eta = eta0;
      if (opts.line_search) {
        const auto phi = [&](double e) {
          return objective_pow(out.x - e * dir);
        };
        double hi = eta0, fhi = phi(hi);
        while (hi < 1e18) {
          const double f2 = phi(2.0 * hi);
          if (!std::isfinite(f2) || f2 >= fhi) break;
          hi *= 2.0;
          fhi = f2;
        }
        const double cand = golden_section_min(phi, 0.0, 2.0 * hi, 90);
        if (phi(cand) <= phi(eta0)) eta = cand;
      }
      const Vector x_new = out.x - eta * dir;
      const double obj_new = objective_pow(x_new);
      if (obj - obj_new <=
          8.0 * std::numeric_limits<double>::epsilon() * obj) {
        // No representable progress along this direction: the remaining gap
        // sits below double resolution, so tighten the bound instead.
        if (obj_new < obj) {
          out.x = x_new;
          obj = obj_new;
        }
        M *= 0.5;
        ++out.halvings;
      } else {
        out.x = x_new;
        obj = obj_new;
        ++out.improvements;
      }
    }
    ++out.steps;
    if (opts.on_state)
      opts.on_state({out.x, M, kappa, out.steps, out.linear_solves});
    if (!soft_warned && out.steps > soft_cap) {
      std::fprintf(stderr,
                   "lpreg: lp_refine exceeded soft step bound (%.3g)\n",
                   soft_cap);
      soft_warned = true;
    }
    if (out.steps >= max_steps)
      throw NonConvergence("lp_refine exceeded its step budget");
  }
  out.objective = lp_norm(sys.objective_part(out.x), p);
  return out;
}

RefineResult lp_refine(const Matrix& A, const Vector& b, double p,
                       double epsilon) {
  PlainSystem sys(A, b);
  RefineOptions opts;
  opts.epsilon = epsilon;
  return lp_refine(sys, p, opts);
}

double res_value(const Vector& x, const Vector& delta, double p) {
  if (!(p >= 2.0)) throw SolverError("res_value: need p >= 2");
  if (x.size() != delta.size()) throw SolverError("res_value: size mismatch");
  const ResidualGradientPair gr = ResidualGradientPair::from(x, p);
  return gr.g.dot(delta) - gr.R.dot(delta.cwiseAbs2()) -
         lp_norm_pow(delta, p);
}

std::array<double, 3> bregman_sandwich_check(const Vector& x, const Vector& d,
                                             double p) {
  if (!(p >= 2.0)) throw SolverError("bregman_sandwich_check: need p >= 2");
  if (x.size() != d.size())
    throw SolverError("bregman_sandwich_check: size mismatch");
  double rd2 = 0.0, gd = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double r = pow_abs(x[i], p - 2.0);
    rd2 += r * d[i] * d[i];
    gd += p * r * x[i] * d[i];
  }
  const double dpp = lp_norm_pow(d, p);
  const double lower = p / 8.0 * rd2 + std::pow(2.0, -(p + 1.0)) * dpp;
  const double middle = lp_norm_pow(x + d, p) - lp_norm_pow(x, p) - gd;
  const double upper = 2.0 * p * p * rd2 + std::pow(p, p) * dpp;
  return {lower, middle, upper};
}

}  // namespace lpreg
