#include "lpreg/numerics.hpp"

#include <cmath>
#include <limits>

namespace lpreg {

namespace {
constexpr double kLogSpaceLimit = 1e300;
}

NormParams NormParams::primal(double p) { return {p, dual_exponent(p)}; }

double dual_exponent(double p) {
  if (!(p > 1.0)) throw SolverError("dual_exponent requires p > 1");
  return p / (p - 1.0);
}

double lp_norm(const Vector& x, double p) {
  if (!(p >= 1.0)) throw SolverError("lp_norm requires p >= 1");
  if (x.size() == 0) return 0.0;
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double sum = 0.0;
  for (Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(sum, 1.0 / p);
}

double lp_norm_pow(const Vector& x, double p) {
  double sum = 0.0;
  for (Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i]), p);
  return sum;
}

GammaStep gamma_step_detail(const Vector& x, const Vector& r, double M,
                            double q, double threshold) {
  const Index n = x.size();
  if (r.size() != n) throw SolverError("gamma_step: size mismatch");
  if (!(M > 0.0) || !(q > 1.0)) throw SolverError("gamma_step: need M > 0, q > 1");

  GammaStep out;
  out.gamma = Vector::Ones(n);
  out.log_gamma = Vector::Zero(n);
  out.triggered.resize(n);
  out.triggered.setConstant(false);

  const double rq = lp_norm(r, q);
  const double log_rq = std::log(rq);
  const double log_thr = std::log(threshold);
  const double log_M2 = 2.0 * std::log(M);

  for (Index i = 0; i < n; ++i) {
    const double xi = std::abs(x[i]);
    if (xi == 0.0) continue;
    const double ri = r[i];
    // direct comparison first; log space once either side leaves [0, 1e300]
    const double lhs = xi * xi * std::pow(rq, q - 1.0);
    const double rhs = threshold * M * M * std::pow(ri, q - 1.0);
    bool trig;
    const bool representable = std::isfinite(lhs) && std::isfinite(rhs) &&
                               lhs <= kLogSpaceLimit && rhs <= kLogSpaceLimit &&
                               rhs > 0.0;
    const double lg =
        2.0 * std::log(xi) + (q - 1.0) * (log_rq - std::log(ri)) - log_M2;
    if (representable) {
      trig = lhs >= rhs;
    } else {
      trig = lg >= log_thr;
    }
    if (trig) {
      out.triggered[i] = true;
      out.any_triggered = true;
      out.log_gamma[i] = lg;
      const double g = representable ? lhs / (rhs / threshold) : std::exp(lg);
      out.gamma[i] = g;
    }
  }
  return out;
}

Vector gamma_step(const Vector& x, const Vector& r, double M, double q,
                  double threshold) {
  return gamma_step_detail(x, r, M, q, threshold).gamma;
}

Vector alpha_from_gamma(const Vector& gamma, double q) {
  Vector alpha(gamma.size());
  for (Index i = 0; i < gamma.size(); ++i)
    alpha[i] = gamma[i] == 1.0 ? 1.0 : std::pow(gamma[i], 1.0 / q);
  return alpha;
}

Vector alpha_from_gamma(const GammaStep& step, double q) {
  Vector alpha = Vector::Ones(step.gamma.size());
  for (Index i = 0; i < step.gamma.size(); ++i)
    if (step.triggered[i]) alpha[i] = std::exp(step.log_gamma[i] / q);
  return alpha;
}

}  // namespace lpreg
