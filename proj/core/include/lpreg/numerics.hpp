#pragma once

#include "lpreg/types.hpp"

namespace lpreg {

/// Primal/dual exponent pair with 1/p + 1/q = 1, computed as q = p/(p-1).
struct NormParams {
  double p;
  double q;

  static NormParams primal(double p);
};

/// Dual exponent q = p/(p-1). Requires p > 1.
double dual_exponent(double p);

/// ||x||_p, evaluated as m * (sum (|x_i|/m)^p)^(1/p) with m = max|x_i| so
/// that large p and large entries do not overflow. Returns 0 for x = 0.
double lp_norm(const Vector& x, double p);

/// sum_i |x_i|^p (the p-th power of lp_norm, summed directly).
double lp_norm_pow(const Vector& x, double p);

/// One multiplicative dual step. Coordinate i triggers when
///   x_i^2 ||r||_q^{q-1} >= threshold * M^2 * r_i^{q-1},
/// in which case gamma_i = x_i^2 ||r||_q^{q-1} / (M^2 r_i^{q-1}); otherwise
/// gamma_i = 1 exactly. log_gamma carries the triggered values in log space
/// so step factors stay usable when gamma overflows.
struct GammaStep {
  Vector gamma;
  Vector log_gamma;             // 0 where untriggered
  Eigen::Array<bool, Eigen::Dynamic, 1> triggered;
  bool any_triggered = false;
};

GammaStep gamma_step_detail(const Vector& x, const Vector& r, double M,
                            double q, double threshold);

/// The gamma vector only.
Vector gamma_step(const Vector& x, const Vector& r, double M, double q,
                  double threshold);

/// alpha_i = gamma_i^{1/q} (>= 1, exactly 1 where gamma_i = 1).
Vector alpha_from_gamma(const Vector& gamma, double q);

/// Overflow-safe variant: exp(log_gamma / q) on triggered coordinates.
Vector alpha_from_gamma(const GammaStep& step, double q);

}  // namespace lpreg
