#pragma once

// Independent test oracles: golden-section minimization on feasible
// manifolds, brute-force lp optima, and a deterministic test RNG. Nothing
// here calls back into the solver paths it is used to check, except where a
// test explicitly wants the high-accuracy solver as its reference.

#include "lpreg/instances.hpp"
#include "lpreg/types.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <vector>

namespace lpreg::testing {

inline double golden_section(const std::function<double(double)>& f,
                             double lo, double hi, int iters = 400) {
  constexpr double kGolden = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Orthonormal null-space basis of A.
inline Matrix null_space(const Matrix& A) {
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double tol = 1e-12 * (sv.size() ? sv[0] : 0.0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

/// Min-norm solution of Ax = b.
inline Vector min_norm_solution(const Matrix& A, const Vector& b) {
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.solve(b);
}

/// Brute-force min of a convex objective over {x0 + Z c : c in R^k} for
/// k <= 3, by cyclic coordinate golden-section descent.
inline double manifold_min(const std::function<double(const Vector&)>& obj,
                           const Vector& x0, const Matrix& Z,
                           double span = 100.0, int sweeps = 160) {
  Vector c = Vector::Zero(Z.cols());
  auto value = [&](const Vector& cc) { return obj(x0 + Z * cc); };
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const double width = span / std::pow(1.35, sweep);
    for (Index j = 0; j < Z.cols(); ++j) {
      const double base = c[j];
      auto f1 = [&](double t) {
        Vector cc = c;
        cc[j] = base + t;
        return value(cc);
      };
      c[j] = base + golden_section(f1, -width, width, 120);
    }
    if (width < 1e-14) break;
  }
  return value(c);
}

/// Golden-section optimum of min ||x||_p over {x : Ax = b} when the feasible
/// manifold is one-dimensional.
inline double lp_line_optimum(const Matrix& A, const Vector& b, double p) {
  const Matrix Z = null_space(A);
  const Vector x0 = min_norm_solution(A, b);
  auto obj = [&](const Vector& x) {
    double s = 0.0;
    for (Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
    return s;
  };
  return std::pow(manifold_min(obj, x0, Z), 1.0 / p);
}

/// Deterministic uniform/normal draws for tests.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return rng_.uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    // Box-Muller on fixed uniforms
    const double u1 = std::max(uniform(), 1e-17), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  Vector uniform_vector(Index n, double lo = 0.0, double hi = 1.0) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  Matrix uniform_matrix(Index r, Index c) {
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) m(i, j) = uniform();
    return m;
  }
  std::uint64_t below(std::uint64_t n) { return rng_.below(n); }

 private:
  Rng rng_;
};

/// Feasible random instance: A (d x n) uniform, b = A * (uniform x).
struct RandomFeasible {
  Matrix A;
  Vector b;
};

inline RandomFeasible random_feasible(TestRng& rng, Index d, Index n) {
  RandomFeasible out;
  out.A = rng.uniform_matrix(d, n);
  out.b = out.A * rng.uniform_vector(n);
  return out;
}

}  // namespace lpreg::testing
