#pragma once

#include "lpreg/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace lpreg {

/// Minimizer of <w, x^2> over an affine set, with its energy and the dual
/// multiplier phi of the normal-equation system.
struct EnergySolution {
  Vector x;
  double energy = 0.0;
  Vector multiplier;
};

/// Solver for symmetric positive semidefinite systems G y = rhs.
///
/// Equilibrates G symmetrically (Jacobi scaling), then factors with LDLT;
/// when pivots fall below the relative rank tolerance it switches to an
/// eigendecomposition pseudo-inverse that truncates eigenvalues below
/// 1e-12 * lambda_max. Two passes of iterative refinement polish each solve,
/// which keeps residuals small when the weight spread pushes the condition
/// number toward the truncation threshold. This is the pseudo-inverse every
/// normal-equation solve in the library goes through.
class GramSolver {
 public:
  void compute(const Matrix& G);
  Vector solve(const Vector& rhs) const;
  Matrix solve_many(const Matrix& rhs) const;
  bool rank_deficient() const { return use_eig_; }

 private:
  Vector base_solve(const Vector& scaled_rhs) const;

  Matrix Gs_;  // equilibrated matrix, kept for refinement residuals
  Vector scale_;
  Eigen::LDLT<Matrix> ldlt_;
  Eigen::SelfAdjointEigenSolver<Matrix> eig_;
  bool use_eig_ = false;
  Index n_ = 0;
};

/// Factorization-bearing handle for min_{Ax=b} <w, x^2> queries.
///
/// set_weights() floors tiny weights, forms G = A D(w)^{-1} A^T, equilibrates
/// it symmetrically and factors it (LDLT, falling back to an eigen
/// pseudo-inverse when pivots drop below the rank tolerance). solve() and
/// solve_augmented() reuse the factorization; call set_weights() again to
/// change w. Not shareable across concurrent mutators; movable.
class WeightedLsSolver {
 public:
  explicit WeightedLsSolver(Matrix A);

  const Matrix& constraints() const { return A_; }
  Index rows() const { return A_.rows(); }
  Index cols() const { return A_.cols(); }

  void set_weights(const Vector& w);

  /// min <w, x^2> s.t. Ax = b via x = D^{-1} A^T (A D^{-1} A^T)^+ b.
  /// Throws InfeasibleDemand when ||Ax-b|| > 1e-8 (1 + ||b||).
  EnergySolution solve(const Vector& b) const;

  /// min <w, d^2> s.t. Ad = 0, <g, d> = target, using only solves against
  /// the cached A D^{-1} A^T factorization (rank-one bordering; the
  /// augmented normal matrix is never formed).
  EnergySolution solve_augmented(const Vector& g, double target) const;

 private:
  Matrix A_;
  Vector w_;        // weights as given
  Vector inv_w_;    // floored inverse weights
  GramSolver gram_;
  bool has_weights_ = false;
};

/// One-shot helpers.
EnergySolution solve_weighted_ls(const Matrix& A, const Vector& b,
                                 const Vector& w);
double energy(const Matrix& A, const Vector& b, const Vector& w);
EnergySolution solve_augmented_ls(const Matrix& A, const Vector& g,
                                  double target, const Vector& w);

/// sum_i w_i x_i^2 (1 - w_i / w'_i): lower bound on energy(w') - energy(w)
/// for w' >= w > 0, where x is the energy minimizer at w.
double energy_increase_lower_bound(const Vector& x, const Vector& w_old,
                                   const Vector& w_new);

/// Relative weight floor and rank tolerance shared by the solver stack.
inline constexpr double kWeightFloorRel = 1e-12;
inline constexpr double kRankTolRel = 1e-12;
inline constexpr double kFeasTolRel = 1e-8;

}  // namespace lpreg
