#pragma once

#include "lpreg/system.hpp"
#include "lpreg/types.hpp"

namespace lpreg {

/// min ||Nx - v||_p s.t. Ax = b. A may have zero rows.
struct GeneralInstance {
  Matrix N;
  Vector v;
  Matrix A;   // s x n, possibly 0 x n
  Vector b;   // s
  double p = 2.0;

  Index n() const { return N.cols(); }
  Index m() const { return N.rows(); }
  void validate() const;

  static GeneralInstance unconstrained(Matrix N, Vector v, double p);
};

/// The affine-constrained form produced by lifting: minimize ||z||_p over
///   [[N, -I], [A, 0]] [x; z] = [v; b],
/// with the block split recorded so solutions project back to x.
struct LiftedInstance {
  Matrix constraint;   // (m+s) x (n+m)
  Vector rhs;          // [v; b]
  Index x_dim = 0;
  Index z_dim = 0;
  double p = 2.0;

  Vector project_back(const Vector& full) const { return full.head(x_dim); }
  Vector residual_block(const Vector& full) const { return full.tail(z_dim); }
};

LiftedInstance lift_general(const GeneralInstance& inst);

/// Weighted least squares on the general form:
///   argmin_x <w, (Nx - v)^2> s.t. Ax = b,
/// evaluated through the factored structure (two solves against N^T R N and
/// one against A (N^T R N)^+ A^T); the lifted matrix is never materialized.
Vector solve_general_structured(const GeneralInstance& inst,
                                const Vector& w_on_residual);

/// ConstraintSystem for the general form. Objective coordinates are the
/// residual block z = Nx - v; full iterates are [x; z]. The x block carries
/// no weight, so solves are parameterized on the null space of A (computed
/// once at construction): x = x_p + Z c keeps Ax = b exact by construction
/// and reduces every energy solve to an unconstrained (or single-row)
/// weighted least-squares problem in c. Exact zero weights need no floor.
class GeneralSystem final : public ConstraintSystem {
 public:
  explicit GeneralSystem(GeneralInstance inst);

  Index objective_size() const override { return inst_.m(); }
  Index iterate_size() const override { return inst_.n() + inst_.m(); }
  Vector objective_part(const Vector& full) const override {
    return full.tail(inst_.m());
  }

  EnergySolution minimize_energy(const Vector& w) const override;
  EnergySolution minimize_energy_augmented(const Vector& w, const Vector& g,
                                           double target) const override;
  double feasibility_error(const Vector& full) const override;

  const GeneralInstance& instance() const { return inst_; }

 private:
  Vector pack(const Vector& x) const;

  GeneralInstance inst_;
  Matrix null_basis_;   // Z: n x k orthonormal basis of null(A) (I if s = 0)
  Vector x_particular_; // min-norm solution of Ax = b (0 if s = 0)
  Matrix B_;            // N Z
  Vector v_eff_;        // v - N x_particular, so z = B c - v_eff
};

struct RefineResult;  // refinement.hpp

/// l_p regression for 1 < p < 2 via duality (solve the dual
/// min ||A^T y||_{p'} s.t. <b, y> = 1 to precision min(eps, n^-3) with the
/// high-precision solver, read off the primal, then restore exact
/// feasibility with x += A^T (A A^T)^+ (b - Ax)).
struct SmallPResult {
  Vector x;
  Vector dual_y;
  long linear_solves = 0;
  long residual_calls = 0;
};

SmallPResult solve_small_p(const Matrix& A, const Vector& b, double p,
                           double epsilon);

/// General form min ||Nx - v||_p s.t. Ax = b with 1 < p < 2: the feasible
/// residual set {Nx - v : Ax = b} is expressed as an affine subspace
/// {z : P z = P z0} (P projects onto the orthogonal complement of the
/// reachable directions), solved with the plain small-p reduction, and x is
/// read back with one structured least-squares fit.
SmallPResult solve_small_p_general(const GeneralInstance& inst,
                                   double epsilon);

}  // namespace lpreg
