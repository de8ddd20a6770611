#pragma once

#include "lpreg/ls_core.hpp"
#include "lpreg/types.hpp"

namespace lpreg {

/// Affine feasible set together with the block of coordinates the lp
/// objective lives on. The plain problem min ||x||_p s.t. Ax = b puts the
/// objective on every coordinate; the general form min ||Nx - v||_p s.t.
/// Ax = b (solved through its lifted system) puts it on the residual block
/// only. All solvers run against this interface; the dual vector r and every
/// dimension-dependent constant use objective_size().
class ConstraintSystem {
 public:
  virtual ~ConstraintSystem() = default;

  /// Number of objective coordinates (the dual dimension m).
  virtual Index objective_size() const = 0;
  /// Length of a full iterate.
  virtual Index iterate_size() const = 0;
  /// Objective block of a full iterate.
  virtual Vector objective_part(const Vector& full) const = 0;

  /// min <w, z^2> over the (inhomogeneous) feasible set; w indexes the
  /// objective block.
  virtual EnergySolution minimize_energy(const Vector& w) const = 0;

  /// min <w, z^2> over the homogeneous set with the extra row
  /// <g, z> = target; g indexes the objective block.
  virtual EnergySolution minimize_energy_augmented(const Vector& w,
                                                   const Vector& g,
                                                   double target) const = 0;

  /// ||constraint residual|| of a full iterate, relative form.
  virtual double feasibility_error(const Vector& full) const = 0;
};

/// min ||x||_p s.t. Ax = b. A may have zero rows (unconstrained).
class PlainSystem final : public ConstraintSystem {
 public:
  PlainSystem(Matrix A, Vector b);

  Index objective_size() const override { return solver_.cols(); }
  Index iterate_size() const override { return solver_.cols(); }
  Vector objective_part(const Vector& full) const override { return full; }

  EnergySolution minimize_energy(const Vector& w) const override;
  EnergySolution minimize_energy_augmented(const Vector& w, const Vector& g,
                                           double target) const override;
  double feasibility_error(const Vector& full) const override;

  const Matrix& A() const { return solver_.constraints(); }
  const Vector& b() const { return b_; }

 private:
  mutable WeightedLsSolver solver_;
  Vector b_;
};

}  // namespace lpreg
