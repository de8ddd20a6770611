#include "lpreg/system.hpp"

#include <utility>

namespace lpreg {

PlainSystem::PlainSystem(Matrix A, Vector b)
    : solver_(std::move(A)), b_(std::move(b)) {
  if (b_.size() != solver_.rows()) throw SolverError("PlainSystem: size mismatch");
}

EnergySolution PlainSystem::minimize_energy(const Vector& w) const {
  solver_.set_weights(w);
  return solver_.solve(b_);
}

EnergySolution PlainSystem::minimize_energy_augmented(const Vector& w,
                                                      const Vector& g,
                                                      double target) const {
  solver_.set_weights(w);
  return solver_.solve_augmented(g, target);
}

double PlainSystem::feasibility_error(const Vector& full) const {
  if (solver_.rows() == 0) return 0.0;
  return (solver_.constraints() * full - b_).norm() / (1.0 + b_.norm());
}

}  // namespace lpreg
