#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lpreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for all solver failures.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gram matrix is numerically rank-deficient beyond the pseudo-inverse
/// tolerance, or a factorization failed outright.
struct SingularSystem : SolverError {
  using SolverError::SolverError;
};

/// The computed minimizer violates Ax = b beyond the feasibility tolerance:
/// b does not lie in the column span of A.
struct InfeasibleDemand : SolverError {
  using SolverError::SolverError;
};

/// The gradient row of an augmented solve lies (numerically) in the row
/// space of the constraints, so <g, x> = target is unreachable.
struct DegenerateDirection : SolverError {
  using SolverError::SolverError;
};

/// An iterative solver exceeded its safety budget. Signals a bug or
/// pathological conditioning, not a normal algorithm outcome.
struct IterationBudgetExceeded : SolverError {
  using SolverError::SolverError;
};

/// Binary search ended without ever retaining a primal solution.
struct SearchCollapsed : SolverError {
  using SolverError::SolverError;
};

/// Refinement exceeded its step budget.
struct NonConvergence : SolverError {
  using SolverError::SolverError;
};

/// The dual solution of the small-p reduction has vanishing norm.
struct DualDegenerate : SolverError {
  using SolverError::SolverError;
};

/// Random graph stayed disconnected after the retry budget.
struct GraphDisconnected : SolverError {
  using SolverError::SolverError;
};

/// CSV ingestion failure with location information.
struct ParseError : SolverError {
  using SolverError::SolverError;
};

/// CSV had no usable rows after dropping malformed ones.
struct EmptyAfterCleaning : SolverError {
  using SolverError::SolverError;
};

/// Aggregation over an empty report set.
struct EmptyInput : SolverError {
  using SolverError::SolverError;
};

}  // namespace lpreg
