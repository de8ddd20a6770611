#include "lpreg/ls_core.hpp"

#include <cmath>
#include <utility>

namespace lpreg {

namespace {

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw SolverError(std::string(what) + ": non-finite entries");
}

}  // namespace

void GramSolver::compute(const Matrix& G) {
  n_ = G.rows();
  use_eig_ = false;
  if (n_ == 0) return;
  if (!G.allFinite()) throw SingularSystem("Gram matrix has non-finite entries");

  const Vector diag = G.diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  scale_.resize(n_);
  for (Index i = 0; i < n_; ++i)
    scale_[i] = diag[i] > 1e-300 * std::max(dmax, 1.0) ? 1.0 / std::sqrt(diag[i])
                                                       : 1.0;
  const Matrix Gs = scale_.asDiagonal() * G * scale_.asDiagonal();

  ldlt_.compute(Gs);
  bool ok = ldlt_.info() == Eigen::Success;
  if (ok) {
    const Vector d = ldlt_.vectorD();
    ok = d.allFinite() && d.minCoeff() > kRankTolRel * d.cwiseAbs().maxCoeff();
  }
  if (!ok) {
    eig_.compute(Gs);
    if (eig_.info() != Eigen::Success)
      throw SingularSystem("eigendecomposition of Gram matrix failed");
    use_eig_ = true;
  }
}

Vector GramSolver::solve(const Vector& rhs) const {
  if (n_ == 0) return rhs;
  const Vector scaled = scale_.cwiseProduct(rhs);
  Vector y;
  if (!use_eig_) {
    y = ldlt_.solve(scaled);
  } else {
    const Vector& lam = eig_.eigenvalues();
    const double thr = kRankTolRel * std::max(lam.maxCoeff(), 0.0);
    Vector t = eig_.eigenvectors().transpose() * scaled;
    for (Index i = 0; i < t.size(); ++i)
      t[i] = lam[i] > thr ? t[i] / lam[i] : 0.0;
    y = eig_.eigenvectors() * t;
  }
  return scale_.cwiseProduct(y);
}

Matrix GramSolver::solve_many(const Matrix& rhs) const {
  if (n_ == 0) return rhs;
  Matrix out(rhs.rows(), rhs.cols());
  for (Index j = 0; j < rhs.cols(); ++j) out.col(j) = solve(rhs.col(j));
  return out;
}

WeightedLsSolver::WeightedLsSolver(Matrix A) : A_(std::move(A)) {
  if (A_.cols() < 1) throw SolverError("WeightedLsSolver: need cols >= 1");
  if (!A_.allFinite()) throw SolverError("WeightedLsSolver: non-finite matrix");
}

void WeightedLsSolver::set_weights(const Vector& w) {
  if (w.size() != A_.cols()) throw SolverError("set_weights: size mismatch");
  check_finite(w, "set_weights");
  if ((w.array() < 0.0).any()) throw SolverError("set_weights: negative weight");
  const double wmax = w.maxCoeff();
  if (wmax <= 0.0) throw SolverError("set_weights: all-zero weights");

  w_ = w;
  const double floor = kWeightFloorRel * wmax;
  inv_w_ = w.cwiseMax(floor).cwiseInverse();
  has_weights_ = true;
  if (A_.rows() == 0) return;

  Matrix G(A_.rows(), A_.rows());
  G.setZero();
  G.selfadjointView<Eigen::Lower>().rankUpdate(
      A_ * inv_w_.cwiseSqrt().asDiagonal());
  G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
  gram_.compute(G);
}

EnergySolution WeightedLsSolver::solve(const Vector& b) const {
  if (!has_weights_) throw SolverError("solve: set_weights first");
  if (b.size() != A_.rows()) throw SolverError("solve: rhs size mismatch");
  check_finite(b, "solve");

  EnergySolution out;
  if (A_.rows() == 0) {
    out.x = Vector::Zero(A_.cols());
    out.multiplier = Vector();
    return out;
  }
  out.multiplier = gram_.solve(b);
  out.x = inv_w_.cwiseProduct(A_.transpose() * out.multiplier);
  if (!out.x.allFinite()) throw SingularSystem("solve produced non-finite x");
  const double resid = (A_ * out.x - b).norm();
  if (resid > kFeasTolRel * (1.0 + b.norm()))
    throw InfeasibleDemand("||Ax-b|| = " + std::to_string(resid) +
                           " exceeds tolerance; b not in span(A)");
  out.energy = w_.dot(out.x.cwiseAbs2());
  return out;
}

EnergySolution WeightedLsSolver::solve_augmented(const Vector& g,
                                                 double target) const {
  if (!has_weights_) throw SolverError("solve_augmented: set_weights first");
  if (g.size() != A_.cols()) throw SolverError("solve_augmented: size mismatch");
  check_finite(g, "solve_augmented");

  const Index d = A_.rows();
  EnergySolution out;

  // Lagrangian stationarity gives d = D^{-1}(A^T phi + mu g); eliminating
  // phi leaves mu (c - u^T G^+ u) = target, u = A D^{-1} g, c = g^T D^{-1} g.
  const Vector ginv = inv_w_.cwiseProduct(g);
  const double c = g.dot(ginv);
  Vector Gpu;
  double denom = c;
  if (d > 0) {
    const Vector u = A_ * ginv;
    Gpu = gram_.solve(u);
    denom = c - u.dot(Gpu);
  }
  if (!(denom > kRankTolRel * c) || c == 0.0) {
    if (std::abs(target) < 1e-300) {
      out.x = Vector::Zero(A_.cols());
      out.multiplier = Vector::Zero(d + 1);
      return out;
    }
    throw DegenerateDirection("gradient row lies in the constraint row space");
  }
  const double mu = target / denom;
  if (d > 0) {
    out.x = inv_w_.cwiseProduct(g - A_.transpose() * Gpu) * mu;
    out.multiplier.resize(d + 1);
    out.multiplier.head(d) = -mu * Gpu;
    out.multiplier[d] = mu;
  } else {
    out.x = mu * ginv;
    out.multiplier = Vector::Constant(1, mu);
  }
  if (!out.x.allFinite())
    throw DegenerateDirection("augmented solve produced non-finite step");

  // Backward-stable acceptance of every constraint row.
  const double xn = out.x.norm();
  if (std::abs(g.dot(out.x) - target) >
      kFeasTolRel * (std::abs(target) + g.norm() * xn + 1e-300))
    throw DegenerateDirection("extra constraint unreachable at tolerance");
  if (d > 0 && (A_ * out.x).norm() > kFeasTolRel * (A_.norm() * xn + 1e-300))
    throw DegenerateDirection("homogeneous constraints violated at tolerance");

  out.energy = w_.dot(out.x.cwiseAbs2());
  return out;
}

EnergySolution solve_weighted_ls(const Matrix& A, const Vector& b,
                                 const Vector& w) {
  WeightedLsSolver solver(A);
  solver.set_weights(w);
  return solver.solve(b);
}

double energy(const Matrix& A, const Vector& b, const Vector& w) {
  return solve_weighted_ls(A, b, w).energy;
}

EnergySolution solve_augmented_ls(const Matrix& A, const Vector& g,
                                  double target, const Vector& w) {
  WeightedLsSolver solver(A);
  solver.set_weights(w);
  return solver.solve_augmented(g, target);
}

double energy_increase_lower_bound(const Vector& x, const Vector& w_old,
                                   const Vector& w_new) {
  if (x.size() != w_old.size() || x.size() != w_new.size())
    throw SolverError("energy_increase_lower_bound: size mismatch");
  double sum = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (!(w_old[i] > 0.0))
      throw SolverError("energy_increase_lower_bound: w_old must be > 0");
    if (w_new[i] < w_old[i])
      throw SolverError("energy_increase_lower_bound: w_new must dominate w_old");
    sum += w_old[i] * x[i] * x[i] * (1.0 - w_old[i] / w_new[i]);
  }
  return sum;
}

}  // namespace lpreg
