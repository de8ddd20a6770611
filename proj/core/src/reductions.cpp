#include "lpreg/reductions.hpp"

#include "lpreg/numerics.hpp"
#include "lpreg/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace lpreg {

void GeneralInstance::validate() const {
  if (N.rows() < 1 || N.cols() < 1) throw SolverError("GeneralInstance: empty N");
  if (v.size() != N.rows()) throw SolverError("GeneralInstance: v size mismatch");
  if (A.rows() > 0 && A.cols() != N.cols())
    throw SolverError("GeneralInstance: A column mismatch");
  if (b.size() != A.rows()) throw SolverError("GeneralInstance: b size mismatch");
  if (!N.allFinite() || !v.allFinite() || !A.allFinite() || !b.allFinite())
    throw SolverError("GeneralInstance: non-finite data");
}

GeneralInstance GeneralInstance::unconstrained(Matrix N, Vector v, double p) {
  GeneralInstance inst;
  inst.A.resize(0, N.cols());
  inst.b.resize(0);
  inst.N = std::move(N);
  inst.v = std::move(v);
  inst.p = p;
  return inst;
}

LiftedInstance lift_general(const GeneralInstance& inst) {
  inst.validate();
  const Index n = inst.n(), m = inst.m(), s = inst.A.rows();
  LiftedInstance out;
  out.constraint.setZero(m + s, n + m);
  out.constraint.topLeftCorner(m, n) = inst.N;
  out.constraint.block(0, n, m, m) = -Matrix::Identity(m, m);
  if (s > 0) out.constraint.block(m, 0, s, n) = inst.A;
  out.rhs.resize(m + s);
  out.rhs.head(m) = inst.v;
  out.rhs.tail(s) = inst.b;
  out.x_dim = n;
  out.z_dim = m;
  out.p = inst.p;
  return out;
}

GeneralSystem::GeneralSystem(GeneralInstance inst) : inst_(std::move(inst)) {
  inst_.validate();
  const Index n = inst_.n(), s = inst_.A.rows();
  if (s == 0) {
    null_basis_ = Matrix::Identity(n, n);
    x_particular_ = Vector::Zero(n);
  } else {
    Eigen::BDCSVD<Matrix> svd(inst_.A,
                              Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double tol = kRankTolRel * (sv.size() ? sv[0] : 0.0);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
      if (sv[i] > tol) ++rank;
    // min-norm particular solution of Ax = b
    Vector t = svd.matrixU().leftCols(rank).transpose() * inst_.b;
    for (Index i = 0; i < rank; ++i) t[i] /= sv[i];
    x_particular_ = svd.matrixV().leftCols(rank) * t;
    const double resid = (inst_.A * x_particular_ - inst_.b).norm();
    if (resid > kFeasTolRel * (1.0 + inst_.b.norm()))
      throw InfeasibleDemand("GeneralSystem: b not in span(A)");
    null_basis_ = svd.matrixV().rightCols(n - rank);
  }
  B_ = inst_.N * null_basis_;
  v_eff_ = inst_.v - inst_.N * x_particular_;
}

Vector GeneralSystem::pack(const Vector& x) const {
  Vector full(iterate_size());
  full << x, inst_.N * x - inst_.v;
  return full;
}

EnergySolution GeneralSystem::minimize_energy(const Vector& w) const {
  if (w.size() != inst_.m()) throw SolverError("minimize_energy: weight size");
  // z = B c - v_eff; unconstrained weighted least squares in c.
  EnergySolution out;
  if (B_.cols() == 0) {
    out.x = pack(x_particular_);
    out.energy = w.dot(objective_part(out.x).cwiseAbs2());
    return out;
  }
  Matrix M(B_.cols(), B_.cols());
  M.setZero();
  M.selfadjointView<Eigen::Lower>().rankUpdate(
      B_.transpose() * w.cwiseSqrt().asDiagonal());
  M.triangularView<Eigen::StrictlyUpper>() = M.transpose();
  GramSolver Ms;
  Ms.compute(M);
  const Vector c = Ms.solve(B_.transpose() * w.cwiseProduct(v_eff_));
  out.x = pack(x_particular_ + null_basis_ * c);
  if (!out.x.allFinite()) throw SingularSystem("general solve non-finite");
  out.energy = w.dot(objective_part(out.x).cwiseAbs2());
  out.multiplier = c;
  return out;
}

EnergySolution GeneralSystem::minimize_energy_augmented(const Vector& w,
                                                        const Vector& g,
                                                        double target) const {
  if (w.size() != inst_.m() || g.size() != inst_.m())
    throw SolverError("minimize_energy_augmented: size mismatch");
  // Homogeneous constraints leave dx = Z c, dz = B c; the single border row
  // <g, dz> = target becomes <B^T g, c> = target.
  EnergySolution out;
  const Vector h = B_.transpose() * g;
  auto degenerate_or_zero = [&]() -> EnergySolution {
    if (std::abs(target) < 1e-300) {
      EnergySolution z0;
      z0.x = Vector::Zero(iterate_size());
      return z0;
    }
    throw DegenerateDirection("gradient row unreachable on the null space");
  };
  if (B_.cols() == 0 || h.norm() == 0.0) return degenerate_or_zero();

  Matrix M(B_.cols(), B_.cols());
  M.setZero();
  M.selfadjointView<Eigen::Lower>().rankUpdate(
      B_.transpose() * w.cwiseSqrt().asDiagonal());
  M.triangularView<Eigen::StrictlyUpper>() = M.transpose();
  GramSolver Ms;
  Ms.compute(M);
  const Vector y = Ms.solve(h);
  const double denom = h.dot(y);
  if (!(denom > 0.0) || !std::isfinite(denom)) return degenerate_or_zero();
  const double mu = target / denom;
  if (!std::isfinite(mu)) return degenerate_or_zero();
  const Vector c = mu * y;
  const Vector dz = B_ * c;
  // mu is defined so <g, dz> = target; reject if rounding broke that.
  if (std::abs(g.dot(dz) - target) >
      kFeasTolRel * (std::abs(target) + g.norm() * dz.norm() + 1e-300))
    throw DegenerateDirection("gradient row unreachable at tolerance");
  out.x.resize(iterate_size());
  out.x << null_basis_ * c, dz;
  if (!out.x.allFinite())
    throw DegenerateDirection("augmented general solve non-finite");
  out.energy = w.dot(dz.cwiseAbs2());
  out.multiplier = c;
  return out;
}

double GeneralSystem::feasibility_error(const Vector& full) const {
  const Vector x = full.head(inst_.n());
  const Vector z = full.tail(inst_.m());
  double nr2 = (inst_.N * x - inst_.v - z).squaredNorm();
  if (inst_.A.rows() > 0) nr2 += (inst_.A * x - inst_.b).squaredNorm();
  const double rhs_norm =
      std::sqrt(inst_.v.squaredNorm() + inst_.b.squaredNorm());
  return std::sqrt(nr2) / (1.0 + rhs_norm);
}

Vector solve_general_structured(const GeneralInstance& inst,
                                const Vector& w_on_residual) {
  inst.validate();
  if (w_on_residual.size() != inst.m())
    throw SolverError("solve_general_structured: weight size mismatch");
  if ((w_on_residual.array() < 0.0).any())
    throw SolverError("solve_general_structured: negative weight");
  const Matrix& N = inst.N;
  const Matrix& A = inst.A;
  const Vector& w = w_on_residual;
  const Index n = inst.n();

  // x = (N^T R N)^+ (N^T R v + A^T (A (N^T R N)^+ A^T)^+ (b - A (N^T R N)^+ N^T R v))
  Matrix H(n, n);
  H.setZero();
  H.selfadjointView<Eigen::Lower>().rankUpdate(
      N.transpose() * w.cwiseSqrt().asDiagonal());
  H.triangularView<Eigen::StrictlyUpper>() = H.transpose();
  GramSolver Hs;
  Hs.compute(H);

  const Vector t1 = N.transpose() * w.cwiseProduct(inst.v);
  if (A.rows() == 0) return Hs.solve(t1);

  const Matrix HpAt = Hs.solve_many(A.transpose());
  const Matrix K = A * HpAt;
  GramSolver Ks;
  Ks.compute(K);
  const Vector y = Ks.solve(inst.b - A * Hs.solve(t1));
  Vector x = Hs.solve(t1 + A.transpose() * y);
  const double resid = (A * x - inst.b).norm();
  if (resid > kFeasTolRel * (1.0 + inst.b.norm()))
    throw InfeasibleDemand("solve_general_structured: constraints unreachable");
  return x;
}

SmallPResult solve_small_p(const Matrix& A, const Vector& b, double p,
                           double epsilon) {
  if (!(p > 1.0 && p < 2.0)) throw SolverError("solve_small_p: need 1 < p < 2");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw SolverError("solve_small_p: need 0 < eps < 1");
  const Index d = A.rows(), n = A.cols();
  if (b.size() != d) throw SolverError("solve_small_p: size mismatch");

  SmallPResult out;
  if (b.norm() == 0.0) {
    out.x = Vector::Zero(n);
    out.dual_y = Vector::Zero(d);
    return out;
  }

  const double pp = dual_exponent(p);  // > 2
  const double eps_dual = std::min(epsilon, 1.0 / std::pow(double(n), 3.0));

  // Dual problem min ||A^T y||_{p'} s.t. <b, y> = 1, lifted to general form.
  GeneralInstance dual;
  dual.N = A.transpose();
  dual.v = Vector::Zero(n);
  dual.A = b.transpose();
  dual.b = Vector::Constant(1, 1.0);
  dual.p = pp;
  GeneralSystem sys(dual);

  RefineOptions opts;
  opts.epsilon = eps_dual;
  const RefineResult rr = lp_refine(sys, pp, opts);
  out.linear_solves = rr.linear_solves;
  out.residual_calls = rr.residual_calls;
  out.dual_y = rr.x.head(d);

  const Vector Aty = A.transpose() * out.dual_y;
  const double nrm = lp_norm(Aty, pp);
  if (!(nrm > 1e-300)) throw DualDegenerate("||A^T y||_p' vanishes");

  // x = (<b,y> / ||A^T y||^{p'}) (A^T y)^{p'-1}, evaluated with ratios to
  // keep large p' representable.
  const double by = b.dot(out.dual_y);
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    const double ratio = std::abs(Aty[i]) / nrm;
    const double mag = ratio > 0.0 ? std::pow(ratio, pp - 1.0) : 0.0;
    x[i] = by / nrm * (Aty[i] >= 0.0 ? mag : -mag);
  }

  // Feasibility correction always runs: x += A^T (A A^T)^+ (b - Ax).
  Matrix G(d, d);
  G.setZero();
  G.selfadjointView<Eigen::Lower>().rankUpdate(A);
  G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
  GramSolver Gs;
  Gs.compute(G);
  x += A.transpose() * Gs.solve(b - A * x);

  out.x = std::move(x);
  return out;
}

SmallPResult solve_small_p_general(const GeneralInstance& inst,
                                   double epsilon) {
  inst.validate();
  if (!(inst.p > 1.0 && inst.p < 2.0))
    throw SolverError("solve_small_p_general: need 1 < p < 2");
  const Index n = inst.n(), m = inst.m(), s = inst.A.rows();

  // Particular feasible x and the reachable residual directions N * null(A).
  Vector x_part = Vector::Zero(n);
  Matrix dirs = inst.N;
  if (s > 0) {
    x_part = solve_weighted_ls(inst.A, inst.b, Vector::Ones(n)).x;
    Eigen::BDCSVD<Matrix> svd(inst.A, Eigen::ComputeFullV);
    const double tol =
        kRankTolRel * (svd.singularValues().size() ? svd.singularValues()[0] : 0.0);
    Index rank = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > tol) ++rank;
    if (rank >= n) {
      // Unique feasible point; nothing to optimize.
      SmallPResult out;
      out.x = x_part;
      out.dual_y = Vector::Zero(0);
      out.linear_solves = 1;
      return out;
    }
    dirs = inst.N * svd.matrixV().rightCols(n - rank);
  }
  const Vector z0 = inst.N * x_part - inst.v;

  // P = I - Q Q^T with Q an orthonormal range basis of dirs.
  Eigen::BDCSVD<Matrix> dsvd(dirs, Eigen::ComputeThinU);
  const double dtol =
      kRankTolRel *
      (dsvd.singularValues().size() ? dsvd.singularValues()[0] : 0.0);
  Index drank = 0;
  for (Index i = 0; i < dsvd.singularValues().size(); ++i)
    if (dsvd.singularValues()[i] > dtol) ++drank;
  Matrix P = Matrix::Identity(m, m);
  if (drank > 0) {
    const Matrix Q = dsvd.matrixU().leftCols(drank);
    P -= Q * Q.transpose();
  }

  SmallPResult inner = solve_small_p(P, P * z0, inst.p, epsilon);
  const Vector z = inner.x;

  // Read x back: exact least-squares fit of Nx = z + v subject to Ax = b.
  GeneralInstance fit = inst;
  fit.v = z + inst.v;
  SmallPResult out;
  out.x = solve_general_structured(fit, Vector::Ones(m));
  out.dual_y = std::move(inner.dual_y);
  out.linear_solves = inner.linear_solves + 2;
  out.residual_calls = inner.residual_calls;
  return out;
}

}  // namespace lpreg
