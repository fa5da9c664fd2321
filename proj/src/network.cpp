#include "netctl/network.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <string>

namespace netctl {

LinearNetwork::LinearNetwork(Matrix a_in, Matrix b_in, Matrix c_in)
    : a(std::move(a_in)), b(std::move(b_in)), c(std::move(c_in)) {
  if (a.rows() != a.cols()) {
    throw InvalidInputError("LinearNetwork: A must be square");
  }
  if (b.rows() != a.rows()) {
    throw InvalidInputError("LinearNetwork: B row count must equal n");
  }
  if (c.cols() != a.rows()) {
    throw InvalidInputError("LinearNetwork: C column count must equal n");
  }
  if (b.cols() < 1 || c.rows() < 1) {
    throw InvalidInputError("LinearNetwork: B and C must be non-empty");
  }
  require_finite(a, "LinearNetwork A");
  require_finite(b, "LinearNetwork B");
  require_finite(c, "LinearNetwork C");
}

Weights Weights::scalar(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw InvalidWeightError("Weights: scalar weight must be finite and >= 0");
  }
  Weights w;
  w.scalar_ = value;
  return w;
}

Weights Weights::dense(Matrix m) {
  if (m.rows() != m.cols()) {
    throw InvalidWeightError("Weights: dense weight must be square");
  }
  require_finite(m, "Weights dense matrix");
  Weights w;
  w.dense_ = std::move(m);
  return w;
}

Matrix Weights::materialize(Index dim) const {
  if (is_scalar()) return scalar_ * Matrix::Identity(dim, dim);
  if (dense_->rows() != dim) {
    throw InvalidInputError("Weights: dense weight dimension mismatch");
  }
  return *dense_;
}

Matrix Weights::apply_sqrt(const Eigen::Ref<const Matrix>& x) const {
  if (is_scalar()) return std::sqrt(scalar_) * x;
  return sqrt_psd(*dense_) * x;
}

Matrix Weights::apply(const Eigen::Ref<const Matrix>& x) const {
  if (is_scalar()) return scalar_ * x;
  if (dense_->cols() != x.rows()) {
    throw InvalidInputError("Weights: apply dimension mismatch");
  }
  return *dense_ * x;
}

void Weights::require_psd(const char* name, double tol) const {
  if (is_scalar()) {
    if (scalar_ < 0.0) {
      throw InvalidWeightError(std::string(name) + ": scalar weight < 0");
    }
    return;
  }
  sqrt_psd(*dense_, tol);  // throws if asymmetric or indefinite
}

void Weights::require_pd(const char* name, double tol) const {
  if (is_scalar()) {
    if (scalar_ <= 0.0) {
      throw InvalidWeightError(std::string(name) +
                               ": scalar weight must be > 0");
    }
    return;
  }
  const Matrix& w = *dense_;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(w);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > tol * scale ||
      eig.eigenvalues().minCoeff() <= tol * scale) {
    throw InvalidWeightError(std::string(name) +
                             ": weight is not symmetric positive definite");
  }
}

ControlProblem::ControlProblem(Index horizon_in, Weights q_in, Weights r_in,
                               Vector target_in)
    : horizon(horizon_in),
      q(std::move(q_in)),
      r(std::move(r_in)),
      target(std::move(target_in)) {
  if (horizon < 1) throw InvalidInputError("ControlProblem: horizon must be >= 1");
  require_finite(target, "ControlProblem target");
  q.require_psd("ControlProblem Q");
  r.require_pd("ControlProblem R");
}

ControlProblem::ControlProblem(Index horizon_in, double q_in, double r_in,
                               Vector target_in)
    : ControlProblem(horizon_in, Weights::scalar(q_in), Weights::scalar(r_in),
                     std::move(target_in)) {}

ControlSequence ControlSequence::from_stacked(Vector stacked, Index input_dim) {
  if (input_dim < 1 || stacked.size() % input_dim != 0 || stacked.size() == 0) {
    throw InvalidInputError(
        "ControlSequence: stacked size must be a positive multiple of the "
        "input dimension");
  }
  require_finite(stacked, "ControlSequence stacked");
  ControlSequence seq;
  seq.horizon_ = stacked.size() / input_dim;
  seq.m_ = input_dim;
  seq.stacked_ = std::move(stacked);
  return seq;
}

ControlSequence ControlSequence::from_steps(const std::vector<Vector>& steps) {
  if (steps.empty()) {
    throw InvalidInputError("ControlSequence: need at least one step");
  }
  const Index m = steps.front().size();
  Vector stacked(m * static_cast<Index>(steps.size()));
  const Index horizon = static_cast<Index>(steps.size());
  for (Index t = 0; t < horizon; ++t) {
    if (steps[t].size() != m) {
      throw InvalidInputError("ControlSequence: inconsistent step dimensions");
    }
    stacked.segment((horizon - 1 - t) * m, m) = steps[t];
  }
  return from_stacked(std::move(stacked), m);
}

Vector ControlSequence::at(Index t) const {
  if (t < 0 || t >= horizon_) {
    throw InvalidInputError("ControlSequence: time index out of range");
  }
  return stacked_.segment((horizon_ - 1 - t) * m_, m_);
}

Trajectory simulate(const LinearNetwork& net, const ControlSequence& u,
                    const Vector& x0) {
  if (u.input_dim() != net.m()) {
    throw InvalidInputError("simulate: input dimension does not match B");
  }
  if (x0.size() != net.n()) {
    throw InvalidInputError("simulate: initial state dimension mismatch");
  }
  const Index horizon = u.horizon();
  Trajectory traj;
  traj.states.resize(net.n(), horizon + 1);
  traj.states.col(0) = x0;
  for (Index t = 0; t < horizon; ++t) {
    traj.states.col(t + 1) = net.a * traj.states.col(t) + net.b * u.at(t);
  }
  traj.outputs = net.c * traj.states;
  return traj;
}

Trajectory simulate_free(const LinearNetwork& net, const Vector& x0,
                         Index horizon) {
  if (x0.size() != net.n()) {
    throw InvalidInputError("simulate_free: initial state dimension mismatch");
  }
  if (horizon < 0) throw InvalidInputError("simulate_free: negative horizon");
  Trajectory traj;
  traj.states.resize(net.n(), horizon + 1);
  traj.states.col(0) = x0;
  for (Index t = 0; t < horizon; ++t) {
    traj.states.col(t + 1) = net.a * traj.states.col(t);
  }
  traj.outputs = net.c * traj.states;
  return traj;
}

Matrix output_ctrb_matrix(const LinearNetwork& net, Index horizon) {
  if (horizon < 1) throw InvalidInputError("output_ctrb_matrix: horizon < 1");
  const Index m = net.m();
  Matrix ctrb(net.p(), m * horizon);
  Matrix running = net.c;  // C A^t, advanced by right-multiplication
  for (Index j = 0; j < horizon; ++j) {
    ctrb.middleCols(j * m, m) = running * net.b;
    if (j + 1 < horizon) running = running * net.a;
  }
  return ctrb;
}

Matrix output_gramian(const LinearNetwork& net, Index horizon) {
  if (horizon < 1) throw InvalidInputError("output_gramian: horizon < 1");
  Matrix w = Matrix::Zero(net.p(), net.p());
  Matrix running = net.c;
  for (Index j = 0; j < horizon; ++j) {
    const Matrix block = running * net.b;
    w.noalias() += block * block.transpose();
    if (j + 1 < horizon) running = running * net.a;
  }
  return w;
}

Matrix hankel_blocks(const LinearNetwork& net, Index horizon) {
  if (horizon < 1) throw InvalidInputError("hankel_blocks: horizon < 1");
  const Index m = net.m();
  const Index p = net.p();
  Matrix h = Matrix::Zero(p * (horizon - 1), m * horizon);
  if (horizon == 1) return h;

  // Markov blocks C A^k B for k = 0..T-2.
  std::vector<Matrix> markov;
  markov.reserve(horizon - 1);
  Matrix running = net.c;
  for (Index k = 0; k + 1 < horizon; ++k) {
    markov.push_back(running * net.b);
    running = running * net.a;
  }

  // Row block bi carries y(bi+1); column block bj multiplies u(T-1-bj).
  // y(i) depends on u(t) for t < i through C A^{i-1-t} B.
  for (Index bi = 0; bi + 1 < horizon; ++bi) {
    for (Index bj = horizon - 1 - bi; bj < horizon; ++bj) {
      const Index k = bi + bj + 1 - horizon;
      h.block(bi * p, bj * m, p, m) = markov[static_cast<size_t>(k)];
    }
  }
  return h;
}

namespace {

// M x = [Q^{1/2} H x; R^{1/2} x] without materializing scalar weights.
Matrix apply_weight_stack(const Weights& q, const Weights& r, const Matrix& h,
                          const Eigen::Ref<const Matrix>& x) {
  Matrix top;
  if (h.rows() > 0 && !q.is_zero()) {
    top = q.apply_sqrt(h * x);
  } else {
    top = Matrix::Zero(h.rows(), x.cols());
  }
  Matrix bottom = r.apply_sqrt(x);
  Matrix stacked(top.rows() + bottom.rows(), x.cols());
  stacked.topRows(top.rows()) = top;
  stacked.bottomRows(bottom.rows()) = bottom;
  return stacked;
}

}  // namespace

ControlSequence model_based_optimal(const LinearNetwork& net,
                                    const ControlProblem& prob, double tol) {
  const Index horizon = prob.horizon;
  const Index m = net.m();
  const Index p = net.p();
  if (prob.target.size() != p) {
    throw InvalidInputError("model_based_optimal: target dimension != p");
  }
  if (!prob.q.is_scalar() &&
      prob.q.matrix().rows() != p * (horizon - 1)) {
    throw InvalidInputError("model_based_optimal: Q dimension != p(T-1)");
  }
  if (!prob.r.is_scalar() && prob.r.matrix().rows() != m * horizon) {
    throw InvalidInputError("model_based_optimal: R dimension != mT");
  }

  const Matrix ctrb = output_ctrb_matrix(net, horizon);
  Vector base = pinv_apply(ctrb, prob.target, tol);
  const double residual = (ctrb * base - prob.target).norm();
  const double target_norm = prob.target.norm();
  if (residual > 1e-6 * std::max(target_norm, 1e-300)) {
    throw ReachabilityError(
        "model_based_optimal: target outside the reachable set (relative "
        "residual " +
            std::to_string(residual / std::max(target_norm, 1e-300)) + ")",
        residual);
  }

  // Minimum 2-norm solution is already optimal when the cost is uniform input
  // energy: the kernel correction vanishes.
  if (prob.q.is_zero() && prob.r.is_scalar()) {
    return ControlSequence::from_stacked(std::move(base), m);
  }

  const Matrix kernel = kernel_basis(ctrb, tol);
  if (kernel.cols() == 0) {
    return ControlSequence::from_stacked(std::move(base), m);
  }

  const Matrix hank =
      prob.q.is_zero() ? Matrix::Zero(0, m * horizon)
                       : hankel_blocks(net, horizon);
  const Matrix mk = apply_weight_stack(prob.q, prob.r, hank, kernel);
  const Matrix mw = apply_weight_stack(prob.q, prob.r, hank, base);
  const Matrix beta = pinv_apply(mk, mw, tol);
  Vector u = base - kernel * beta;
  return ControlSequence::from_stacked(std::move(u), m);
}

ControlSequence model_based_min_energy_gramian(const LinearNetwork& net,
                                               Index horizon, const Vector& y_f,
                                               bool explicit_inverse) {
  if (horizon < 1) {
    throw InvalidInputError("model_based_min_energy_gramian: horizon < 1");
  }
  if (y_f.size() != net.p()) {
    throw InvalidInputError(
        "model_based_min_energy_gramian: target dimension != p");
  }
  const Matrix w = output_gramian(net, horizon);
  Vector z;
  if (explicit_inverse) {
    z = w.inverse() * y_f;
  } else {
    z = w.partialPivLu().solve(y_f);
  }
  if (!z.allFinite()) {
    throw ControllabilityError(
        "model_based_min_energy_gramian: Gramian is singular (network not "
        "output controllable over this horizon)");
  }

  // u(t) = B^T (A^T)^{T-1-t} C^T z, accumulated backward in time so no power
  // of A is ever formed.
  const Index m = net.m();
  Vector stacked(m * horizon);
  Vector v = net.c.transpose() * z;
  for (Index k = 0; k < horizon; ++k) {  // k indexes t = T-1-k
    stacked.segment(k * m, m) = net.b.transpose() * v;
    if (k + 1 < horizon) v = net.a.transpose() * v;
  }
  return ControlSequence::from_stacked(std::move(stacked), m);
}

ControllabilityReport is_output_controllable(const LinearNetwork& net,
                                             Index horizon, double tol) {
  const Matrix ctrb = output_ctrb_matrix(net, horizon);
  const SvdFactorization f = svd(ctrb);
  ControllabilityReport report;
  report.rank = f.rank(tol);
  report.required = net.p();
  report.controllable = report.rank == report.required;
  report.sigma_min =
      f.sigma.size() > 0 ? f.sigma(f.sigma.size() - 1) : 0.0;
  return report;
}

}  // namespace netctl
