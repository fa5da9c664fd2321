#include "netctl/sysid.hpp"

#include "netctl/io.hpp"
#include "netctl/linalg.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace netctl {
namespace {

// Identification reconstructs the state-space matrices, which is only
// possible when the outputs are the states themselves.
void require_full_state(const DataMatrices& data, const char* where) {
  if (data.n > 0 && data.n != data.p) {
    throw InvalidInputError(
        std::string(where) +
        ": partial-state data (p != n); without full-state measurements the "
        "network matrix cannot be exactly reconstructed from any amount of "
        "data, so identification is not attempted");
  }
}

// Minimum-norm least squares y x^+ from the thin SVD of x, never forming the
// pseudoinverse itself.
Matrix fit_min_norm(const Eigen::Ref<const Matrix>& y,
                    const SvdFactorization& f, Index rank) {
  Matrix coeffs = y * f.v.leftCols(rank);
  for (Index i = 0; i < rank; ++i) coeffs.col(i) /= f.sigma(i);
  return coeffs * f.u.leftCols(rank).transpose();
}

Index safe_rank(const SvdFactorization& f, double tol) {
  return f.sigma.size() == 0 ? 0 : f.rank(tol);
}

[[noreturn]] void throw_zero_excitation(const char* where) {
  throw DataRankError(std::string(where) +
                          ": input data has rank 0; the experiments carry no "
                          "excitation to fit against",
                      0, 1);
}

}  // namespace

LinearNetwork IdentifiedModel::to_network() const {
  const Index n = a_hat.rows();
  return LinearNetwork(a_hat, b_hat, Matrix::Identity(n, n));
}

Matrix estimate_ctrb(const DataMatrices& data, double tol, double* residual) {
  data.validate();
  require_full_state(data, "estimate_ctrb");

  const SvdFactorization f = svd(data.u);
  const Index rank = safe_rank(f, tol);
  if (rank == 0) throw_zero_excitation("estimate_ctrb");

  Matrix c_hat = fit_min_norm(data.y_t, f, rank);
  if (residual != nullptr) {
    *residual = (data.y_t - c_hat * data.u).norm();
  }
  return c_hat;
}

IdentifiedModel subspace_id(const DataMatrices& data, double tol) {
  if (data.horizon < 2) {
    throw InvalidInputError(
        "subspace_id: horizon must be at least 2 to expose the shifted "
        "controllability blocks that determine A");
  }
  data.validate();
  require_full_state(data, "subspace_id");

  const SvdFactorization fu = svd(data.u);
  const Index rank_u = safe_rank(fu, tol);
  if (rank_u == 0) throw_zero_excitation("subspace_id");

  IdentifiedModel model;
  const Matrix c_hat = fit_min_norm(data.y_t, fu, rank_u);
  model.ctrb_residual = (data.y_t - c_hat * data.u).norm();

  const Index m = data.m;
  const Index n = c_hat.rows();
  const Index shifted = c_hat.cols() - m;  // (T-1)m

  model.b_hat = c_hat.leftCols(m);

  // The blocks of C_T advance by one application of A, so dropping the first
  // input block on one side and the last on the other leaves C2 = A C1.
  const Matrix c1 = c_hat.leftCols(shifted);
  const Matrix c2 = c_hat.rightCols(shifted);
  const SvdFactorization f1 = svd(c1);
  const Index rank1 = safe_rank(f1, tol);
  model.a_hat = rank1 == 0 ? Matrix(Matrix::Zero(n, n))
                           : fit_min_norm(c2, f1, rank1);
  model.shift_residual = (c2 - model.a_hat * c1).norm();

  if (rank_u < data.u.rows()) {
    std::ostringstream msg;
    msg << "input data spans " << rank_u << " of " << data.u.rows()
        << " input directions; the controllability fit is the minimum-norm "
           "completion (residual "
        << model.ctrb_residual << ")";
    model.warnings.push_back(msg.str());
  }
  if (rank1 < n) {
    std::ostringstream msg;
    msg << "shifted controllability blocks span " << rank1 << " of " << n
        << " state directions; the dynamics fit is the minimum-norm "
           "completion (residual "
        << model.shift_residual << ")";
    model.warnings.push_back(msg.str());
  }
  return model;
}

Matrix stabilize(const Eigen::Ref<const Matrix>& a_hat) {
  const double rho = spectral_radius(a_hat);
  if (rho < 1.0) return a_hat;
  return a_hat / (rho + 0.01);
}

ControlSequence two_step_min_energy(const DataMatrices& data,
                                    const Eigen::Ref<const Vector>& y_f,
                                    double tol) {
  const IdentifiedModel model = subspace_id(data, tol);
  const LinearNetwork net = model.to_network();
  ControlProblem prob(data.horizon, Weights::scalar(0.0), Weights::scalar(1.0),
                      y_f);
  return model_based_optimal(net, prob, tol);
}

void save_identified_model(const std::filesystem::path& path,
                           const IdentifiedModel& model) {
  std::ostringstream note;
  note << "identified model (estimates, not ground truth); ctrb fit residual "
       << model.ctrb_residual << ", shift fit residual "
       << model.shift_residual;
  save_network(path, model.to_network(), note.str());
}

}  // namespace netctl
