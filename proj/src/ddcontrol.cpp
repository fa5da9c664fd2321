#include "netctl/ddcontrol.hpp"

#include "netctl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace netctl {

namespace {

// Rank diagnostics ride along for free on small data but would dominate the
// solve at swing scale, so they are skipped (-1) above a flop budget.
constexpr double kRankFlopBudget = 2e9;

Index maybe_rank(const Eigen::Ref<const Matrix>& m, double tol) {
  const double rows = static_cast<double>(m.rows());
  const double cols = static_cast<double>(m.cols());
  const double flops = std::min(rows, cols) * std::min(rows, cols) *
                       std::max(rows, cols);
  if (m.size() == 0 || flops > kRankFlopBudget) return -1;
  return svd(m).rank(tol);
}

void check_target(const Eigen::Ref<const Vector>& y_f, Index expected,
                  const char* who) {
  if (y_f.size() != expected) {
    throw InvalidInputError(std::string(who) +
                            ": target length does not match output rows");
  }
  require_finite(y_f, who);
}

// Experiments that recorded a nonzero initial state cannot feed the
// zero-initial-condition solvers directly.
void require_rest_data(const DataMatrices& data, const char* who) {
  data.validate();
  if (data.x0.has_value() && data.x0->size() > 0 &&
      data.x0->cwiseAbs().maxCoeff() != 0.0) {
    throw InvalidInputError(
        std::string(who) +
        ": data has nonzero initial states; reduce through "
        "dd_optimal_x0 or pass zero-state experiments");
  }
}

struct CoreResult {
  Vector alpha;
  DDDiagnostics diag;
};

// Least-squares step min ||a x - b|| truncated against the joint scale of a
// and b, not just sigma_max(a). When the constraint kernel lies inside the
// cost kernel, a is an exact zero contaminated by rounding; a cutoff relative
// only to a itself would invert that noise and send x to 1/eps magnitudes.
Vector scaled_lstsq(const Eigen::Ref<const Matrix>& a,
                    const Eigen::Ref<const Vector>& b, double tol) {
  SvdFactorization f = svd(a);
  const double scale =
      std::max(f.sigma.size() > 0 ? f.sigma(0) : 0.0, b.norm());
  Vector x = Vector::Zero(a.cols());
  for (Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma(i) > tol * scale) {
      x += f.v.col(i) * (f.u.col(i).dot(b) / f.sigma(i));
    }
  }
  return x;
}

// Shared solver: minimize the weighted cost over alpha subject to
// constraint * alpha = rhs, via a min-norm particular solution plus a
// least-squares correction inside the constraint kernel.
CoreResult optimal_core(const Eigen::Ref<const Matrix>& u_data,
                        const Eigen::Ref<const Matrix>& y_mid,
                        const Eigen::Ref<const Matrix>& constraint,
                        const Weights& q, const Weights& r,
                        const Eigen::Ref<const Vector>& rhs, double tol) {
  const Index n_data = constraint.cols();
  SvdFactorization f = svd(constraint);
  const Index rank = f.rank(tol);
  if (rank < constraint.rows()) {
    throw DataRankError(
        "data does not span the requested target space; collect richer "
        "experiments",
        rank, constraint.rows());
  }

  // Min-norm particular solution from the factors already in hand.
  Vector coeffs =
      (f.u.leftCols(rank).transpose() * rhs).cwiseQuotient(f.sigma.head(rank));
  Vector alpha0 = f.v.leftCols(rank) * coeffs;

  CoreResult out;
  out.diag.kernel_dim = n_data - rank;
  out.diag.rank_u = maybe_rank(u_data, tol);

  if (out.diag.kernel_dim == 0) {
    out.alpha = std::move(alpha0);
  } else {
    // Kernel-restricted least squares without materializing a kernel basis:
    // with Pi the orthogonal projector onto Ker(constraint), the correction
    // K (L K)^+ L alpha0 equals the min-norm solution of
    //   min_c ||(L Pi) c - L alpha0||,
    // which already lies in Im(Pi L^T). L Pi keeps the singular values of
    // L K, so the truncation behaves identically, while the storage stays
    // proportional to the experiment count instead of its square.
    const Index mid_rows = q.is_zero() ? 0 : y_mid.rows();
    Matrix l_proj(mid_rows + u_data.rows(), n_data);
    Vector l_alpha0(l_proj.rows());
    if (mid_rows > 0) {
      l_proj.topRows(mid_rows) = q.apply_sqrt(y_mid);
      l_alpha0.head(mid_rows) = l_proj.topRows(mid_rows) * alpha0;
    }
    l_proj.bottomRows(u_data.rows()) = r.apply_sqrt(u_data);
    l_alpha0.tail(u_data.rows()) = l_proj.bottomRows(u_data.rows()) * alpha0;
    auto row_basis = f.v.leftCols(rank);
    l_proj -= (l_proj * row_basis) * row_basis.transpose();
    out.alpha = alpha0 - scaled_lstsq(l_proj, l_alpha0, tol);
  }

  out.diag.residual = (constraint * out.alpha - rhs).norm();
  return out;
}

DDSolution finish_with_alpha(const Eigen::Ref<const Matrix>& u_data,
                             Index input_dim, CoreResult core) {
  DDSolution sol;
  sol.u = ControlSequence::from_stacked(u_data * core.alpha, input_dim);
  sol.alpha = std::move(core.alpha);
  sol.diagnostics = std::move(core.diag);
  return sol;
}

// Eigendecomposition-based pseudoinverse of a corrected (possibly indefinite)
// Gram matrix, zeroing |lambda| <= rel_tol * max|lambda|. Warns through
// `warnings` when a strictly negative eigenvalue survives, since that signals
// the noise correction overshooting the sample Gram matrix.
Matrix corrected_pinv(const Eigen::Ref<const Matrix>& gram, double rel_tol,
                      std::vector<std::string>& warnings, const char* who) {
  EighFactorization f = eigh(gram);
  const Index n = f.values.size();
  const double cut = n > 0 ? rel_tol * f.values.cwiseAbs().maxCoeff() : 0.0;
  Vector inv = Vector::Zero(n);
  bool negative = false;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(f.values(i)) > cut) {
      inv(i) = 1.0 / f.values(i);
      if (f.values(i) < 0.0) negative = true;
    }
  }
  if (negative) {
    warnings.push_back(std::string(who) +
                       ": corrected Gram matrix is indefinite; the variance "
                       "estimate likely exceeds the sample noise level");
  }
  return f.vectors * inv.asDiagonal() * f.vectors.transpose();
}

double auto_eps(const Eigen::Ref<const Matrix>& gram) {
  const double scale = std::abs(gram.trace()) / std::max<Index>(gram.rows(), 1);
  return scale > 0.0 ? 1e-6 * scale : 1e-12;
}

}  // namespace

DDSolution dd_optimal(const Eigen::Ref<const Matrix>& u_data,
                      const Eigen::Ref<const Matrix>& y_mid,
                      const Eigen::Ref<const Matrix>& constraint,
                      const Weights& q, const Weights& r,
                      const Eigen::Ref<const Vector>& rhs, Index input_dim,
                      double tol) {
  if (input_dim <= 0 || u_data.rows() % input_dim != 0) {
    throw InvalidInputError("dd_optimal: input rows are not a multiple of the "
                            "input dimension");
  }
  if (u_data.cols() != constraint.cols() ||
      (y_mid.rows() > 0 && y_mid.cols() != constraint.cols())) {
    throw InvalidInputError("dd_optimal: data blocks disagree on the number "
                            "of experiments");
  }
  check_target(rhs, constraint.rows(), "dd_optimal");
  q.require_psd("dd_optimal Q");
  r.require_pd("dd_optimal R");

  CoreResult core = optimal_core(u_data, y_mid, constraint, q, r, rhs, tol);
  return finish_with_alpha(u_data, input_dim, std::move(core));
}

DDSolution dd_optimal(const DataMatrices& data, const Weights& q,
                      const Weights& r, const Eigen::Ref<const Vector>& y_f,
                      double tol) {
  require_rest_data(data, "dd_optimal");
  return dd_optimal(data.u, data.y_mid, data.y_t, q, r, y_f, data.m, tol);
}

DDSolution dd_optimal_x0(const DataMatrices& data, const Weights& q,
                         const Weights& r,
                         const Eigen::Ref<const Vector>& y_f,
                         double tol) {
  data.validate();
  if (!data.x0.has_value()) {
    throw InvalidInputError(
        "dd_optimal_x0: data has no recorded initial states");
  }
  check_target(y_f, data.p, "dd_optimal_x0");
  q.require_psd("dd_optimal_x0 Q");
  r.require_pd("dd_optimal_x0 R");

  // Combinations in the kernel of X0 are exactly the data mixtures whose
  // aggregate initial state vanishes, restoring zero-state responses.
  Matrix kx = kernel_basis(*data.x0, tol);
  if (kx.cols() == 0) {
    throw DataRankError(
        "dd_optimal_x0: no data combination cancels the initial states",
        0, 1);
  }
  Matrix u_red = data.u * kx;
  Matrix ymid_red = data.y_mid.rows() > 0 ? Matrix(data.y_mid * kx)
                                          : Matrix(0, kx.cols());
  Matrix yt_red = data.y_t * kx;

  CoreResult core = optimal_core(u_red, ymid_red, yt_red, q, r, y_f, tol);
  core.alpha = kx * core.alpha;
  core.diag.rank_u = maybe_rank(data.u, tol);

  DDSolution sol;
  sol.u = ControlSequence::from_stacked(data.u * core.alpha, data.m);
  sol.alpha = std::move(core.alpha);
  sol.diagnostics = std::move(core.diag);
  sol.diagnostics.residual = (data.y_t * *sol.alpha - y_f).norm();
  return sol;
}

DDSolution dd_min_energy(const DataMatrices& data,
                         const Eigen::Ref<const Vector>& y_f, double tol) {
  require_rest_data(data, "dd_min_energy");
  check_target(y_f, data.p, "dd_min_energy");

  DDSolution sol;
  sol.diagnostics.rank_yt = maybe_rank(data.y_t, tol);
  if (sol.diagnostics.rank_yt >= 0 && sol.diagnostics.rank_yt < data.p) {
    throw DataRankError(
        "dd_min_energy: final outputs do not span the target space",
        sol.diagnostics.rank_yt, data.p);
  }

  SvdFactorization fu = svd(data.u);
  const Index rank_u = fu.rank(tol);
  sol.diagnostics.rank_u = rank_u;

  // W = YT U^+ estimates the input-to-final-output map; steering is then a
  // min-norm solve against W.
  Matrix u_pinv = fu.v.leftCols(rank_u) *
                  fu.sigma.head(rank_u).cwiseInverse().asDiagonal() *
                  fu.u.leftCols(rank_u).transpose();
  Matrix w = data.y_t * u_pinv;

  SvdFactorization fw = svd(w);
  const Index rank_w = fw.rank(tol);
  Vector u_hat = fw.v.leftCols(rank_w) *
                 (fw.u.leftCols(rank_w).transpose() * y_f)
                     .cwiseQuotient(fw.sigma.head(rank_w));
  sol.u = ControlSequence::from_stacked(std::move(u_hat), data.m);
  sol.diagnostics.residual = (w * sol.u.stacked() - y_f).norm();
  return sol;
}

DDSolution dd_min_energy_long_form(const DataMatrices& data,
                                   const Eigen::Ref<const Vector>& y_f,
                                   double tol) {
  require_rest_data(data, "dd_min_energy_long_form");
  check_target(y_f, data.p, "dd_min_energy_long_form");

  SvdFactorization fy = svd(data.y_t);
  const Index rank_yt = fy.rank(tol);
  if (rank_yt < data.p) {
    throw DataRankError(
        "dd_min_energy_long_form: final outputs do not span the target space",
        rank_yt, data.p);
  }

  Vector alpha0 = fy.v.leftCols(rank_yt) *
                  (fy.u.leftCols(rank_yt).transpose() * y_f)
                      .cwiseQuotient(fy.sigma.head(rank_yt));
  Vector w = data.u * alpha0;

  DDSolution sol;
  sol.diagnostics.rank_yt = rank_yt;
  sol.diagnostics.kernel_dim = data.num_experiments() - rank_yt;
  sol.diagnostics.rank_u = maybe_rank(data.u, tol);

  Vector u_hat;
  if (sol.diagnostics.kernel_dim == 0) {
    u_hat = std::move(w);
  } else {
    // Remove the component of w reachable through kernel directions; what is
    // left is the minimum-norm input consistent with the target. U Pi shares
    // its image and singular values with U K for any orthonormal kernel
    // basis K, without the basis itself.
    auto row_basis = fy.v.leftCols(rank_yt);
    Matrix m = data.u - (data.u * row_basis) * row_basis.transpose();
    u_hat = w - m * scaled_lstsq(m, w, tol);
  }
  sol.u = ControlSequence::from_stacked(std::move(u_hat), data.m);
  return sol;
}

DDSolution dd_min_energy_approx(const DataMatrices& data,
                                const Eigen::Ref<const Vector>& y_f,
                                double tol) {
  require_rest_data(data, "dd_min_energy_approx");
  check_target(y_f, data.p, "dd_min_energy_approx");

  SvdFactorization fy = svd(data.y_t);
  const Index rank_yt = fy.rank(tol);
  if (rank_yt < data.p) {
    throw DataRankError(
        "dd_min_energy_approx: final outputs do not span the target space",
        rank_yt, data.p);
  }
  Vector alpha = fy.v.leftCols(rank_yt) *
                 (fy.u.leftCols(rank_yt).transpose() * y_f)
                     .cwiseQuotient(fy.sigma.head(rank_yt));

  DDSolution sol;
  sol.diagnostics.rank_yt = rank_yt;
  sol.u = ControlSequence::from_stacked(data.u * alpha, data.m);
  sol.diagnostics.residual = (data.y_t * alpha - y_f).norm();
  sol.alpha = std::move(alpha);
  return sol;
}

DDSolution dd_min_energy_corrected(const DataMatrices& data,
                                   const Eigen::Ref<const Vector>& y_f,
                                   double sigma_u2, double tol) {
  require_rest_data(data, "dd_min_energy_corrected");
  check_target(y_f, data.p, "dd_min_energy_corrected");
  if (!(sigma_u2 >= 0.0) || !std::isfinite(sigma_u2)) {
    throw InvalidInputError(
        "dd_min_energy_corrected: noise variance must be finite and >= 0");
  }

  const Index n_data = data.num_experiments();
  DDSolution sol;
  if (n_data <= data.u.rows()) {
    sol.diagnostics.warnings.push_back(
        "dd_min_energy_corrected: fewer experiments than input dimensions; "
        "the Gram correction is unreliable in this regime");
  }

  Matrix gram = Matrix::Zero(data.u.rows(), data.u.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(data.u);
  gram = gram.selfadjointView<Eigen::Lower>();
  gram.diagonal().array() -= static_cast<double>(n_data) * sigma_u2;

  Matrix gram_pinv = corrected_pinv(gram, tol, sol.diagnostics.warnings,
                                    "dd_min_energy_corrected");

  Matrix w = (data.y_t * data.u.transpose()) * gram_pinv;
  Vector u_hat = pinv_apply(w, y_f, tol).col(0);
  sol.diagnostics.residual = (w * u_hat - y_f).norm();
  sol.u = ControlSequence::from_stacked(std::move(u_hat), data.m);
  return sol;
}

DDSolution dd_min_energy_approx_corrected(const DataMatrices& data,
                                          const Eigen::Ref<const Vector>& y_f,
                                          double sigma_yt2, double tol) {
  require_rest_data(data, "dd_min_energy_approx_corrected");
  check_target(y_f, data.p, "dd_min_energy_approx_corrected");
  if (!(sigma_yt2 >= 0.0) || !std::isfinite(sigma_yt2)) {
    throw InvalidInputError(
        "dd_min_energy_approx_corrected: noise variance must be finite and "
        ">= 0");
  }

  const Index n_data = data.num_experiments();
  Matrix gram = data.y_t * data.y_t.transpose();
  gram.diagonal().array() -= static_cast<double>(n_data) * sigma_yt2;

  DDSolution sol;
  Matrix gram_pinv = corrected_pinv(gram, tol, sol.diagnostics.warnings,
                                    "dd_min_energy_approx_corrected");

  Vector alpha = data.y_t.transpose() * (gram_pinv * y_f);
  sol.u = ControlSequence::from_stacked(data.u * alpha, data.m);
  sol.diagnostics.residual = (data.y_t * alpha - y_f).norm();
  sol.alpha = std::move(alpha);
  return sol;
}

DDSolution dd_min_energy_full_corrected(const DataMatrices& data,
                                        const Eigen::Ref<const Vector>& y_f,
                                        double sigma_u2, double sigma_yt2,
                                        double eps, double tol) {
  require_rest_data(data, "dd_min_energy_full_corrected");
  check_target(y_f, data.p, "dd_min_energy_full_corrected");
  if (!(sigma_u2 >= 0.0) || !(sigma_yt2 >= 0.0) ||
      !std::isfinite(sigma_u2) || !std::isfinite(sigma_yt2)) {
    throw InvalidInputError(
        "dd_min_energy_full_corrected: noise variances must be finite and "
        ">= 0");
  }

  const double n_data = static_cast<double>(data.num_experiments());
  DDSolution sol;

  // Corrected final-output Gram and its pseudoinverse; everything involving
  // the projector onto the (corrected) kernel of YT is kept in product form
  // so no n_data x n_data matrix is ever materialized.
  Matrix gy = data.y_t * data.y_t.transpose();
  gy.diagonal().array() -= n_data * sigma_yt2;
  Matrix py = corrected_pinv(gy, tol, sol.diagnostics.warnings,
                             "dd_min_energy_full_corrected");

  Matrix b = data.u * data.y_t.transpose();  // mT x p
  Vector w = b * (py * y_f);

  Matrix g0 = Matrix::Zero(data.u.rows(), data.u.rows());
  g0.selfadjointView<Eigen::Lower>().rankUpdate(data.u);
  g0 = g0.selfadjointView<Eigen::Lower>();
  g0 -= b * py * b.transpose();  // U (I - YT^T Gy^+ YT) U^T

  Matrix gc = g0;
  gc.diagonal().array() -= n_data * sigma_u2;
  const double cut = eps > 0.0 ? eps : auto_eps(gc);

  EighFactorization fc = eigh(gc);
  Vector inv = Vector::Zero(fc.values.size());
  bool negative = false;
  for (Index i = 0; i < fc.values.size(); ++i) {
    if (std::abs(fc.values(i)) >= cut) {
      inv(i) = 1.0 / fc.values(i);
      if (fc.values(i) < 0.0) negative = true;
    }
  }
  if (negative) {
    sol.diagnostics.warnings.push_back(
        "dd_min_energy_full_corrected: corrected Gram matrix is indefinite; "
        "the variance estimate likely exceeds the sample noise level");
  }
  Vector gc_pinv_w =
      fc.vectors * (inv.asDiagonal() * (fc.vectors.transpose() * w));

  Vector u_hat = w - g0 * gc_pinv_w;
  sol.u = ControlSequence::from_stacked(std::move(u_hat), data.m);
  return sol;
}

DDSolution dd_optimal_corrected(const DataMatrices& data, const Weights& q,
                                const Weights& r,
                                const Eigen::Ref<const Vector>& y_f,
                                const NoiseSpec& noise, double eps,
                                double tol) {
  require_rest_data(data, "dd_optimal_corrected");
  check_target(y_f, data.p, "dd_optimal_corrected");
  q.require_psd("dd_optimal_corrected Q");
  r.require_pd("dd_optimal_corrected R");

  const double n_data = static_cast<double>(data.num_experiments());
  DDSolution sol;

  // Corrected min-norm coefficients: w = YT^T (YT YT^T - N s_yt I)^+ y_f.
  Matrix gy = data.y_t * data.y_t.transpose();
  gy.diagonal().array() -= n_data * noise.sigma_yt2;
  Matrix py = corrected_pinv(gy, tol, sol.diagnostics.warnings,
                             "dd_optimal_corrected");
  Vector w = data.y_t.transpose() * (py * y_f);

  const Index mid_rows = q.is_zero() ? 0 : data.y_mid.rows();
  Matrix l(mid_rows + data.u.rows(), data.num_experiments());
  if (mid_rows > 0) l.topRows(mid_rows) = q.apply_sqrt(data.y_mid);
  l.bottomRows(data.u.rows()) = r.apply_sqrt(data.u);

  // L Pi L^T assembled in product form with the same corrected Gram inverse
  // on both sides; an uncorrected inverse here leaves an output-variance
  // term inside the weighted Gram that never averages out.
  Matrix lyt = l * data.y_t.transpose();
  Matrix lpl = Matrix::Zero(l.rows(), l.rows());
  lpl.selfadjointView<Eigen::Lower>().rankUpdate(l);
  lpl = lpl.selfadjointView<Eigen::Lower>();
  lpl -= lyt * py * lyt.transpose();

  // Subtract the noise bias of each weighted block: N s_y Q on the
  // intermediate rows, N s_u R on the input rows.
  if (mid_rows > 0 && noise.sigma_y2 > 0.0) {
    if (q.is_scalar()) {
      lpl.diagonal().head(mid_rows).array() -=
          n_data * noise.sigma_y2 * q.scalar_value();
    } else {
      lpl.topLeftCorner(mid_rows, mid_rows) -=
          n_data * noise.sigma_y2 * q.matrix();
    }
  }
  if (noise.sigma_u2 > 0.0) {
    if (r.is_scalar()) {
      lpl.diagonal().tail(data.u.rows()).array() -=
          n_data * noise.sigma_u2 * r.scalar_value();
    } else {
      lpl.bottomRightCorner(data.u.rows(), data.u.rows()) -=
          n_data * noise.sigma_u2 * r.matrix();
    }
  }

  const double cut = eps > 0.0 ? eps : auto_eps(lpl);
  EighFactorization fm = eigh(lpl);
  Vector inv = Vector::Zero(fm.values.size());
  bool negative = false;
  for (Index i = 0; i < fm.values.size(); ++i) {
    if (std::abs(fm.values(i)) >= cut) {
      inv(i) = 1.0 / fm.values(i);
      if (fm.values(i) < 0.0) negative = true;
    }
  }
  if (negative) {
    sol.diagnostics.warnings.push_back(
        "dd_optimal_corrected: corrected weighted Gram matrix is indefinite; "
        "the variance estimates likely exceed the sample noise level");
  }

  Vector z = fm.vectors * (inv.asDiagonal() * (fm.vectors.transpose() * (l * w)));
  Vector ltz = l.transpose() * z;
  // Apply the corrected kernel projector to L^T z, then subtract.
  Vector proj = ltz - data.y_t.transpose() * (py * (data.y_t * ltz));
  Vector alpha = w - proj;

  sol.u = ControlSequence::from_stacked(data.u * alpha, data.m);
  sol.diagnostics.residual = (data.y_t * alpha - y_f).norm();
  sol.alpha = std::move(alpha);
  return sol;
}

BoundReport theorem1_bound(const Eigen::Ref<const Matrix>& ctrb, Index n_data,
                           double delta,
                           const Eigen::Ref<const Vector>& y_f) {
  if (n_data < 1) {
    throw InvalidInputError("theorem1_bound: need at least one experiment");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidInputError("theorem1_bound: delta must lie in (0, 1)");
  }
  require_finite(ctrb, "theorem1_bound");
  require_finite(y_f, "theorem1_bound target");
  if (y_f.size() != ctrb.rows()) {
    throw InvalidInputError(
        "theorem1_bound: target length does not match output rows");
  }

  SvdFactorization f = svd(ctrb);
  const Index rank = f.rank();
  if (rank < ctrb.rows()) {
    throw ControllabilityError(
        "theorem1_bound: the target space is not reachable over this "
        "horizon");
  }

  BoundReport rep;
  rep.delta = delta;
  rep.sigma_min_ct = f.sigma(ctrb.rows() - 1);
  rep.kappa_ct = f.sigma(0) / rep.sigma_min_ct;

  const double n = static_cast<double>(n_data);
  const double mt = static_cast<double>(ctrb.cols());
  rep.eta = std::sqrt(mt / n) + std::sqrt(2.0 * std::log(1.0 / delta) / n);

  if (rep.eta >= 1.0) {
    rep.vacuous = true;
    rep.bound = std::numeric_limits<double>::infinity();
    return rep;
  }
  const double eta = rep.eta;
  rep.bound = 3.0 * std::max(eta, eta * eta) / rep.sigma_min_ct *
              (1.0 + (1.0 + eta) / (1.0 - eta) * rep.kappa_ct * rep.kappa_ct) *
              y_f.norm();
  return rep;
}

BoundReport theorem1_bound(const LinearNetwork& net, Index horizon,
                           Index n_data, double delta,
                           const Eigen::Ref<const Vector>& y_f) {
  return theorem1_bound(output_ctrb_matrix(net, horizon), n_data, delta, y_f);
}

}  // namespace netctl
