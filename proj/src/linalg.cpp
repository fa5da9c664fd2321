#include "netctl/linalg.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace netctl {
namespace {

SvdFactorization svd_empty(Index rows, Index cols, bool full_v) {
  SvdFactorization f;
  f.u = Matrix::Zero(rows, 0);
  f.sigma = Vector::Zero(0);
  // With no singular values every direction is a kernel direction, so the
  // full right factor is the identity.
  f.v = full_v ? Matrix(Matrix::Identity(cols, cols)) : Matrix(cols, 0);
  return f;
}

}  // namespace

Index SvdFactorization::rank(double tol) const {
  if (sigma.size() == 0) return 0;
  const double cut = tol * sigma(0);
  Index r = 0;
  while (r < sigma.size() && sigma(r) > cut) ++r;
  return r;
}

SvdFactorization svd(const Eigen::Ref<const Matrix>& m, bool full_v) {
  require_finite(m, "svd input");
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (rows == 0 || cols == 0) return svd_empty(rows, cols, full_v);

  const Index k = std::min(rows, cols);
  // 'S' already yields the complete right factor when rows >= cols; only wide
  // matrices need 'A' to keep the kernel rows of V^T.
  const bool want_all = full_v && rows < cols;
  const char jobz = want_all ? 'A' : 'S';

  SvdFactorization f;
  f.sigma.resize(k);
  f.u.resize(rows, want_all ? rows : k);
  const Index vt_rows = want_all ? cols : k;
  Matrix vt(vt_rows, cols);

  Matrix work = m;  // the LAPACK drivers overwrite their input
  lapack_int info = LAPACKE_dgesdd(
      LAPACK_COL_MAJOR, jobz, static_cast<lapack_int>(rows),
      static_cast<lapack_int>(cols), work.data(), static_cast<lapack_int>(rows),
      f.sigma.data(), f.u.data(), static_cast<lapack_int>(rows), vt.data(),
      static_cast<lapack_int>(vt_rows));
  if (info != 0) {
    // The divide-and-conquer driver occasionally fails where plain QR
    // iteration still converges; retry once before reporting failure.
    work = m;
    Vector superb(std::max<Index>(1, k - 1));
    const char jobvt = want_all ? 'A' : 'S';
    info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'S', jobvt,
                          static_cast<lapack_int>(rows),
                          static_cast<lapack_int>(cols), work.data(),
                          static_cast<lapack_int>(rows), f.sigma.data(),
                          f.u.data(), static_cast<lapack_int>(rows), vt.data(),
                          static_cast<lapack_int>(vt_rows), superb.data());
    if (want_all) f.u.conservativeResize(rows, k);
    if (info != 0) throw NumericalError("SVD failed to converge");
  }
  if (want_all && f.u.cols() > k) f.u.conservativeResize(rows, k);
  f.v = vt.transpose();
  return f;
}

Matrix pinv(const Eigen::Ref<const Matrix>& m, double tol) {
  const SvdFactorization f = svd(m);
  if (f.sigma.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  const double cut = tol * f.sigma(0);
  Vector inv = Vector::Zero(f.sigma.size());
  for (Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma(i) > cut) inv(i) = 1.0 / f.sigma(i);
  }
  return f.v * inv.asDiagonal() * f.u.transpose();
}

Matrix pinv_eps(const Eigen::Ref<const Matrix>& m, double eps) {
  if (!(eps >= 0.0)) throw InvalidInputError("pinv_eps: eps must be >= 0");
  const SvdFactorization f = svd(m);
  if (f.sigma.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  Vector inv = Vector::Zero(f.sigma.size());
  for (Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma(i) >= eps && f.sigma(i) > 0.0) inv(i) = 1.0 / f.sigma(i);
  }
  return f.v * inv.asDiagonal() * f.u.transpose();
}

Matrix pinv_apply(const Eigen::Ref<const Matrix>& m,
                  const Eigen::Ref<const Matrix>& rhs, double tol) {
  if (m.rows() != rhs.rows()) {
    throw InvalidInputError("pinv_apply: rhs row count does not match");
  }
  const SvdFactorization f = svd(m);
  if (f.sigma.size() == 0) return Matrix::Zero(m.cols(), rhs.cols());
  const double cut = tol * f.sigma(0);
  Matrix proj = f.u.transpose() * rhs;
  for (Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma(i) > cut) {
      proj.row(i) /= f.sigma(i);
    } else {
      proj.row(i).setZero();
    }
  }
  return f.v * proj;
}

Matrix kernel_basis(const Eigen::Ref<const Matrix>& m, double tol) {
  const SvdFactorization f = svd(m, /*full_v=*/true);
  const Index r = f.rank(tol);
  return f.v.rightCols(f.v.cols() - r);
}

double spectral_radius(const Eigen::Ref<const Matrix>& m) {
  if (m.rows() != m.cols()) {
    throw InvalidInputError("spectral_radius: matrix must be square");
  }
  if (m.rows() == 0) return 0.0;
  require_finite(m, "spectral_radius input");
  Eigen::EigenSolver<Matrix> eig(m, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("spectral_radius: eigenvalue iteration failed");
  }
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix sqrt_psd(const Eigen::Ref<const Matrix>& s, double tol) {
  if (s.rows() != s.cols()) {
    throw InvalidWeightError("sqrt_psd: matrix must be square");
  }
  if (s.rows() == 0) return Matrix(0, 0);
  require_finite(s, "sqrt_psd input");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if (((s - s.transpose()).cwiseAbs().maxCoeff()) > tol * scale) {
    throw InvalidWeightError("sqrt_psd: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("sqrt_psd: eigendecomposition failed");
  }
  Vector lambda = eig.eigenvalues();
  const double lmax = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -tol * lmax) {
      throw InvalidWeightError("sqrt_psd: matrix has negative eigenvalues");
    }
    lambda(i) = std::sqrt(std::max(0.0, lambda(i)));
  }
  return eig.eigenvectors() * lambda.asDiagonal() *
         eig.eigenvectors().transpose();
}

Matrix stacked_sqrt_factor(const Eigen::Ref<const Matrix>& q,
                           const Eigen::Ref<const Matrix>& r,
                           const Eigen::Ref<const Matrix>& y,
                           const Eigen::Ref<const Matrix>& u) {
  if (q.rows() != q.cols() || r.rows() != r.cols()) {
    throw InvalidWeightError("stacked_sqrt_factor: weights must be square");
  }
  if (q.rows() != y.rows()) {
    throw InvalidInputError("stacked_sqrt_factor: Q dimension != Y rows");
  }
  if (r.rows() != u.rows()) {
    throw InvalidInputError("stacked_sqrt_factor: R dimension != U rows");
  }
  if (y.cols() != u.cols() && y.rows() > 0) {
    throw InvalidInputError("stacked_sqrt_factor: Y and U column counts differ");
  }

  const double tol = 1e-10;
  // R must be strictly positive definite; a singular penalty would make the
  // weighted least-squares problem lose its unique input component.
  if (r.rows() == 0) throw InvalidWeightError("stacked_sqrt_factor: R is empty");
  require_finite(r, "stacked_sqrt_factor R");
  const double rscale = std::max(1.0, r.cwiseAbs().maxCoeff());
  if ((r - r.transpose()).cwiseAbs().maxCoeff() > tol * rscale) {
    throw InvalidWeightError("stacked_sqrt_factor: R is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig_r(r);
  if (eig_r.info() != Eigen::Success) {
    throw NumericalError("stacked_sqrt_factor: eigendecomposition of R failed");
  }
  const double lmax = std::max(1.0, eig_r.eigenvalues().cwiseAbs().maxCoeff());
  if (eig_r.eigenvalues().minCoeff() <= tol * lmax) {
    throw InvalidWeightError("stacked_sqrt_factor: R is not positive definite");
  }
  Matrix sqrt_r = eig_r.eigenvectors() *
                  eig_r.eigenvalues().cwiseSqrt().asDiagonal() *
                  eig_r.eigenvectors().transpose();

  Matrix top(q.rows(), u.cols());
  if (q.rows() > 0) top = sqrt_psd(q, tol) * y;

  Matrix l(top.rows() + u.rows(), u.cols());
  if (top.rows() > 0) l.topRows(top.rows()) = top;
  l.bottomRows(u.rows()) = sqrt_r * u;
  return l;
}

EighFactorization eigh(const Eigen::Ref<const Matrix>& m) {
  if (m.rows() != m.cols()) {
    throw InvalidInputError("eigh: matrix is not square");
  }
  require_finite(m, "eigh");
  const Index n = m.rows();
  if (n == 0) return {Matrix(0, 0), Vector(0)};

  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-6 * std::max(1.0, scale)) {
    throw InvalidInputError("eigh: matrix is not symmetric");
  }

  EighFactorization f;
  f.vectors = m;
  f.values.resize(n);
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L',
                                   static_cast<lapack_int>(n),
                                   f.vectors.data(),
                                   static_cast<lapack_int>(n),
                                   f.values.data());
  if (info != 0) {
    f.vectors = m;
    info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'V', 'L',
                         static_cast<lapack_int>(n), f.vectors.data(),
                         static_cast<lapack_int>(n), f.values.data());
  }
  if (info != 0) {
    throw NumericalError("eigh: symmetric eigendecomposition failed");
  }
  return f;
}

namespace {

Matrix pinv_sym_from(const EighFactorization& f, double cutoff) {
  const Index n = f.values.size();
  Vector inv = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(f.values(i)) > cutoff) inv(i) = 1.0 / f.values(i);
  }
  return f.vectors * inv.asDiagonal() * f.vectors.transpose();
}

}  // namespace

Matrix pinv_sym(const Eigen::Ref<const Matrix>& m, double tol) {
  EighFactorization f = eigh(m);
  if (f.values.size() == 0) return Matrix(0, 0);
  const double lmax = f.values.cwiseAbs().maxCoeff();
  return pinv_sym_from(f, tol * lmax);
}

Matrix pinv_sym_eps(const Eigen::Ref<const Matrix>& m, double eps) {
  EighFactorization f = eigh(m);
  if (f.values.size() == 0) return Matrix(0, 0);
  // nextafter keeps |lambda| == eps on the inverted side of the cut.
  return pinv_sym_from(f, std::nextafter(eps, 0.0));
}

Matrix pinv_sym_apply(const Eigen::Ref<const Matrix>& m,
                      const Eigen::Ref<const Matrix>& rhs,
                      double tol) {
  if (m.rows() != rhs.rows()) {
    throw InvalidInputError("pinv_sym_apply: dimension mismatch");
  }
  EighFactorization f = eigh(m);
  if (f.values.size() == 0) return Matrix(0, rhs.cols());
  const double cutoff = tol * f.values.cwiseAbs().maxCoeff();
  Matrix proj = f.vectors.transpose() * rhs;
  for (Index i = 0; i < f.values.size(); ++i) {
    if (std::abs(f.values(i)) > cutoff) {
      proj.row(i) /= f.values(i);
    } else {
      proj.row(i).setZero();
    }
  }
  return f.vectors * proj;
}

}  // namespace netctl
