#pragma once

#include "netctl/types.hpp"

namespace netctl {

inline constexpr double kDefaultSvdTol = 1e-8;

/// Factorization m = u * sigma.asDiagonal() * v.transpose() with singular
/// values sorted in descending order.
struct SvdFactorization {
  Matrix u;
  Vector sigma;
  Matrix v;

  /// Number of singular values strictly above tol * sigma_max.
  Index rank(double tol = kDefaultSvdTol) const;
};

/// Thin SVD. Set full_v to obtain all right singular vectors, including the
/// kernel directions a thin factorization drops for wide matrices. Throws
/// NumericalError if neither LAPACK driver converges.
SvdFactorization svd(const Eigen::Ref<const Matrix>& m, bool full_v = false);

/// Moore-Penrose pseudoinverse with relative truncation: singular values
/// sigma_i <= tol * sigma_max are treated as zero.
Matrix pinv(const Eigen::Ref<const Matrix>& m, double tol = kDefaultSvdTol);

/// Pseudoinverse with absolute truncation: singular values below eps are
/// zeroed regardless of the spectrum's scale. The noise-corrected estimators
/// require this variant; it is not interchangeable with pinv.
Matrix pinv_eps(const Eigen::Ref<const Matrix>& m, double eps);

/// pinv(m, tol) * rhs without materializing the pseudoinverse.
Matrix pinv_apply(const Eigen::Ref<const Matrix>& m,
                  const Eigen::Ref<const Matrix>& rhs,
                  double tol = kDefaultSvdTol);

/// Orthonormal basis of the right kernel of m, returned as an m.cols() x d
/// matrix (d = 0 when the kernel is trivial).
Matrix kernel_basis(const Eigen::Ref<const Matrix>& m,
                    double tol = kDefaultSvdTol);

/// Largest eigenvalue magnitude of a square matrix (general, non-symmetric).
double spectral_radius(const Eigen::Ref<const Matrix>& m);

/// Eigendecomposition of a symmetric matrix, eigenvalues ascending.
struct EighFactorization {
  Matrix vectors;  // orthonormal eigenvector columns
  Vector values;
};

/// Symmetric eigendecomposition via LAPACK; only the lower triangle is read,
/// but gross asymmetry (beyond 1e-6 relative) is rejected as a caller bug.
EighFactorization eigh(const Eigen::Ref<const Matrix>& m);

/// Pseudoinverse of a symmetric, possibly indefinite matrix through its
/// eigendecomposition; eigenvalues with |lambda| <= tol * max|lambda| are
/// treated as zero. Cheaper and more accurate than pinv on Gram matrices.
Matrix pinv_sym(const Eigen::Ref<const Matrix>& m,
                double tol = kDefaultSvdTol);

/// Absolute-threshold variant: eigenvalues with |lambda| < eps are zeroed.
Matrix pinv_sym_eps(const Eigen::Ref<const Matrix>& m, double eps);

/// pinv_sym(m, tol) * rhs without materializing the pseudoinverse.
Matrix pinv_sym_apply(const Eigen::Ref<const Matrix>& m,
                      const Eigen::Ref<const Matrix>& rhs,
                      double tol = kDefaultSvdTol);

/// Symmetric PSD square root via eigendecomposition; eigenvalues in
/// [-tol * scale, 0) are clamped to zero. Throws InvalidWeightError when s is
/// asymmetric or indefinite beyond tol.
Matrix sqrt_psd(const Eigen::Ref<const Matrix>& s, double tol = 1e-10);

/// Stacked weighting factor L = [Q^{1/2} Y; R^{1/2} U], so that
/// L^T L = Y^T Q Y + U^T R U. Q must be symmetric PSD and R symmetric PD
/// (eigenvalue checks at tolerance 1e-10); Q may be empty (0 x 0) together
/// with an empty Y block.
Matrix stacked_sqrt_factor(const Eigen::Ref<const Matrix>& q,
                           const Eigen::Ref<const Matrix>& r,
                           const Eigen::Ref<const Matrix>& y,
                           const Eigen::Ref<const Matrix>& u);

}  // namespace netctl
