#pragma once

#include "netctl/experiments.hpp"
#include "netctl/network.hpp"
#include "netctl/types.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace netctl {

/// Numerical byproducts of a data-driven solve. Ranks are -1 when the solver
/// skipped computing them (too expensive at scale, or not meaningful for the
/// formula used). The residual is the constraint violation ||YT a - y_f|| for
/// solvers that work through an explicit combination vector a, NaN otherwise.
struct DDDiagnostics {
  Index rank_u = -1;
  Index rank_yt = -1;
  Index kernel_dim = -1;
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;
};

/// Result of a data-driven control solve: the input sequence, the data
/// combination coefficients when the method has them, and diagnostics.
struct DDSolution {
  ControlSequence u;
  std::optional<Vector> alpha;
  DDDiagnostics diagnostics;
};

/// Finite-sample suboptimality certificate for the minimum-energy estimator.
struct BoundReport {
  double eta = 0.0;          // concentration radius sqrt(mT/N)+sqrt(2ln(1/d)/N)
  double bound = 0.0;        // ||u_star - u_hat|| upper bound; +inf if vacuous
  double sigma_min_ct = 0.0; // smallest singular value of the controllability map
  double kappa_ct = 0.0;     // its condition number
  double delta = 0.0;
  bool vacuous = false;      // eta >= 1, the concentration argument gives nothing
};

/// Exact data-driven solution of the weighted output-steering problem:
/// min ||Q^{1/2} Y_mid a||^2 + ||R^{1/2} U a||^2  s.t.  YT a = y_f,
/// returned as u = U a. Requires YT to have full row rank over the data
/// (throws DataRankError otherwise). Weights follow the usual rules: Q PSD,
/// R PD.
DDSolution dd_optimal(const DataMatrices& data, const Weights& q,
                      const Weights& r, const Eigen::Ref<const Vector>& y_f,
                      double tol = kDefaultSvdTol);

/// Raw-matrix variant for callers that assemble their own constraint block
/// (for example appending initial-state rows below YT). `constraint` is the
/// matrix whose row span must reach `rhs`; `u_data` supplies the inputs being
/// combined and `y_mid` the intermediate outputs weighted by Q (may have zero
/// rows).
DDSolution dd_optimal(const Eigen::Ref<const Matrix>& u_data,
                      const Eigen::Ref<const Matrix>& y_mid,
                      const Eigen::Ref<const Matrix>& constraint,
                      const Weights& q, const Weights& r,
                      const Eigen::Ref<const Vector>& rhs, Index input_dim,
                      double tol = kDefaultSvdTol);

/// dd_optimal restricted to the experiments that started at rest: data with
/// nonzero recorded initial states is first combined through the kernel of
/// X0 so only zero-initial-condition responses enter the solve.
DDSolution dd_optimal_x0(const DataMatrices& data, const Weights& q,
                         const Weights& r,
                         const Eigen::Ref<const Vector>& y_f,
                         double tol = kDefaultSvdTol);

/// Minimum-energy steering via the compact product form u = (YT U^+)^+ y_f.
/// Exact when U has full row rank; throws DataRankError when YT is rank
/// deficient.
DDSolution dd_min_energy(const DataMatrices& data,
                         const Eigen::Ref<const Vector>& y_f,
                         double tol = kDefaultSvdTol);

/// Minimum-energy steering through the kernel-projector composition
/// u = (I - U K (U K)^+) U YT^+ y_f, K a kernel basis of YT, evaluated in
/// product form so no kernel basis is ever materialized. Same solution as
/// dd_min_energy on exact data; kept separate because the two routes
/// degrade differently under noise.
DDSolution dd_min_energy_long_form(const DataMatrices& data,
                                   const Eigen::Ref<const Vector>& y_f,
                                   double tol = kDefaultSvdTol);

/// One-shot approximation u = U YT^+ y_f. Minimizes ||a|| rather than
/// ||U a||, so it is exact only when the data inputs are orthonormal; cheap
/// and consistent as experiments grow.
DDSolution dd_min_energy_approx(const DataMatrices& data,
                                const Eigen::Ref<const Vector>& y_f,
                                double tol = kDefaultSvdTol);

/// Noise-corrected compact form: subtracts the known input-noise covariance
/// N sigma_u2 I from the input Gram matrix before inverting, making the
/// estimator consistent when the recorded inputs carry additive white noise
/// of variance sigma_u2 per entry.
DDSolution dd_min_energy_corrected(const DataMatrices& data,
                                   const Eigen::Ref<const Vector>& y_f,
                                   double sigma_u2,
                                   double tol = kDefaultSvdTol);

/// Noise-corrected approximation: u = U YT^T (YT YT^T - N sigma_yt2 I)^+ y_f,
/// consistent when the final-output block carries additive white noise of
/// variance sigma_yt2 per entry.
DDSolution dd_min_energy_approx_corrected(const DataMatrices& data,
                                          const Eigen::Ref<const Vector>& y_f,
                                          double sigma_yt2,
                                          double tol = kDefaultSvdTol);

/// Fully corrected minimum-energy estimator handling noise on both the input
/// block (sigma_u2) and the final-output block (sigma_yt2). The corrected
/// projected Gram matrix is indefinite in finite samples, so eigenvalues with
/// magnitude below eps are discarded; eps <= 0 selects an automatic threshold
/// scaled to the matrix trace.
DDSolution dd_min_energy_full_corrected(const DataMatrices& data,
                                        const Eigen::Ref<const Vector>& y_f,
                                        double sigma_u2, double sigma_yt2,
                                        double eps = 0.0,
                                        double tol = kDefaultSvdTol);

/// Fully corrected weighted solver: the noisy-data analogue of dd_optimal.
/// Noise variances for the input, intermediate-output and final-output blocks
/// come from `noise`; Q and R must be scalar or match the stacked block
/// dimensions. eps <= 0 selects the automatic threshold.
DDSolution dd_optimal_corrected(const DataMatrices& data, const Weights& q,
                                const Weights& r,
                                const Eigen::Ref<const Vector>& y_f,
                                const NoiseSpec& noise, double eps = 0.0,
                                double tol = kDefaultSvdTol);

/// Finite-sample bound on ||u_star - u_hat|| for the minimum-energy
/// estimator fed N standard-normal experiments, holding with probability at
/// least 1 - delta. `ctrb` is the exact controllability map the estimator is
/// approximating; it must have full row rank.
BoundReport theorem1_bound(const Eigen::Ref<const Matrix>& ctrb, Index n_data,
                           double delta, const Eigen::Ref<const Vector>& y_f);

/// Convenience overload building the controllability map from the network.
BoundReport theorem1_bound(const LinearNetwork& net, Index horizon,
                           Index n_data, double delta,
                           const Eigen::Ref<const Vector>& y_f);

}  // namespace netctl
