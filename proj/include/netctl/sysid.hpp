#pragma once

#include "netctl/experiments.hpp"
#include "netctl/network.hpp"
#include "netctl/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace netctl {

/// Dynamics recovered from full-state experiment data by the deterministic
/// subspace procedure. Residuals are the Frobenius misfits of the two
/// least-squares stages; on noiseless data from a system controllable in
/// T-1 steps with full-row-rank inputs, both vanish and the estimates are
/// exact.
struct IdentifiedModel {
  Matrix a_hat;  // n x n
  Matrix b_hat;  // n x m
  double ctrb_residual = 0.0;   // ||YT - C_hat U||_F
  double shift_residual = 0.0;  // ||C2 - A_hat C1||_F over the shifted blocks
  std::vector<std::string> warnings;

  /// Packages the estimates as a network with C = I, ready for simulation
  /// or model-based design.
  LinearNetwork to_network() const;
};

/// Least-squares estimate of the T-step controllability matrix,
/// C_hat = YT U^+ (n x mT), the minimizer of ||YT - C U||_F with minimum
/// Frobenius norm when the fit is underdetermined. Requires full-state data;
/// throws DataRankError when the input block is identically zero. The fit
/// misfit is written to *residual when given.
Matrix estimate_ctrb(const DataMatrices& data, double tol = kDefaultSvdTol,
                     double* residual = nullptr);

/// Two-step subspace identification: estimate the controllability matrix,
/// read B_hat off its first input block, then fit A_hat by least squares on
/// the shifted block sequence. Exact under the conditions noted on
/// IdentifiedModel; rank-deficient fits are reported through warnings and
/// residuals rather than rejected. Requires horizon >= 2 and full-state data.
IdentifiedModel subspace_id(const DataMatrices& data,
                            double tol = kDefaultSvdTol);

/// Divides a by rho(a) + 0.01 when the spectral radius rho(a) is 1 or more;
/// stable matrices pass through unchanged. The result always has rho < 1.
Matrix stabilize(const Eigen::Ref<const Matrix>& a_hat);

/// Identify-then-design baseline: subspace_id followed by minimum-energy
/// model-based control on the identified network. Identification errors
/// compound into the control, so this is the comparison point for the
/// direct data-driven route, not a recommended solver.
ControlSequence two_step_min_energy(const DataMatrices& data,
                                    const Eigen::Ref<const Vector>& y_f,
                                    double tol = kDefaultSvdTol);

/// Writes the identified model in the network file format, with a comment
/// recording that the matrices are estimates and what the fit residuals were.
void save_identified_model(const std::filesystem::path& path,
                           const IdentifiedModel& model);

}  // namespace netctl
