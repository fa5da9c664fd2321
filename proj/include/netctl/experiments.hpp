#pragma once

#include "netctl/network.hpp"
#include "netctl/types.hpp"

#include <optional>

namespace netctl {

/// Recorded experiment data. Column i of every member belongs to the same
/// experiment; U columns use the reverse-time stacking of ControlSequence.
struct DataMatrices {
  Matrix u;      // mT x N
  Matrix y_mid;  // p(T-1) x N, stacked y(1..T-1)
  Matrix y_t;    // p x N, final outputs y(T)
  std::optional<Matrix> x0;  // n x N initial states, when measured

  Index horizon = 0;
  Index m = 0;
  Index p = 0;
  Index n = 0;  // 0 when the state dimension is unknown
  std::uint64_t seed = 0;

  /// Pre-noise record kept by add_noise so tests can compare against the
  /// truth; never serialized, so estimators cannot reach it through the
  /// on-disk interface.
  struct Clean {
    Matrix u, y_mid, y_t;
  };
  std::optional<Clean> clean;

  Index num_experiments() const { return u.cols(); }

  /// Throws InvalidInputError if the member dimensions are inconsistent.
  void validate() const;
};

/// Zero-mean i.i.d. measurement-noise model for the three data channels.
struct NoiseSpec {
  double sigma_u2 = 0.0;   // variance on U
  double sigma_y2 = 0.0;   // variance on Ymid
  double sigma_yt2 = 0.0;  // variance on YT

  enum class Kind { kGaussian, kUniform };
  Kind kind = Kind::kGaussian;
};

/// Standard-normal i.i.d. input data, mT x N.
Matrix random_inputs(Index m, Index horizon, Index num_experiments, Rng& rng);

/// Runs one experiment per column of u_data, each from x(0) = 0.
DataMatrices run_episodic(const LinearNetwork& net,
                          const Eigen::Ref<const Matrix>& u_data,
                          Index horizon);

/// Runs one experiment per column, column i starting from x0_data column i;
/// the initial states are stored alongside the outputs.
DataMatrices run_with_initial_states(const LinearNetwork& net,
                                     const Eigen::Ref<const Matrix>& u_data,
                                     const Eigen::Ref<const Matrix>& x0_data,
                                     Index horizon);

/// Cuts a single recorded trajectory (samples t = 0..S-1 of inputs, outputs,
/// and optionally states) into overlapping length-T experiments. Window start
/// s contributes u(s..s+T-1), y(s+1..s+T), and x(s); starts advance by
/// stride while s + T <= S-1.
DataMatrices sliding_window(const Eigen::Ref<const Matrix>& u_long,
                            const Eigen::Ref<const Matrix>& y_long,
                            const std::optional<Matrix>& x_long, Index horizon,
                            Index stride = 1);

/// Independent noise on the three channels; the returned record keeps a clean
/// copy for comparison (see DataMatrices::clean).
DataMatrices add_noise(const DataMatrices& data, const NoiseSpec& spec,
                       Rng& rng);

}  // namespace netctl
