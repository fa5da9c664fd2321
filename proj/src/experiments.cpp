#include "netctl/experiments.hpp"

#include <cmath>

namespace netctl {

void DataMatrices::validate() const {
  const Index cols = u.cols();
  if (horizon < 1 || m < 1 || p < 1) {
    throw InvalidInputError("DataMatrices: T, m, p must be positive");
  }
  if (u.rows() != m * horizon) {
    throw InvalidInputError("DataMatrices: U must have mT rows");
  }
  if (y_mid.rows() != p * (horizon - 1) || y_mid.cols() != cols) {
    throw InvalidInputError("DataMatrices: Ymid must be p(T-1) x N");
  }
  if (y_t.rows() != p || y_t.cols() != cols) {
    throw InvalidInputError("DataMatrices: YT must be p x N");
  }
  if (x0.has_value() && (x0->cols() != cols || (n > 0 && x0->rows() != n))) {
    throw InvalidInputError("DataMatrices: X0 must be n x N");
  }
}

Matrix random_inputs(Index m, Index horizon, Index num_experiments, Rng& rng) {
  if (m < 1 || horizon < 1 || num_experiments < 1) {
    throw InvalidInputError("random_inputs: m, T, N must be positive");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix u(m * horizon, num_experiments);
  for (Index j = 0; j < u.cols(); ++j) {
    for (Index i = 0; i < u.rows(); ++i) u(i, j) = gauss(rng);
  }
  return u;
}

namespace {

// Shared batched rollout: every experiment advances in lockstep, so each time
// step is a pair of dense products instead of N separate simulations.
DataMatrices rollout(const LinearNetwork& net,
                     const Eigen::Ref<const Matrix>& u_data, Matrix state,
                     Index horizon) {
  const Index m = net.m();
  const Index p = net.p();
  const Index cols = u_data.cols();
  if (u_data.rows() != m * horizon) {
    throw InvalidInputError("experiment data: U must have mT rows");
  }

  DataMatrices data;
  data.horizon = horizon;
  data.m = m;
  data.p = p;
  data.n = net.n();
  data.u = u_data;
  data.y_mid.resize(p * (horizon - 1), cols);
  data.y_t.resize(p, cols);

  for (Index t = 0; t < horizon; ++t) {
    // Reverse-time stacking: u(t) lives in block T-1-t.
    state = net.a * state + net.b * u_data.middleRows((horizon - 1 - t) * m, m);
    if (t + 1 < horizon) {
      data.y_mid.middleRows(t * p, p).noalias() = net.c * state;
    } else {
      data.y_t.noalias() = net.c * state;
    }
  }
  return data;
}

}  // namespace

DataMatrices run_episodic(const LinearNetwork& net,
                          const Eigen::Ref<const Matrix>& u_data,
                          Index horizon) {
  if (horizon < 1) throw InvalidInputError("run_episodic: horizon < 1");
  return rollout(net, u_data, Matrix::Zero(net.n(), u_data.cols()), horizon);
}

DataMatrices run_with_initial_states(const LinearNetwork& net,
                                     const Eigen::Ref<const Matrix>& u_data,
                                     const Eigen::Ref<const Matrix>& x0_data,
                                     Index horizon) {
  if (horizon < 1) throw InvalidInputError("run_with_initial_states: horizon < 1");
  if (x0_data.rows() != net.n() || x0_data.cols() != u_data.cols()) {
    throw InvalidInputError("run_with_initial_states: X0 must be n x N");
  }
  DataMatrices data = rollout(net, u_data, x0_data, horizon);
  data.x0 = x0_data;
  return data;
}

DataMatrices sliding_window(const Eigen::Ref<const Matrix>& u_long,
                            const Eigen::Ref<const Matrix>& y_long,
                            const std::optional<Matrix>& x_long, Index horizon,
                            Index stride) {
  const Index samples = u_long.cols();
  if (horizon < 1) throw InvalidInputError("sliding_window: horizon < 1");
  if (stride < 1) throw InvalidInputError("sliding_window: stride < 1");
  if (y_long.cols() != samples ||
      (x_long.has_value() && x_long->cols() != samples)) {
    throw InvalidInputError(
        "sliding_window: input, output, and state trajectories must share "
        "their sample count");
  }
  if (samples < horizon + 1) {
    throw InvalidInputError(
        "sliding_window: window does not fit the trajectory (need at least "
        "T+1 samples)");
  }

  const Index m = u_long.rows();
  const Index p = y_long.rows();
  const Index last_start = samples - 1 - horizon;
  const Index count = last_start / stride + 1;

  DataMatrices data;
  data.horizon = horizon;
  data.m = m;
  data.p = p;
  data.n = x_long.has_value() ? x_long->rows() : 0;
  data.u.resize(m * horizon, count);
  data.y_mid.resize(p * (horizon - 1), count);
  data.y_t.resize(p, count);
  if (x_long.has_value()) data.x0 = Matrix(x_long->rows(), count);

  for (Index w = 0; w < count; ++w) {
    const Index s = w * stride;
    for (Index t = 0; t < horizon; ++t) {
      data.u.col(w).segment((horizon - 1 - t) * m, m) = u_long.col(s + t);
      if (t + 1 < horizon) {
        data.y_mid.col(w).segment(t * p, p) = y_long.col(s + t + 1);
      }
    }
    data.y_t.col(w) = y_long.col(s + horizon);
    if (x_long.has_value()) data.x0->col(w) = x_long->col(s);
  }
  return data;
}

DataMatrices add_noise(const DataMatrices& data, const NoiseSpec& spec,
                       Rng& rng) {
  if (spec.sigma_u2 < 0.0 || spec.sigma_y2 < 0.0 || spec.sigma_yt2 < 0.0) {
    throw InvalidInputError("add_noise: variances must be >= 0");
  }
  data.validate();

  auto corrupt = [&](Matrix& target, double variance) {
    if (variance == 0.0) return;
    if (spec.kind == NoiseSpec::Kind::kGaussian) {
      std::normal_distribution<double> noise(0.0, std::sqrt(variance));
      for (Index j = 0; j < target.cols(); ++j) {
        for (Index i = 0; i < target.rows(); ++i) target(i, j) += noise(rng);
      }
    } else {
      const double half_width = std::sqrt(3.0 * variance);
      std::uniform_real_distribution<double> noise(-half_width, half_width);
      for (Index j = 0; j < target.cols(); ++j) {
        for (Index i = 0; i < target.rows(); ++i) target(i, j) += noise(rng);
      }
    }
  };

  DataMatrices noisy = data;
  noisy.clean = DataMatrices::Clean{data.u, data.y_mid, data.y_t};
  corrupt(noisy.u, spec.sigma_u2);
  corrupt(noisy.y_mid, spec.sigma_y2);
  corrupt(noisy.y_t, spec.sigma_yt2);
  return noisy;
}

}  // namespace netctl
