#pragma once

#include "netctl/linalg.hpp"
#include "netctl/types.hpp"

#include <optional>
#include <vector>

namespace netctl {

/// Discrete-time linear network x(t+1) = A x(t) + B u(t), y(t) = C x(t).
struct LinearNetwork {
  Matrix a;  // n x n dynamics / weighted adjacency
  Matrix b;  // n x m input map
  Matrix c;  // p x n output map

  LinearNetwork(Matrix a_in, Matrix b_in, Matrix c_in);

  Index n() const { return a.rows(); }
  Index m() const { return b.cols(); }
  Index p() const { return c.rows(); }
};

/// Cost weight that is either a scalar multiple of the identity or a dense
/// matrix. Scalar weights are kept structural so large blocks such as q*I at
/// trajectory scale are never materialized.
class Weights {
 public:
  Weights() : scalar_(1.0) {}

  static Weights scalar(double value);
  static Weights dense(Matrix w);

  bool is_scalar() const { return !dense_.has_value(); }
  bool is_zero() const { return is_scalar() && scalar_ == 0.0; }
  double scalar_value() const { return scalar_; }
  const Matrix& matrix() const { return *dense_; }

  /// Dense representation at the requested dimension.
  Matrix materialize(Index dim) const;

  /// W^{1/2} * x. Dense weights must be symmetric PSD.
  Matrix apply_sqrt(const Eigen::Ref<const Matrix>& x) const;

  /// W * x.
  Matrix apply(const Eigen::Ref<const Matrix>& x) const;

  /// Validation used at construction/use sites; tol matches the weight checks
  /// elsewhere in the library.
  void require_psd(const char* name, double tol = 1e-10) const;
  void require_pd(const char* name, double tol = 1e-10) const;

 private:
  double scalar_ = 1.0;
  std::optional<Matrix> dense_;
};

/// Finite-horizon control problem: drive y(T) to the target while weighting
/// intermediate output deviation by Q and input energy by R.
struct ControlProblem {
  Index horizon = 1;
  Weights q;  // p(T-1) x p(T-1) PSD (or scalar q >= 0)
  Weights r;  // mT x mT PD (or scalar r > 0)
  Vector target;

  ControlProblem(Index horizon, Weights q, Weights r, Vector target);
  ControlProblem(Index horizon, double q, double r, Vector target);
};

/// Input sequence over a horizon, stored in reverse-time stacked form
/// [u(T-1)^T ... u(0)^T]^T to match the controllability matrix block order.
class ControlSequence {
 public:
  ControlSequence() = default;

  static ControlSequence from_stacked(Vector stacked, Index input_dim);
  static ControlSequence from_steps(const std::vector<Vector>& steps);

  Index input_dim() const { return m_; }
  Index horizon() const { return horizon_; }

  /// u(t) for t in [0, horizon); reads block (T-1-t) of the stacked vector.
  Vector at(Index t) const;

  const Vector& stacked() const { return stacked_; }
  double energy() const { return stacked_.squaredNorm(); }

 private:
  Vector stacked_;
  Index m_ = 0;
  Index horizon_ = 0;
};

/// States and outputs of a simulated run; column t holds x(t) / y(t).
struct Trajectory {
  Matrix states;   // n x (T+1)
  Matrix outputs;  // p x (T+1)
};

Trajectory simulate(const LinearNetwork& net, const ControlSequence& u,
                    const Vector& x0);

/// Free response over T steps (no input).
Trajectory simulate_free(const LinearNetwork& net, const Vector& x0, Index horizon);

/// T-step output controllability matrix C_T = [CB CAB ... CA^{T-1}B]
/// (p x mT). Block j multiplies u(T-j); built by a running C A^t product.
Matrix output_ctrb_matrix(const LinearNetwork& net, Index horizon);

/// T-step output controllability Gramian W_T = C_T C_T^T (p x p).
Matrix output_gramian(const LinearNetwork& net, Index horizon);

/// Block anti-triangular map from the stacked reverse-time input to the
/// intermediate outputs y(1..T-1); p(T-1) x mT, empty for T = 1.
Matrix hankel_blocks(const LinearNetwork& net, Index horizon);

/// Optimal control: minimizes the weighted output-deviation + input cost
/// subject to y(T) = y_f, via the kernel-corrected pseudoinverse formula.
ControlSequence model_based_optimal(const LinearNetwork& net,
                                    const ControlProblem& prob,
                                    double tol = kDefaultSvdTol);

/// Classic Gramian route to the minimum-energy control,
/// u(t) = B^T (A^T)^{T-1-t} C^T W_T^{-1} y_f. Deliberately kept in this form:
/// its conditioning collapse on larger networks is itself under study.
/// Solves against W_T by default; explicit_inverse forms W_T^{-1} instead.
ControlSequence model_based_min_energy_gramian(const LinearNetwork& net,
                                               Index horizon, const Vector& y_f,
                                               bool explicit_inverse = false);

struct ControllabilityReport {
  bool controllable = false;
  Index rank = 0;
  Index required = 0;
  double sigma_min = 0.0;  // smallest singular value of C_T
};

ControllabilityReport is_output_controllable(const LinearNetwork& net,
                                             Index horizon,
                                             double tol = kDefaultSvdTol);

}  // namespace netctl
