#include "netctl/bench.hpp"

#include <Eigen/LU>

namespace netctl::bench {

OracleSolution oracle_kkt(const LinearNetwork& net, const ControlProblem& prob) {
  const Index m = net.m();
  const Index p = net.p();
  const Index mt = m * prob.horizon;
  if (prob.target.size() != p) {
    throw InvalidInputError("oracle_kkt: target dimension != p");
  }

  const Matrix ctrb = output_ctrb_matrix(net, prob.horizon);
  Matrix gram = prob.r.materialize(mt);
  if (!prob.q.is_zero() && prob.horizon > 1) {
    const Matrix hank = hankel_blocks(net, prob.horizon);
    gram.noalias() += hank.transpose() * prob.q.apply(hank);
  }

  const Index dim = mt + p;
  Matrix kkt = Matrix::Zero(dim, dim);
  kkt.topLeftCorner(mt, mt) = 2.0 * gram;
  kkt.topRightCorner(mt, p) = ctrb.transpose();
  kkt.bottomLeftCorner(p, mt) = ctrb;
  Vector rhs = Vector::Zero(dim);
  rhs.tail(p) = prob.target;

  Eigen::FullPivLU<Matrix> lu(kkt);
  if (!lu.isInvertible()) {
    throw ReachabilityError(
        "oracle_kkt: singular KKT system (target unreachable or degenerate "
        "constraint matrix)",
        0.0);
  }
  const Vector sol = lu.solve(rhs);

  OracleSolution out;
  out.kkt_residual = (kkt * sol - rhs).norm();
  Vector u = sol.head(mt);
  out.cost = u.dot(gram * u);
  out.u = ControlSequence::from_stacked(std::move(u), m);
  return out;
}

}  // namespace netctl::bench
