#pragma once

// The filter F (M-orthogonal projection onto im D) and the discrete
// integration operators JF (values vanish at t = 0) and its dual (values
// vanish at t = T).

#include <string>

#include "sbp_time/errors.hpp"
#include "sbp_time/linalg.hpp"
#include "sbp_time/sbp_operator.hpp"

namespace sbp_time {

/// Absolute max-norm tolerance for D X = F (both sides are dimensionless).
inline constexpr double kIntegrationResidualTolerance = 1e-9;

/// F = I - o o^T M / |o|_M^2
inline Matrix filter_operator(const SbpOperator& op, const OscillationVector& osc) {
  require(osc.o.size() == op.size(), ErrorKind::InvalidArgument, "oscillation vector size");
  const Eigen::Index s = op.size();
  const Vector o_star = op.M.transpose() * osc.o;
  return Matrix::Identity(s, s) - osc.o * o_star.transpose() / osc.o.dot(op.M * osc.o);
}

namespace detail {

inline Matrix anchored_integral(const SbpOperator& op, const Matrix& F, const Vector& anchor) {
  require(op.size() >= 2, ErrorKind::InvalidArgument, "single-node operators have no integration operator");
  require(F.rows() == op.size() && F.cols() == op.size(), ErrorKind::InvalidArgument, "filter size");
  Matrix X = linalg::least_norm_solve(op.D, F, kIntegrationResidualTolerance);
  // D 1 = 0, so shifting each column by a constant keeps D X = F and moves
  // the anchored boundary value to zero.
  const Eigen::RowVectorXd shift = anchor.transpose() * X;
  X -= Vector::Ones(op.size()) * shift;
  return X;
}

}  // namespace detail

/// X with D X = F and tL^T X = 0.
inline Matrix integration_operator(const SbpOperator& op, const Matrix& F) {
  return detail::anchored_integral(op, F, op.tL);
}

/// Y with D Y = F and tR^T Y = 0.
inline Matrix dual_integration_operator(const SbpOperator& op, const Matrix& F) {
  return detail::anchored_integral(op, F, op.tR);
}

/// An operator together with its filter and integration operators. JF is
/// built eagerly; the dual is only built by `make_projection_scheme(op, true)`.
struct ProjectionScheme {
  SbpOperator op;
  OscillationVector osc;
  Matrix F;
  Matrix JF;
  Matrix JF_dual;  // empty unless requested

  bool has_dual() const { return JF_dual.size() > 0; }
};

inline ProjectionScheme make_projection_scheme(const SbpOperator& op, bool with_dual = false) {
  require(op.size() >= 2, ErrorKind::InvalidArgument, "projection needs at least two nodes");
  ProjectionScheme scheme;
  scheme.op = op;
  scheme.osc = oscillation_vector(op);
  scheme.F = filter_operator(op, scheme.osc);
  scheme.JF = integration_operator(op, scheme.F);
  if (with_dual) scheme.JF_dual = dual_integration_operator(op, scheme.F);
  return scheme;
}

}  // namespace sbp_time
