#pragma once

// First-derivative summation-by-parts operators on [0, T]: data type,
// polynomial collocation construction, validation, nullspace consistency and
// the oscillation vector spanning ker(D^T M).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sbp_time/errors.hpp"
#include "sbp_time/linalg.hpp"
#include "sbp_time/quadrature.hpp"

namespace sbp_time {

enum class NormKind { Diagonal, Dense };

struct SbpOperator {
  Vector nodes;
  Matrix D;
  Matrix M;
  Vector tL;
  Vector tR;
  double T = 1.0;
  int interior_order = 1;
  int boundary_order = 1;
  NormKind norm_kind = NormKind::Diagonal;
  /// Rows at each end that use a boundary closure. Collocation operators set
  /// this to the full size, so they have no interior rows.
  Eigen::Index boundary_rows = 0;
  std::string label;

  Eigen::Index size() const { return nodes.size(); }
};

/// Checks shapes, finiteness and ascending nodes. Does not check the SBP
/// property itself; use `validate` for that.
inline void check_well_formed(const SbpOperator& op) {
  const Eigen::Index s = op.nodes.size();
  require(s >= 1, ErrorKind::InvalidArgument, "operator has no nodes");
  require(op.D.rows() == s && op.D.cols() == s && op.M.rows() == s && op.M.cols() == s &&
              op.tL.size() == s && op.tR.size() == s,
          ErrorKind::InvalidArgument, "operator dimensions are inconsistent");
  linalg::require_finite(op.nodes, "nodes");
  linalg::require_finite(op.D, "D");
  linalg::require_finite(op.M, "M");
  linalg::require_finite(op.tL, "tL");
  linalg::require_finite(op.tR, "tR");
  require(op.T > 0.0 && std::isfinite(op.T), ErrorKind::InvalidArgument, "T must be positive");
  for (Eigen::Index i = 1; i < s; ++i) {
    require(op.nodes(i) > op.nodes(i - 1), ErrorKind::InvalidArgument,
            "nodes must be strictly ascending");
  }
}

namespace detail {

inline Vector barycentric_weights(const Vector& x) {
  const Eigen::Index s = x.size();
  Vector w = Vector::Ones(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      if (i != j) w(i) /= (x(i) - x(j));
    }
  }
  return w;
}

/// Values of all Lagrange basis polynomials of the nodes `x` at `point`.
inline Vector lagrange_basis_at(const Vector& x, const Vector& bary, double point) {
  const Eigen::Index s = x.size();
  Vector values = Vector::Zero(s);
  for (Eigen::Index j = 0; j < s; ++j) {
    if (point == x(j)) {
      values(j) = 1.0;
      return values;
    }
  }
  double denominator = 0.0;
  for (Eigen::Index j = 0; j < s; ++j) {
    values(j) = bary(j) / (point - x(j));
    denominator += values(j);
  }
  return values / denominator;
}

}  // namespace detail

/// Lagrange differentiation matrix on the rule's nodes with M = diag(weights)
/// and boundary extractors given by the Lagrange basis at 0 and T.
inline SbpOperator collocation_operator(const QuadratureRule& rule) {
  const Eigen::Index s = rule.size();
  require(s >= 2, ErrorKind::InvalidArgument, "collocation operator needs at least two nodes");
  const Vector& x = rule.nodes;
  const Vector bary = detail::barycentric_weights(x);

  Matrix D = Matrix::Zero(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    double diagonal = 0.0;
    for (Eigen::Index j = 0; j < s; ++j) {
      if (i == j) continue;
      D(i, j) = (bary(j) / bary(i)) / (x(i) - x(j));
      diagonal -= D(i, j);
    }
    D(i, i) = diagonal;
  }

  SbpOperator op;
  op.nodes = x;
  op.D = std::move(D);
  op.M = rule.weights.asDiagonal();
  op.tL = detail::lagrange_basis_at(x, bary, 0.0);
  op.tR = detail::lagrange_basis_at(x, bary, rule.T);
  op.T = rule.T;
  op.interior_order = static_cast<int>(s) - 1;
  op.boundary_order = static_cast<int>(s) - 1;
  op.norm_kind = NormKind::Diagonal;
  op.boundary_rows = s;
  op.label = std::string(to_string(rule.kind)) + " collocation, s=" + std::to_string(s);
  check_well_formed(op);
  return op;
}

/// M D + (M D)^T - (tR tR^T - tL tL^T)
inline Matrix sbp_defect(const SbpOperator& op) {
  const Matrix MD = op.M * op.D;
  return MD + MD.transpose() - (op.tR * op.tR.transpose() - op.tL * op.tL.transpose());
}

struct ValidationReport {
  double sbp_residual = 0.0;
  double norm_min_eigenvalue = 0.0;
  double norm_symmetry_residual = 0.0;
  bool norm_positive_definite = false;
  double constant_residual = 0.0;
  int interior_accuracy = 0;
  int boundary_accuracy = 0;
  /// Largest k with tL^T tau^k = 0^k and tR^T tau^k = T^k.
  int extractor_accuracy = 0;

  bool sbp_ok(double tol = 1e-12) const { return sbp_residual <= tol; }
};

inline constexpr int kMaxMonomialDegree = 12;
inline constexpr double kAccuracyThreshold = 1e-10;

/// Measures the SBP defect, definiteness of M and the accuracy orders.
/// Accuracy is tested row by row on (tau - tau_i)^k in units of the mean
/// spacing, so the measured order does not depend on the resolution.
inline ValidationReport validate(const SbpOperator& op) {
  check_well_formed(op);
  ValidationReport report;
  const Eigen::Index s = op.size();
  // The SBP identity scales like 1; D like 1/T, M like T.
  report.sbp_residual = linalg::max_abs(sbp_defect(op));
  report.norm_symmetry_residual = linalg::max_abs(op.M - op.M.transpose());
  report.norm_min_eigenvalue = linalg::min_symmetric_eigenvalue(op.M);
  report.norm_positive_definite =
      report.norm_min_eigenvalue > 0.0 && report.norm_symmetry_residual <= 1e-12 * linalg::max_abs(op.M);
  report.constant_residual = linalg::max_abs(op.D * Vector::Ones(s)) * op.T;

  const Eigen::Index nb = std::min(op.boundary_rows, s);
  const bool has_interior = 2 * nb < s;
  auto rows_ok = [&](const Vector& residual, bool interior) {
    for (Eigen::Index i = 0; i < s; ++i) {
      const bool is_boundary = i < nb || i >= s - nb;
      if (is_boundary == interior) continue;
      if (!(std::abs(residual(i)) <= kAccuracyThreshold)) return false;
    }
    return true;
  };

  const double h = op.T / static_cast<double>(std::max<Eigen::Index>(s - 1, 1));
  bool interior_passing = true, boundary_passing = true, extractor_passing = true;
  for (int k = 0; k <= kMaxMonomialDegree; ++k) {
    const Vector monomial = linalg::pow(op.nodes, k);
    Vector residual(s);
    for (Eigen::Index i = 0; i < s; ++i) {
      const Vector row = op.D.row(i).transpose() * h;
      const Vector local = linalg::pow(Vector((op.nodes.array() - op.nodes(i)) / h), k);
      const double value = row.dot(local) - (k == 1 ? 1.0 : 0.0);
      residual(i) = value / std::max(1.0, row.cwiseAbs().dot(local.cwiseAbs()));
    }
    if (boundary_passing && rows_ok(residual, false)) {
      report.boundary_accuracy = k;
    } else {
      boundary_passing = false;
    }
    if (has_interior && interior_passing && rows_ok(residual, true)) {
      report.interior_accuracy = k;
    } else {
      interior_passing = false;
    }
    const double end_scale = std::max(1.0, std::pow(op.T, k));
    const double left = std::abs(op.tL.dot(monomial) - (k == 0 ? 1.0 : 0.0));
    const double right = std::abs(op.tR.dot(monomial) - std::pow(op.T, k));
    if (extractor_passing && std::max(left, right) / end_scale <= kAccuracyThreshold) {
      report.extractor_accuracy = k;
    } else {
      extractor_passing = false;
    }
  }
  if (!has_interior) report.interior_accuracy = report.boundary_accuracy;
  return report;
}

inline constexpr double kNullspaceTolerance = 1e-10;

/// ker D is one-dimensional and spanned by the constant grid function.
inline bool is_nullspace_consistent(const SbpOperator& op) {
  const auto kernel = linalg::nullspace(op.D, kNullspaceTolerance);
  if (kernel.size() != 1) return false;
  const Vector e = Vector::Ones(op.size()).normalized();
  const double cosine = std::min(1.0, std::abs(kernel.front().dot(e)));
  const double sine = (kernel.front() - kernel.front().dot(e) * e).norm();
  return std::atan2(sine, cosine) < 1e-8;
}

struct OscillationVector {
  Vector o;
  double norm_M_sq = 0.0;
};

/// Unit vector spanning ker(D^T M), sign fixed so that its first entry of
/// non-negligible magnitude is positive.
inline OscillationVector oscillation_vector(const SbpOperator& op) {
  if (!is_nullspace_consistent(op)) {
    throw Error(ErrorKind::NotNullspaceConsistent, op.label);
  }
  const auto kernel = linalg::nullspace(op.D.transpose() * op.M, kNullspaceTolerance);
  require(kernel.size() == 1, ErrorKind::NotNullspaceConsistent,
          "ker D* is not one-dimensional for " + op.label);
  Vector o = kernel.front().normalized();
  for (Eigen::Index i = 0; i < o.size(); ++i) {
    if (std::abs(o(i)) > 1e-12) {
      if (o(i) < 0.0) o = -o;
      break;
    }
  }
  const double norm_sq = o.dot(op.M * o);
  return {o, norm_sq};
}

/// The same operator on [0, factor * T].
inline SbpOperator rescaled(const SbpOperator& op, double factor) {
  require(factor > 0.0, ErrorKind::InvalidArgument, "scale factor must be positive");
  SbpOperator out = op;
  out.nodes *= factor;
  out.D /= factor;
  out.M *= factor;
  out.T *= factor;
  return out;
}

}  // namespace sbp_time
