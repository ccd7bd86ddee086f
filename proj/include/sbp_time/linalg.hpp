#pragma once

// Dense real linear algebra used by every other module. Sizes are small
// (at most a few hundred rows), so everything is dense and direct.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "sbp_time/errors.hpp"

namespace sbp_time {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

namespace linalg {

/// Default relative rank threshold for rank-revealing factorizations.
inline constexpr double kRankTolerance = 1e-10;
/// Pivots smaller than this times max|A| make `solve` reject the matrix.
inline constexpr double kPivotTolerance = 1e-13;

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const std::string& name) {
  require(a.size() > 0, ErrorKind::InvalidArgument, name + " is empty");
  require(a.allFinite(), ErrorKind::InvalidArgument, name + " has non-finite entries");
}

/// Builds a matrix from nested rows; all rows must have equal length.
inline Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  require(!rows.empty() && !rows.front().empty(), ErrorKind::InvalidArgument,
          "matrix needs at least one row and column");
  const auto n = static_cast<Eigen::Index>(rows.front().size());
  Matrix m(static_cast<Eigen::Index>(rows.size()), n);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    require(static_cast<Eigen::Index>(row.size()) == n, ErrorKind::InvalidArgument,
            "ragged matrix rows");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  require_finite(m, "matrix");
  return m;
}

inline Vector from_span(std::span<const double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = values[static_cast<std::size_t>(i)];
  require_finite(v, "vector");
  return v;
}

/// Solves A X = B with partial-pivot LU.
inline Matrix solve(const Matrix& a, const Matrix& b) {
  require_finite(a, "A");
  require_finite(b, "B");
  require(a.rows() == a.cols(), ErrorKind::InvalidArgument, "solve needs a square matrix");
  require(a.rows() == b.rows(), ErrorKind::InvalidArgument, "solve: row mismatch");
  Eigen::PartialPivLU<Matrix> lu(a);
  const double scale = max_abs(a);
  const double smallest_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(smallest_pivot > 0.0 && smallest_pivot >= kPivotTolerance * scale)) {
    throw Error(ErrorKind::SingularMatrix,
                "pivot " + std::to_string(smallest_pivot) + " below tolerance");
  }
  return lu.solve(b);
}

/// Minimum-Frobenius-norm least-squares solution of A X = B via a complete
/// orthogonal decomposition. Throws ResidualTooLarge if some column of B is
/// not in the numerical range of A (max-norm residual above `tol`).
inline Matrix least_norm_solve(const Matrix& a, const Matrix& b, double tol,
                               double rank_tol = kRankTolerance) {
  require_finite(a, "A");
  require_finite(b, "B");
  require(a.rows() == b.rows(), ErrorKind::InvalidArgument, "least_norm_solve: row mismatch");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(rank_tol);
  cod.compute(a);
  Matrix x = cod.solve(b);
  const double residual = max_abs(a * x - b);
  if (!(residual <= tol)) {
    throw Error(ErrorKind::ResidualTooLarge,
                "residual " + std::to_string(residual) + " exceeds " + std::to_string(tol));
  }
  return x;
}

/// Orthonormal basis of the numerical kernel {v : |A v| <= tol |A|}, from the
/// right singular vectors whose singular values are at most tol * sigma_max.
inline std::vector<Vector> nullspace(const Matrix& a, double tol = kRankTolerance) {
  require_finite(a, "A");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  std::vector<Vector> basis;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double value = k < sigma.size() ? sigma(k) : 0.0;
    if (value <= tol * sigma_max) basis.push_back(svd.matrixV().col(k));
  }
  return basis;
}

inline Complex determinant(const ComplexMatrix& a) {
  return Eigen::PartialPivLU<ComplexMatrix>(a).determinant();
}

/// Smallest eigenvalue of a symmetric matrix (symmetrized before the solve).
inline double min_symmetric_eigenvalue(const Matrix& a) {
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

inline Vector ones(Eigen::Index n) { return Vector::Ones(n); }

/// Componentwise power of a vector; `pow(v, 0)` is all ones (including 0^0).
inline Vector pow(const Vector& v, int k) {
  Vector out = Vector::Ones(v.size());
  for (int j = 0; j < k; ++j) out = out.cwiseProduct(v);
  return out;
}

}  // namespace linalg
}  // namespace sbp_time
