#pragma once

// Butcher tableaux built from SBP schemes, classical reference tableaux and
// the linear stability function.

#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "sbp_time/errors.hpp"
#include "sbp_time/linalg.hpp"
#include "sbp_time/projection.hpp"
#include "sbp_time/quadrature.hpp"
#include "sbp_time/sbp_operator.hpp"

namespace sbp_time {

struct ButcherTableau {
  Matrix A;
  Vector b;
  Vector c;
  std::string provenance;

  Eigen::Index stages() const { return b.size(); }
};

/// Validates dimensions, finiteness, c in [0, 1] and sum(b) = 1.
inline ButcherTableau make_tableau(Matrix A, Vector b, Vector c, std::string provenance) {
  const Eigen::Index s = b.size();
  require(s >= 1 && A.rows() == s && A.cols() == s && c.size() == s, ErrorKind::InvalidArgument,
          "tableau dimensions are inconsistent");
  linalg::require_finite(A, "A");
  linalg::require_finite(b, "b");
  linalg::require_finite(c, "c");
  require(std::abs(b.sum() - 1.0) <= 1e-12, ErrorKind::InvalidArgument, "weights must sum to one");
  for (Eigen::Index i = 0; i < s; ++i) {
    require(c(i) >= -1e-12 && c(i) <= 1.0 + 1e-12, ErrorKind::InvalidArgument,
            "abscissae must lie in [0, 1]");
  }
  return {std::move(A), std::move(b), std::move(c), std::move(provenance)};
}

namespace detail {

inline Vector normalized_weights(const SbpOperator& op) {
  return op.M * Vector::Ones(op.size()) / op.T;
}

}  // namespace detail

/// A = JF / T, b = M 1 / T, c = tau / T.
inline ButcherTableau projection_tableau(const ProjectionScheme& scheme) {
  const auto& op = scheme.op;
  return make_tableau(scheme.JF / op.T, detail::normalized_weights(op), op.nodes / op.T,
                      "projection: " + op.label);
}

inline ButcherTableau projection_tableau(const SbpOperator& op) {
  return projection_tableau(make_projection_scheme(op));
}

/// A = M^{-1} (A*)^T M with A* = -Y / T, where D Y = F and tR^T Y = 0. The
/// sign accounts for the dual integral inverting -D rather than D.
inline ButcherTableau dual_projection_tableau(const ProjectionScheme& scheme) {
  const auto& op = scheme.op;
  const Matrix Y = scheme.has_dual() ? scheme.JF_dual : dual_integration_operator(op, scheme.F);
  const Matrix adjoint = -Y / op.T;
  const Matrix A = linalg::solve(op.M, Matrix(adjoint.transpose() * op.M));
  return make_tableau(A, detail::normalized_weights(op), op.nodes / op.T,
                      "projection-dual: " + op.label);
}

inline ButcherTableau dual_projection_tableau(const SbpOperator& op) {
  return dual_projection_tableau(make_projection_scheme(op, true));
}

/// SBP-SAT scheme: A = (D + M^{-1} tL tL^T)^{-1} / T.
inline ButcherTableau sat_tableau(const SbpOperator& op) {
  const Eigen::Index s = op.size();
  const Matrix penalized = op.D + linalg::solve(op.M, Matrix(op.tL * op.tL.transpose()));
  const Matrix A = linalg::solve(penalized, Matrix::Identity(s, s)) / op.T;
  return make_tableau(A, detail::normalized_weights(op), op.nodes / op.T, "sat: " + op.label);
}

// Reference tableaux ---------------------------------------------------------

namespace detail {

/// Lobatto IIIA via a_ij = int_0^{c_i} l_j, integrated with Gauss quadrature.
inline ButcherTableau lobatto_iiia(int s) {
  const auto lobatto = build_rule(QuadratureKind::Lobatto, s, 1.0);
  const Vector& c = lobatto.nodes;
  const Vector bary = barycentric_weights(c);
  const auto gauss = build_rule(QuadratureKind::Gauss, s, 1.0);
  Matrix A = Matrix::Zero(s, s);
  for (int i = 0; i < s; ++i) {
    for (Eigen::Index k = 0; k < gauss.size(); ++k) {
      const double t = c(i) * gauss.nodes(k);
      A.row(i) += c(i) * gauss.weights(k) * lagrange_basis_at(c, bary, t).transpose();
    }
  }
  return make_tableau(A, lobatto.weights, c, "reference: LobattoIIIA_" + std::to_string(s));
}

/// Lobatto IIIB from b_i a^B_ij + b_j a^A_ji = b_i b_j.
inline ButcherTableau lobatto_iiib(int s) {
  const auto a = lobatto_iiia(s);
  Matrix B(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) B(i, j) = a.b(j) - a.b(j) * a.A(j, i) / a.b(i);
  }
  return make_tableau(B, a.b, a.c, "reference: LobattoIIIB_" + std::to_string(s));
}

inline ButcherTableau two_stage(const std::string& name, double a11, double a12, double a21,
                                double a22, double b1, double b2, double c1, double c2) {
  Matrix A(2, 2);
  A << a11, a12, a21, a22;
  return make_tableau(A, Vector{{b1, b2}}, Vector{{c1, c2}}, "reference: " + name);
}

inline int parse_stage_suffix(std::string_view name, std::string_view prefix) {
  const auto digits = name.substr(prefix.size());
  int s = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), s);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
    throw Error(ErrorKind::UnknownName, std::string(name));
  }
  require(s >= 2 && s <= 64, ErrorKind::UnknownName, "stage count out of range in " + std::string(name));
  return s;
}

}  // namespace detail

/// Classical tableaux: LobattoIIIA_<s>, LobattoIIIB_<s>, LobattoIIIC_2,
/// RadauIIA_2, RadauIA_2, RadauI_2, RadauII_2.
inline ButcherTableau reference_tableau(std::string_view name) {
  constexpr std::string_view iiia = "LobattoIIIA_";
  constexpr std::string_view iiib = "LobattoIIIB_";
  if (name.starts_with(iiia)) return detail::lobatto_iiia(detail::parse_stage_suffix(name, iiia));
  if (name.starts_with(iiib)) return detail::lobatto_iiib(detail::parse_stage_suffix(name, iiib));
  const std::string n(name);
  if (n == "LobattoIIIC_2") return detail::two_stage(n, 0.5, -0.5, 0.5, 0.5, 0.5, 0.5, 0.0, 1.0);
  if (n == "RadauIIA_2")
    return detail::two_stage(n, 5.0 / 12, -1.0 / 12, 0.75, 0.25, 0.75, 0.25, 1.0 / 3, 1.0);
  if (n == "RadauIA_2")
    return detail::two_stage(n, 0.25, -0.25, 0.25, 5.0 / 12, 0.25, 0.75, 0.0, 2.0 / 3);
  if (n == "RadauI_2")
    return detail::two_stage(n, 0.0, 0.0, 1.0 / 3, 1.0 / 3, 0.25, 0.75, 0.0, 2.0 / 3);
  if (n == "RadauII_2")
    return detail::two_stage(n, 1.0 / 3, 0.0, 1.0, 0.0, 0.75, 0.25, 1.0 / 3, 1.0);
  throw Error(ErrorKind::UnknownName, n);
}

// Stability function ---------------------------------------------------------

namespace detail {

struct LogDeterminant {
  Complex log_abs_and_phase;  // log|det| + i arg(det)
  bool singular;
};

/// log det via LU so that large |z| cannot overflow the determinant itself.
inline LogDeterminant log_determinant(const ComplexMatrix& m, double pivot_tol) {
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  const auto diag = lu.matrixLU().diagonal();
  const double scale = m.cwiseAbs().maxCoeff();
  Complex sum{0.0, 0.0};
  bool singular = false;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (std::abs(diag(i)) <= pivot_tol * scale) {
      singular = true;
      continue;
    }
    sum += std::log(diag(i));
  }
  if (lu.permutationP().determinant() < 0) sum += Complex(0.0, std::numbers::pi);
  return {sum, singular};
}

}  // namespace detail

/// R(z) = det(I - zA + z 1 b^T) / det(I - zA).
inline Complex stability_function(const ButcherTableau& tab, Complex z) {
  const Eigen::Index s = tab.stages();
  const ComplexMatrix I = ComplexMatrix::Identity(s, s);
  const ComplexMatrix zA = z * tab.A.cast<Complex>();
  const ComplexMatrix denominator = I - zA;
  const ComplexMatrix numerator =
      denominator + z * Vector::Ones(s).cast<Complex>() * tab.b.transpose().cast<Complex>();
  const auto den = detail::log_determinant(denominator, 1e-14);
  if (den.singular) throw Error(ErrorKind::PoleAtZ, "det(I - zA) vanishes");
  const auto num = detail::log_determinant(numerator, 0.0);
  if (num.singular) return {0.0, 0.0};
  return std::exp(num.log_abs_and_phase - den.log_abs_and_phase);
}

struct StabilityGrid {
  double imag_max = 1e3;
  double imag_min = 1e-3;
  int imag_points = 4000;  // split evenly between the two half-axes
  double plane_extent = 1e3;
  double plane_min = 1e-3;
  int plane_points = 60;   // log-spaced magnitudes per axis and sign
  double large_z = -1e8;
};

struct StabilitySample {
  Complex z;
  double abs_R;
};

struct StabilityReport {
  bool a_stable_sampled = false;
  double max_abs_R_on_imaginary_axis = 0.0;
  double max_abs_R_left_half_plane = 0.0;
  double R_at_large_z = 0.0;  // |R(large_z)|
  bool l_stable = false;
  StabilityGrid grid;
  std::vector<StabilitySample> samples;
};

inline constexpr double kAStabilitySlack = 1e-10;
inline constexpr double kLStabilityThreshold = 1e-5;

namespace detail {

inline std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {hi};
  const double a = std::log10(lo), b = std::log10(hi);
  for (int k = 0; k < count; ++k) out.push_back(std::pow(10.0, a + (b - a) * k / (count - 1)));
  return out;
}

inline double abs_R_or_inf(const ButcherTableau& tab, Complex z) {
  try {
    return std::abs(stability_function(tab, z));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::PoleAtZ) return std::numeric_limits<double>::infinity();
    throw;
  }
}

}  // namespace detail

/// Samples |R| on the imaginary axis and on a log-spaced grid of the closed
/// left half-plane. L-stability uses |R(large_z)|, nudged off the real axis
/// if it hits a pole.
inline StabilityReport stability_report(const ButcherTableau& tab, const StabilityGrid& grid = {}) {
  StabilityReport report;
  report.grid = grid;
  auto record = [&](Complex z) {
    const double value = detail::abs_R_or_inf(tab, z);
    report.samples.push_back({z, value});
    return value;
  };

  report.max_abs_R_on_imaginary_axis = record({0.0, 0.0});
  for (double y : detail::log_spaced(grid.imag_min, grid.imag_max, grid.imag_points / 2)) {
    for (double sign : {1.0, -1.0}) {
      report.max_abs_R_on_imaginary_axis =
          std::max(report.max_abs_R_on_imaginary_axis, record({0.0, sign * y}));
    }
  }

  std::vector<double> imag_parts{0.0};
  for (double y : detail::log_spaced(grid.plane_min, grid.plane_extent, grid.plane_points)) {
    imag_parts.push_back(y);
    imag_parts.push_back(-y);
  }
  for (double x : detail::log_spaced(grid.plane_min, grid.plane_extent, grid.plane_points)) {
    for (double y : imag_parts) {
      report.max_abs_R_left_half_plane = std::max(report.max_abs_R_left_half_plane, record({-x, y}));
    }
  }

  report.a_stable_sampled = report.max_abs_R_on_imaginary_axis <= 1.0 + kAStabilitySlack &&
                            report.max_abs_R_left_half_plane <= 1.0 + kAStabilitySlack;

  Complex z_large{grid.large_z, 0.0};
  double large = detail::abs_R_or_inf(tab, z_large);
  if (!std::isfinite(large)) large = detail::abs_R_or_inf(tab, z_large + Complex(0.0, 1e-3 * std::abs(grid.large_z)));
  report.R_at_large_z = large;
  report.l_stable = report.a_stable_sampled && large <= kLStabilityThreshold;
  return report;
}

}  // namespace sbp_time
