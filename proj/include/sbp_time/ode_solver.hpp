#pragma once

// Implicit Runge-Kutta steps for any Butcher tableau: a direct solve for
// linear-affine problems u' = L u + g(t), Newton's method otherwise, block
// marching over [0, t_end] and convergence studies.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbp_time/butcher.hpp"
#include "sbp_time/errors.hpp"
#include "sbp_time/linalg.hpp"

namespace sbp_time {

template <class Scalar>
using VectorOf = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatrixOf = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// u' = lambda u + forcing(t)
struct LinearAffine {
  Matrix lambda;
  std::function<Vector(double)> forcing;
};

struct OdeProblem {
  std::string name;
  Eigen::Index dimension = 1;
  std::function<Vector(double, const Vector&)> rhs;
  std::function<Matrix(double, const Vector&)> jacobian;  // optional
  std::function<Vector(double)> exact;                    // optional
  std::optional<LinearAffine> linear_affine;
  Vector u0;
  double t_end = 1.0;
};

inline void check_problem(const OdeProblem& prob) {
  require(prob.dimension >= 1, ErrorKind::InvalidArgument, "dimension must be positive");
  require(prob.u0.size() == prob.dimension, ErrorKind::InvalidArgument, "u0 has wrong size");
  require(static_cast<bool>(prob.rhs), ErrorKind::InvalidArgument, "problem needs a right-hand side");
  require(prob.t_end > 0.0, ErrorKind::InvalidArgument, "t_end must be positive");
  if (prob.exact) {
    require(linalg::max_abs(prob.exact(0.0) - prob.u0) <= 1e-12, ErrorKind::InvalidArgument,
            "exact solution does not match u0");
  }
  if (prob.linear_affine) {
    require(prob.linear_affine->lambda.rows() == prob.dimension &&
                prob.linear_affine->lambda.cols() == prob.dimension,
            ErrorKind::InvalidArgument, "linear part has wrong size");
  }
}

/// u' = -u, u(0) = 1 on [0, 1].
inline OdeProblem nonstiff_problem() {
  OdeProblem p;
  p.name = "nonstiff";
  p.rhs = [](double, const Vector& u) -> Vector { return -u; };
  p.jacobian = [](double, const Vector&) -> Matrix { return -Matrix::Identity(1, 1); };
  p.exact = [](double t) -> Vector { return Vector::Constant(1, std::exp(-t)); };
  p.linear_affine = LinearAffine{-Matrix::Identity(1, 1), [](double) -> Vector { return Vector::Zero(1); }};
  p.u0 = Vector::Ones(1);
  p.t_end = 1.0;
  check_problem(p);
  return p;
}

/// Prothero-Robinson: u' = lambda (u - exp(-t)) - exp(-t), u(0) = 1 on [0, 1].
inline OdeProblem stiff_problem(double lambda = 1000.0) {
  OdeProblem p;
  p.name = "stiff";
  p.rhs = [lambda](double t, const Vector& u) -> Vector {
    return (lambda * (u.array() - std::exp(-t)) - std::exp(-t)).matrix();
  };
  p.jacobian = [lambda](double, const Vector&) -> Matrix { return Matrix::Constant(1, 1, lambda); };
  p.exact = [](double t) -> Vector { return Vector::Constant(1, std::exp(-t)); };
  p.linear_affine = LinearAffine{Matrix::Constant(1, 1, lambda), [lambda](double t) -> Vector {
                                   return Vector::Constant(1, -(lambda + 1.0) * std::exp(-t));
                                 }};
  p.u0 = Vector::Ones(1);
  p.t_end = 1.0;
  check_problem(p);
  return p;
}

template <class Scalar>
struct StepResultOf {
  std::vector<VectorOf<Scalar>> stages;
  VectorOf<Scalar> u_plus;
  int newton_iters = 0;
  bool converged = true;
};

using StepResult = StepResultOf<double>;

/// Solves the stage equations U_i = u0 + h sum_j a_ij (L U_j + g_j) exactly.
/// `forcing` holds g at the stage times, one row per stage.
template <class Scalar>
StepResultOf<Scalar> step_linear_affine(const ButcherTableau& tab, const MatrixOf<Scalar>& lambda,
                                        const MatrixOf<Scalar>& forcing, const VectorOf<Scalar>& u0,
                                        double h) {
  const Eigen::Index s = tab.stages();
  const Eigen::Index d = u0.size();
  require(lambda.rows() == d && lambda.cols() == d, ErrorKind::InvalidArgument, "lambda size");
  require(forcing.rows() == s && forcing.cols() == d, ErrorKind::InvalidArgument, "forcing size");

  MatrixOf<Scalar> system = MatrixOf<Scalar>::Identity(s * d, s * d);
  VectorOf<Scalar> rhs(s * d);
  for (Eigen::Index i = 0; i < s; ++i) {
    VectorOf<Scalar> accumulated = u0;
    for (Eigen::Index j = 0; j < s; ++j) {
      const Scalar ha = Scalar(h * tab.A(i, j));
      system.block(i * d, j * d, d, d) -= ha * lambda;
      accumulated += ha * forcing.row(j).transpose();
    }
    rhs.segment(i * d, d) = accumulated;
  }

  Eigen::PartialPivLU<MatrixOf<Scalar>> lu(system);
  const double scale = system.cwiseAbs().maxCoeff();
  if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > linalg::kPivotTolerance * scale)) {
    throw Error(ErrorKind::SingularStageSystem, "I - h A (x) lambda is singular");
  }
  const VectorOf<Scalar> U = lu.solve(rhs);

  StepResultOf<Scalar> result;
  result.u_plus = u0;
  for (Eigen::Index i = 0; i < s; ++i) {
    VectorOf<Scalar> stage = U.segment(i * d, d);
    const VectorOf<Scalar> slope = lambda * stage + forcing.row(i).transpose();
    result.u_plus += Scalar(h * tab.b(i)) * slope;
    result.stages.push_back(std::move(stage));
  }
  return result;
}

/// Scalar test equation u' = lambda u (+ constant-in-stage forcing g).
template <class Scalar>
StepResultOf<Scalar> step_linear_affine(const ButcherTableau& tab, Scalar lambda, Scalar u0, double h,
                                        const VectorOf<Scalar>& forcing = {}) {
  const Eigen::Index s = tab.stages();
  MatrixOf<Scalar> g = MatrixOf<Scalar>::Zero(s, 1);
  if (forcing.size() == s) g.col(0) = forcing;
  return step_linear_affine<Scalar>(tab, MatrixOf<Scalar>::Constant(1, 1, lambda), g,
                                    VectorOf<Scalar>::Constant(1, u0), h);
}

inline StepResult step_linear_affine(const ButcherTableau& tab, const OdeProblem& prob, const Vector& u0,
                                     double t0, double h) {
  require(prob.linear_affine.has_value(), ErrorKind::InvalidArgument, "problem is not linear-affine");
  const Eigen::Index s = tab.stages();
  Matrix g(s, prob.dimension);
  for (Eigen::Index i = 0; i < s; ++i) g.row(i) = prob.linear_affine->forcing(t0 + tab.c(i) * h).transpose();
  return step_linear_affine<double>(tab, prob.linear_affine->lambda, g, u0, h);
}

struct NewtonOptions {
  double tol = 1e-12;
  int max_iters = 50;
};

/// Central-difference Jacobian with step 1e-7 max(1, |u_k|).
inline Matrix finite_difference_jacobian(const OdeProblem& prob, double t, const Vector& u) {
  const Eigen::Index d = u.size();
  Matrix J(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double step = 1e-7 * std::max(1.0, std::abs(u(k)));
    Vector plus = u, minus = u;
    plus(k) += step;
    minus(k) -= step;
    J.col(k) = (prob.rhs(t, plus) - prob.rhs(t, minus)) / (2.0 * step);
  }
  return J;
}

/// Newton's method on U - 1 (x) u0 - h (A (x) I) F(U) = 0, starting from
/// U = 1 (x) u0 and refactoring the full Jacobian every iteration.
inline StepResult step_newton(const ButcherTableau& tab, const OdeProblem& prob, const Vector& u0,
                              double t0, double h, const NewtonOptions& options = {}) {
  require(h > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  const Eigen::Index s = tab.stages();
  const Eigen::Index d = u0.size();
  Vector U(s * d);
  for (Eigen::Index i = 0; i < s; ++i) U.segment(i * d, d) = u0;

  auto stage_time = [&](Eigen::Index i) { return t0 + tab.c(i) * h; };
  auto evaluate = [&](const Vector& stages) {
    Vector F(s * d);
    for (Eigen::Index i = 0; i < s; ++i) F.segment(i * d, d) = prob.rhs(stage_time(i), stages.segment(i * d, d));
    return F;
  };
  auto residual_of = [&](const Vector& stages, const Vector& F) {
    Vector r = stages;
    for (Eigen::Index i = 0; i < s; ++i) {
      r.segment(i * d, d) -= u0;
      for (Eigen::Index j = 0; j < s; ++j) r.segment(i * d, d) -= h * tab.A(i, j) * F.segment(j * d, d);
    }
    return r;
  };

  StepResult result;
  result.converged = false;
  Vector F = evaluate(U);
  Vector residual = residual_of(U, F);
  for (int it = 0;; ++it) {
    if (linalg::max_abs(residual) <= options.tol) {
      result.converged = true;
      result.newton_iters = it;
      break;
    }
    if (it == options.max_iters) {
      throw Error(ErrorKind::NewtonDiverged, "stage residual " + std::to_string(linalg::max_abs(residual)) +
                                                 " after " + std::to_string(it) + " iterations");
    }
    Matrix jacobian = Matrix::Identity(s * d, s * d);
    for (Eigen::Index j = 0; j < s; ++j) {
      const Vector uj = U.segment(j * d, d);
      const Matrix Jf = prob.jacobian ? prob.jacobian(stage_time(j), uj)
                                      : finite_difference_jacobian(prob, stage_time(j), uj);
      for (Eigen::Index i = 0; i < s; ++i) jacobian.block(i * d, j * d, d, d) -= h * tab.A(i, j) * Jf;
    }
    Eigen::PartialPivLU<Matrix> lu(jacobian);
    U -= lu.solve(residual);
    F = evaluate(U);
    residual = residual_of(U, F);
    if (!residual.allFinite()) throw Error(ErrorKind::NewtonDiverged, "non-finite stage residual");
  }

  result.u_plus = u0;
  for (Eigen::Index i = 0; i < s; ++i) {
    result.stages.push_back(U.segment(i * d, d));
    result.u_plus += h * tab.b(i) * F.segment(i * d, d);
  }
  return result;
}

struct MarchOptions {
  bool use_linear_path = true;  // direct solve when the problem is linear-affine
  NewtonOptions newton;
};

/// K uniform steps from (t0, u0) to t1; returns the K + 1 block endpoint values.
inline std::vector<Vector> march(const ButcherTableau& tab, const OdeProblem& prob, const Vector& u0,
                                 double t0, double t1, int blocks, const MarchOptions& options = {}) {
  require(blocks >= 1, ErrorKind::InvalidArgument, "need at least one block");
  require(t1 > t0, ErrorKind::InvalidArgument, "empty time interval");
  const double h = (t1 - t0) / blocks;
  const bool linear = options.use_linear_path && prob.linear_affine.has_value();
  std::vector<Vector> values{u0};
  values.reserve(static_cast<std::size_t>(blocks) + 1);
  for (int k = 0; k < blocks; ++k) {
    const double t = t0 + k * h;
    const auto step = linear ? step_linear_affine(tab, prob, values.back(), t, h)
                             : step_newton(tab, prob, values.back(), t, h, options.newton);
    values.push_back(step.u_plus);
  }
  return values;
}

inline std::vector<Vector> march(const ButcherTableau& tab, const OdeProblem& prob, int blocks,
                                 const MarchOptions& options = {}) {
  check_problem(prob);
  return march(tab, prob, prob.u0, 0.0, prob.t_end, blocks, options);
}

struct ConvergenceReport {
  std::string label;
  std::string resolution_kind;  // "blocks" or "nodes"
  std::vector<int> resolutions;
  std::vector<double> step_sizes;
  std::vector<double> errors;
  std::vector<double> eoc;  // one shorter than errors
  double fitted_slope = 0.0;
};

namespace detail {

inline void finish_report(ConvergenceReport& report) {
  report.eoc.clear();
  for (std::size_t k = 1; k < report.errors.size(); ++k) {
    report.eoc.push_back(std::log(report.errors[k - 1] / report.errors[k]) /
                         std::log(report.step_sizes[k - 1] / report.step_sizes[k]));
  }
  // Least-squares slope of log(error) against log(h), skipping exact zeros.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < report.errors.size(); ++k) {
    if (!(report.errors[k] > 0.0)) continue;
    const double x = std::log(report.step_sizes[k]), y = std::log(report.errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  report.fitted_slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : std::nan("");
}

inline double final_error(const ButcherTableau& tab, const OdeProblem& prob, int blocks,
                          const MarchOptions& options) {
  const auto values = march(tab, prob, blocks, options);
  return linalg::max_abs(values.back() - prob.exact(prob.t_end));
}

}  // namespace detail

/// Final-time errors of one tableau for increasing block counts.
inline ConvergenceReport convergence_by_blocks(const ButcherTableau& tab, const OdeProblem& prob,
                                               std::span<const int> blocks, const MarchOptions& options = {}) {
  require(static_cast<bool>(prob.exact), ErrorKind::InvalidArgument, "convergence study needs an exact solution");
  ConvergenceReport report;
  report.label = tab.provenance + " on " + prob.name;
  report.resolution_kind = "blocks";
  for (int K : blocks) {
    report.resolutions.push_back(K);
    report.step_sizes.push_back(prob.t_end / K);
    report.errors.push_back(detail::final_error(tab, prob, K, options));
  }
  detail::finish_report(report);
  return report;
}

/// Final-time errors for a family of tableaux indexed by node count N, with
/// a fixed number of blocks; the step size is t_end / (blocks (N - 1)).
inline ConvergenceReport convergence_by_nodes(const std::function<ButcherTableau(int)>& family,
                                              const OdeProblem& prob, std::span<const int> nodes,
                                              int blocks = 1, const MarchOptions& options = {}) {
  require(static_cast<bool>(prob.exact), ErrorKind::InvalidArgument, "convergence study needs an exact solution");
  ConvergenceReport report;
  report.resolution_kind = "nodes";
  for (int N : nodes) {
    const auto tab = family(N);
    if (report.label.empty()) report.label = tab.provenance + " on " + prob.name;
    report.resolutions.push_back(N);
    report.step_sizes.push_back(prob.t_end / (blocks * (N - 1.0)));
    report.errors.push_back(detail::final_error(tab, prob, blocks, options));
  }
  detail::finish_report(report);
  return report;
}

}  // namespace sbp_time
