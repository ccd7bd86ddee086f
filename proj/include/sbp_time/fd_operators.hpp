#pragma once

// Diagonal-norm finite difference SBP operators with a central interior
// stencil of order q and boundary closures of order q/2.

#include <string>
#include <vector>

#include "sbp_time/errors.hpp"
#include "sbp_time/linalg.hpp"
#include "sbp_time/sbp_operator.hpp"

namespace sbp_time {

namespace detail {

// Left boundary closure in units of h = T/(N-1). The right closure is the
// mirror image with flipped sign. Regenerate with tools/derive_fd_closures.py.
struct Closure {
  int interior_order;
  std::vector<double> norm_weights;     // first r diagonal entries of M / h
  std::vector<double> stencil;          // a_1 .. a_{q/2}; row i reads sum_k a_k (u_{i+k} - u_{i-k})
  std::vector<std::vector<double>> rows;  // r rows of h * D, r + q/2 columns each
};

// q = 6: the one free closure parameter is 342523/518400.
// q = 8: the three free parameters minimise the order 5, then order 6,
// boundary truncation error; the long coefficients are rounded to doubles.
inline const Closure& closure_q2() {
  static const Closure c{
      2,
      {1.0 / 2.0},
      {1.0 / 2.0},
      {
          {-1.0, 1.0},
      }};
  return c;
}

inline const Closure& closure_q4() {
  static const Closure c{
      4,
      {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0},
      {2.0 / 3.0, -1.0 / 12.0},
      {
          {-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0, 0.0, 0.0},
          {-1.0 / 2.0, 0.0, 1.0 / 2.0, 0.0, 0.0, 0.0},
          {4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0, 0.0},
          {3.0 / 98.0, 0.0, -59.0 / 98.0, 0.0, 32.0 / 49.0, -4.0 / 49.0},
      }};
  return c;
}

inline const Closure& closure_q6() {
  static const Closure c{
      6,
      {13649.0 / 43200.0, 12013.0 / 8640.0, 2711.0 / 4320.0, 5359.0 / 4320.0, 7877.0 / 8640.0, 43801.0 / 43200.0},
      {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0},
      {
          {-21600.0 / 13649.0, 104009.0 / 54596.0, 30443.0 / 81894.0, -33311.0 / 27298.0, 16863.0 / 27298.0, -15025.0 / 163788.0, 0.0, 0.0, 0.0},
          {-104009.0 / 240260.0, 0.0, -311.0 / 72078.0, 20229.0 / 24026.0, -24337.0 / 48052.0, 36661.0 / 360390.0, 0.0, 0.0, 0.0},
          {-30443.0 / 162660.0, 311.0 / 32532.0, 0.0, -11155.0 / 16266.0, 41287.0 / 32532.0, -21999.0 / 54220.0, 0.0, 0.0, 0.0},
          {33311.0 / 107180.0, -20229.0 / 21436.0, 485.0 / 1398.0, 0.0, 4147.0 / 21436.0, 25427.0 / 321540.0, 72.0 / 5359.0, 0.0, 0.0},
          {-16863.0 / 78770.0, 24337.0 / 31508.0, -41287.0 / 47262.0, -4147.0 / 15754.0, 0.0, 342523.0 / 472620.0, -1296.0 / 7877.0, 144.0 / 7877.0, 0.0},
          {15025.0 / 525612.0, -36661.0 / 262806.0, 21999.0 / 87602.0, -25427.0 / 262806.0, -342523.0 / 525612.0, 0.0, 32400.0 / 43801.0, -6480.0 / 43801.0, 720.0 / 43801.0},
      }};
  return c;
}

inline const Closure& closure_q8() {
  static const Closure c{
      8,
      {1498139.0 / 5080320.0, 1107307.0 / 725760.0, 20761.0 / 80640.0, 1304999.0 / 725760.0, 299527.0 / 725760.0, 103097.0 / 80640.0, 670091.0 / 725760.0, 5127739.0 / 5080320.0},
      {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0},
      {
          {-2540160.0 / 1498139.0, 2.2539181718711219, -0.058521578014148992, -0.75547186621296603, 0.039432629354034548, 0.29739220436022562, -0.053290742063386506, -0.027915214862981864, 0.0, 0.0, 0.0, 0.0},
          {-0.43563640901353212, 0.0, 0.10444484466728424, 0.47505009213720262, -0.030707833081362313, -0.15426091096779673, 0.027675592389173612, 0.013434623869030719, 0.0, 0.0, 0.0, 0.0},
          {0.067031558993426443, -0.61896241143381292, 0.0, 0.52166494007060171, 0.11315057029059268, -0.092667918650149991, 0.0037779217950073699, 0.0060053389343346694, 0.0, 0.0, 0.0, 0.0},
          {0.12389739829865515, -0.40308559039062053, -0.074691683585391147, 0.0, 0.13888636988005837, 0.27469621780128611, -0.041361373062654451, -0.018341338941333489, 0.0, 0.0, 0.0, 0.0},
          {-0.028175642600225384, 0.11352231526982227, -0.07058485848763868, -0.60510930168935118, 0.0, 0.73401180448179382, -0.18722014709724669, 0.052209474034746892, -2592.0 / 299527.0, 0.0, 0.0, 0.0},
          {-0.068595418869365599, 0.18409220501191231, 0.01866085976406456, -0.38634413280099816, -0.23694660127088327, 0.0, 0.56273694801282403, -0.10060755539640594, 3072.0 / 103097.0, -288.0 / 103097.0, 0.0, 0.0},
          {0.017020489759514496, -0.045733157409484179, -0.0010534403677639784, 0.08055107513067776, 0.083686378416658352, -0.77922016586329779, 0.0, 0.82397223924247043, -145152.0 / 670091.0, 27648.0 / 670091.0, -2592.0 / 670091.0, 0.0},
          {0.0081558113779996964, -0.020307931306139722, -0.0015317942316858347, 0.03267483053246447, -0.02134801125884906, 0.12743574502101326, -0.7537346718238942, 0.0, 4064256.0 / 5127739.0, -1016064.0 / 5127739.0, 193536.0 / 5127739.0, -18144.0 / 5127739.0},
      }};
  return c;
}

inline const Closure& closure_for(int q) {
  switch (q) {
    case 2: return closure_q2();
    case 4: return closure_q4();
    case 6: return closure_q6();
    case 8: return closure_q8();
    default: throw Error(ErrorKind::InvalidArgument, "interior order must be 2, 4, 6 or 8");
  }
}

}  // namespace detail

/// Smallest node count supported for interior order q.
inline int min_fd_nodes(int q) {
  switch (q) {
    case 2: return 3;
    case 4: return 9;
    case 6: return 13;
    case 8: return 17;
    default: throw Error(ErrorKind::InvalidArgument, "interior order must be 2, 4, 6 or 8");
  }
}

inline SbpOperator fd_operator(int interior_order, int N, double T = 1.0) {
  const auto& closure = detail::closure_for(interior_order);
  if (N < min_fd_nodes(interior_order)) {
    throw Error(ErrorKind::TooFewNodes, "interior order " + std::to_string(interior_order) +
                                            " needs at least " +
                                            std::to_string(min_fd_nodes(interior_order)) + " nodes");
  }
  require(T > 0.0 && std::isfinite(T), ErrorKind::InvalidArgument, "T must be positive");

  const Eigen::Index n = N;
  const auto r = static_cast<Eigen::Index>(closure.rows.size());
  const auto half = static_cast<Eigen::Index>(closure.stencil.size());
  const double h = T / (N - 1);

  Matrix D = Matrix::Zero(n, n);
  for (Eigen::Index i = r; i < n - r; ++i) {
    for (Eigen::Index k = 1; k <= half; ++k) {
      const double a = closure.stencil[static_cast<std::size_t>(k - 1)];
      D(i, i + k) += a;
      D(i, i - k) -= a;
    }
  }
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = closure.rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(row.size()); ++j) {
      D(i, j) = row[static_cast<std::size_t>(j)];
      D(n - 1 - i, n - 1 - j) = -row[static_cast<std::size_t>(j)];
    }
  }
  D /= h;

  Vector weights = Vector::Ones(n);
  for (Eigen::Index i = 0; i < r; ++i) {
    weights(i) = closure.norm_weights[static_cast<std::size_t>(i)];
    weights(n - 1 - i) = closure.norm_weights[static_cast<std::size_t>(i)];
  }

  SbpOperator op;
  op.nodes = Vector::LinSpaced(n, 0.0, T);
  op.nodes(n - 1) = T;
  op.D = std::move(D);
  op.M = (h * weights).asDiagonal();
  op.tL = Vector::Zero(n);
  op.tL(0) = 1.0;
  op.tR = Vector::Zero(n);
  op.tR(n - 1) = 1.0;
  op.T = T;
  op.interior_order = interior_order;
  op.boundary_order = interior_order / 2;
  op.norm_kind = NormKind::Diagonal;
  op.boundary_rows = r;
  op.label = "fd q=" + std::to_string(interior_order) + ", N=" + std::to_string(N);
  check_well_formed(op);
  return op;
}

}  // namespace sbp_time
