#pragma once

// Legendre polynomials and Gauss / Lobatto / Radau quadrature on [0, T].

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "sbp_time/errors.hpp"
#include "sbp_time/linalg.hpp"

namespace sbp_time {

enum class QuadratureKind { Gauss, Lobatto, RadauLeft, RadauRight };

inline const char* to_string(QuadratureKind kind) {
  switch (kind) {
    case QuadratureKind::Gauss: return "gauss";
    case QuadratureKind::Lobatto: return "lobatto";
    case QuadratureKind::RadauLeft: return "radau-left";
    case QuadratureKind::RadauRight: return "radau-right";
  }
  return "?";
}

struct QuadratureRule {
  Vector nodes;
  Vector weights;
  QuadratureKind kind = QuadratureKind::Gauss;
  double T = 1.0;

  Eigen::Index size() const { return nodes.size(); }

  /// Highest polynomial degree integrated exactly.
  int degree() const {
    const auto s = static_cast<int>(nodes.size());
    switch (kind) {
      case QuadratureKind::Gauss: return 2 * s - 1;
      case QuadratureKind::Lobatto: return 2 * s - 3;
      case QuadratureKind::RadauLeft:
      case QuadratureKind::RadauRight: return 2 * s - 2;
    }
    return 0;
  }
};

struct LegendreValue {
  double value;
  double derivative;
};

/// P_n(x) and P_n'(x) by the three-term recurrence.
inline LegendreValue legendre_eval(int n, double x) {
  require(n >= 0, ErrorKind::InvalidArgument, "Legendre degree must be non-negative");
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0, p = x;
  double dp_prev = 0.0, dp = 1.0;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    // P'_{k+1} = P'_{k-1} + (2k+1) P_k avoids the 1/(1-x^2) singularity at the ends.
    const double dp_next = dp_prev + (2.0 * k + 1.0) * p;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  return {p, dp};
}

namespace detail {

inline constexpr int kMaxNewtonIterations = 100;
inline constexpr double kNodeTolerance = 1e-14;

/// Newton iteration with deflation of the already converged roots, so that
/// neighbouring guesses cannot collapse onto the same root.
template <class Poly>
std::vector<double> polynomial_roots(Poly&& poly, std::vector<double> guesses,
                                     std::vector<double> fixed_roots = {}) {
  std::vector<double> roots;
  for (double x : guesses) {
    bool converged = false;
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
      const auto [f, df] = poly(x);
      double deflation = 0.0;
      for (double r : roots) deflation += 1.0 / (x - r);
      for (double r : fixed_roots) deflation += 1.0 / (x - r);
      const double step = f / (df - f * deflation);
      x -= step;
      if (std::abs(step) <= kNodeTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged || !std::isfinite(x)) {
      throw Error(ErrorKind::ConvergenceFailure, "Newton iteration for quadrature nodes");
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline QuadratureRule reference_to_interval(std::vector<double> x, std::vector<double> w,
                                            QuadratureKind kind, double T) {
  QuadratureRule rule;
  rule.kind = kind;
  rule.T = T;
  rule.nodes.resize(static_cast<Eigen::Index>(x.size()));
  rule.weights.resize(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes(static_cast<Eigen::Index>(i)) = 0.5 * T * (x[i] + 1.0);
    rule.weights(static_cast<Eigen::Index>(i)) = 0.5 * T * w[i];
  }
  return rule;
}

}  // namespace detail

inline QuadratureRule build_rule(QuadratureKind kind, int s, double T = 1.0) {
  require(T > 0.0 && std::isfinite(T), ErrorKind::InvalidArgument, "interval length must be positive");
  require(s >= (kind == QuadratureKind::Lobatto ? 2 : 1), ErrorKind::InvalidArgument,
          "too few quadrature nodes");
  constexpr double pi = std::numbers::pi;
  std::vector<double> x, w;

  switch (kind) {
    case QuadratureKind::Gauss: {
      std::vector<double> guesses;
      for (int i = 1; i <= s; ++i) guesses.push_back(-std::cos(pi * (i - 0.25) / (s + 0.5)));
      x = detail::polynomial_roots(
          [s](double t) {
            const auto p = legendre_eval(s, t);
            return std::pair{p.value, p.derivative};
          },
          guesses);
      for (double xi : x) {
        const double dp = legendre_eval(s, xi).derivative;
        w.push_back(2.0 / ((1.0 - xi * xi) * dp * dp));
      }
      break;
    }
    case QuadratureKind::Lobatto: {
      // Interior nodes are the roots of P'_{s-1}; P''_{s-1} follows from
      // Legendre's equation (1 - x^2) P'' = 2x P' - n(n+1) P.
      const int n = s - 1;
      std::vector<double> guesses;
      for (int i = 1; i < n; ++i) guesses.push_back(-std::cos(pi * i / n));
      auto interior = detail::polynomial_roots(
          [n](double t) {
            const auto p = legendre_eval(n, t);
            const double d2 = (2.0 * t * p.derivative - n * (n + 1.0) * p.value) / (1.0 - t * t);
            return std::pair{p.derivative, d2};
          },
          guesses, {-1.0, 1.0});
      x.push_back(-1.0);
      x.insert(x.end(), interior.begin(), interior.end());
      x.push_back(1.0);
      for (double xi : x) {
        const double p = legendre_eval(n, xi).value;
        w.push_back(2.0 / (n * (n + 1.0) * p * p));
      }
      break;
    }
    case QuadratureKind::RadauLeft:
    case QuadratureKind::RadauRight: {
      // Left Radau: x = -1 plus the roots of (P_{s-1} + P_s) / (1 + x).
      std::vector<double> guesses;
      for (int i = 1; i < s; ++i) guesses.push_back(-std::cos(2.0 * pi * i / (2.0 * s - 1.0)));
      auto free_nodes = detail::polynomial_roots(
          [s](double t) {
            const auto a = legendre_eval(s - 1, t);
            const auto b = legendre_eval(s, t);
            return std::pair{a.value + b.value, a.derivative + b.derivative};
          },
          guesses, {-1.0});
      x.push_back(-1.0);
      x.insert(x.end(), free_nodes.begin(), free_nodes.end());
      w.push_back(2.0 / (static_cast<double>(s) * s));
      for (std::size_t i = 1; i < x.size(); ++i) {
        const double p = legendre_eval(s - 1, x[i]).value;
        w.push_back((1.0 - x[i]) / (static_cast<double>(s) * s * p * p));
      }
      if (kind == QuadratureKind::RadauRight) {
        std::reverse(x.begin(), x.end());
        std::reverse(w.begin(), w.end());
        for (double& xi : x) xi = -xi;
      }
      break;
    }
  }
  return detail::reference_to_interval(std::move(x), std::move(w), kind, T);
}

}  // namespace sbp_time
