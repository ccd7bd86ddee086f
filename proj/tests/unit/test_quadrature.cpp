#include <cmath>

#include <gtest/gtest.h>

#include "sbp_time/quadrature.hpp"
#include "test_support.hpp"

using namespace sbp_time;

namespace {

const QuadratureKind kAllKinds[] = {QuadratureKind::Gauss, QuadratureKind::Lobatto, QuadratureKind::RadauLeft,
                                    QuadratureKind::RadauRight};

}  // namespace

TEST(Legendre, SmallDegrees) {
  auto p = legendre_eval(0, 0.3);
  EXPECT_DOUBLE_EQ(p.value, 1.0);
  EXPECT_DOUBLE_EQ(p.derivative, 0.0);
  p = legendre_eval(2, 1.0);
  EXPECT_NEAR(p.value, 1.0, 1e-15);
  EXPECT_NEAR(p.derivative, 3.0, 1e-15);
  p = legendre_eval(3, 0.0);
  EXPECT_NEAR(p.value, 0.0, 1e-15);
  EXPECT_NEAR(p.derivative, -1.5, 1e-15);
  EXPECT_THROW(legendre_eval(-1, 0.0), Error);
}

TEST(Legendre, MatchesClosedFormP4) {
  for (double x = -1.0; x <= 1.0; x += 0.125) {
    const auto p = legendre_eval(4, x);
    EXPECT_NEAR(p.value, (35 * std::pow(x, 4) - 30 * x * x + 3) / 8, 1e-14);
    EXPECT_NEAR(p.derivative, (140 * std::pow(x, 3) - 60 * x) / 8, 1e-13);
  }
}

TEST(BuildRule, LobattoTwoNodes) {
  for (double T : {0.5, 1.0, 2.0}) {
    const auto rule = build_rule(QuadratureKind::Lobatto, 2, T);
    EXPECT_NEAR(rule.nodes(0), 0.0, 1e-15);
    EXPECT_NEAR(rule.nodes(1), T, 1e-15);
    EXPECT_NEAR(rule.weights(0), T / 2, 1e-15);
    EXPECT_NEAR(rule.weights(1), T / 2, 1e-15);
  }
}

TEST(BuildRule, GaussThreeNodes) {
  const double r = std::sqrt(15.0);
  for (double T : {0.5, 1.0, 2.0}) {
    const auto rule = build_rule(QuadratureKind::Gauss, 3, T);
    EXPECT_NEAR(rule.nodes(0), T * (5 - r) / 10, 1e-14);
    EXPECT_NEAR(rule.nodes(1), T / 2, 1e-14);
    EXPECT_NEAR(rule.nodes(2), T * (5 + r) / 10, 1e-14);
    EXPECT_NEAR(rule.weights(0), 5 * T / 18, 1e-14);
    EXPECT_NEAR(rule.weights(1), 8 * T / 18, 1e-14);
    EXPECT_NEAR(rule.weights(2), 5 * T / 18, 1e-14);
  }
}

TEST(BuildRule, RadauLeftTwoNodes) {
  const auto rule = build_rule(QuadratureKind::RadauLeft, 2, 1.0);
  EXPECT_NEAR(rule.nodes(0), 0.0, 1e-15);
  EXPECT_NEAR(rule.nodes(1), 2.0 / 3, 1e-15);
  EXPECT_NEAR(rule.weights(0), 0.25, 1e-15);
  EXPECT_NEAR(rule.weights(1), 0.75, 1e-15);
}

TEST(BuildRule, RejectsBadArguments) {
  EXPECT_THROW(build_rule(QuadratureKind::Lobatto, 1, 1.0), Error);
  EXPECT_THROW(build_rule(QuadratureKind::Gauss, 0, 1.0), Error);
  EXPECT_THROW(build_rule(QuadratureKind::Gauss, 3, 0.0), Error);
  EXPECT_NO_THROW(build_rule(QuadratureKind::Gauss, 1, 1.0));
  EXPECT_NO_THROW(build_rule(QuadratureKind::RadauRight, 1, 1.0));
}

TEST(QuadratureProperty, EndpointsAndOrdering) {
  for (auto kind : kAllKinds) {
    for (int s = 2; s <= 10; ++s) {
      const double T = 1.5;
      const auto rule = build_rule(kind, s, T);
      ASSERT_EQ(rule.size(), s);
      for (int i = 1; i < s; ++i) EXPECT_LT(rule.nodes(i - 1), rule.nodes(i));
      EXPECT_GT(rule.weights.minCoeff(), 0.0);
      const bool has_left = kind == QuadratureKind::Lobatto || kind == QuadratureKind::RadauLeft;
      const bool has_right = kind == QuadratureKind::Lobatto || kind == QuadratureKind::RadauRight;
      EXPECT_EQ(std::abs(rule.nodes(0)) < 1e-14, has_left) << to_string(kind) << " s=" << s;
      EXPECT_EQ(std::abs(rule.nodes(s - 1) - T) < 1e-14, has_right) << to_string(kind) << " s=" << s;
      EXPECT_GE(rule.nodes(0), 0.0);
      EXPECT_LE(rule.nodes(s - 1), T);
    }
  }
}

TEST(QuadratureProperty, PolynomialExactnessUpToDegree) {
  for (auto kind : kAllKinds) {
    for (int s = 2; s <= 10; ++s) {
      for (double T : {0.5, 1.0, 2.0}) {
        const auto rule = build_rule(kind, s, T);
        EXPECT_NEAR(rule.weights.sum(), T, 1e-12 * T);
        for (int k = 0; k <= rule.degree(); ++k) {
          const double exact = std::pow(T, k + 1) / (k + 1);
          const double approx = rule.weights.dot(linalg::pow(rule.nodes, k));
          EXPECT_NEAR(approx, exact, 1e-12 * exact) << to_string(kind) << " s=" << s << " k=" << k;
        }
        // One degree higher must fail, otherwise degree() under-reports. The
        // error constant is tiny for large s, hence the loose threshold.
        const int k = rule.degree() + 1;
        const double exact = std::pow(T, k + 1) / (k + 1);
        EXPECT_GT(std::abs(rule.weights.dot(linalg::pow(rule.nodes, k)) - exact), 1e-13 * exact);
      }
    }
  }
}

TEST(QuadratureProperty, SymmetryAndReflection) {
  const double T = 2.0;
  for (int s = 2; s <= 10; ++s) {
    for (auto kind : {QuadratureKind::Gauss, QuadratureKind::Lobatto}) {
      const auto rule = build_rule(kind, s, T);
      for (int i = 0; i < s; ++i) {
        EXPECT_NEAR(rule.nodes(i) + rule.nodes(s - 1 - i), T, 1e-13);
        EXPECT_NEAR(rule.weights(i), rule.weights(s - 1 - i), 1e-13);
      }
    }
    const auto left = build_rule(QuadratureKind::RadauLeft, s, T);
    const auto right = build_rule(QuadratureKind::RadauRight, s, T);
    for (int i = 0; i < s; ++i) {
      EXPECT_NEAR(right.nodes(i), T - left.nodes(s - 1 - i), 1e-13);
      EXPECT_NEAR(right.weights(i), left.weights(s - 1 - i), 1e-13);
    }
  }
}

TEST(QuadratureProperty, LargeRulesConverge) {
  for (auto kind : kAllKinds) {
    const auto rule = build_rule(kind, 64, 1.0);
    EXPECT_NEAR(rule.weights.sum(), 1.0, 1e-12);
  }
}
