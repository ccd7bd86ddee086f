#include <cmath>
#include <map>
#include <string>

#include <gtest/gtest.h>

#include "sbp_time/butcher.hpp"
#include "sbp_time/fd_operators.hpp"
#include "sbp_time/order_conditions.hpp"
#include "sbp_time/quadrature.hpp"
#include "test_support.hpp"

using namespace sbp_time;

namespace {

SbpOperator collocation(QuadratureKind kind, int s) { return collocation_operator(build_rule(kind, s, 1.0)); }

}  // namespace

TEST(RootedTrees, CountsPerOrder) {
  const auto forest = rooted_trees(6);
  std::map<int, int> counts;
  for (const auto& t : forest) ++counts[t.order];
  EXPECT_EQ(counts[1], 1);
  EXPECT_EQ(counts[2], 1);
  EXPECT_EQ(counts[3], 2);
  EXPECT_EQ(counts[4], 4);
  EXPECT_EQ(counts[5], 9);
  EXPECT_EQ(counts[6], 20);
  EXPECT_EQ(forest.size(), 37u);
  EXPECT_TRUE(rooted_trees(0).empty());
}

TEST(RootedTrees, HandEnumeratedThroughOrderFour) {
  // notation -> (density, symmetry)
  const std::map<std::string, std::pair<double, double>> expected{
      {"t", {1, 1}},        {"[t]", {2, 1}},       {"[t,t]", {3, 2}},     {"[[t]]", {6, 1}},
      {"[t,t,t]", {4, 6}},  {"[[t],t]", {8, 1}},   {"[[t,t]]", {12, 2}},  {"[[[t]]]", {24, 1}},
  };
  const auto forest = rooted_trees(4);
  ASSERT_EQ(forest.size(), expected.size());
  for (const auto& t : forest) {
    const auto it = expected.find(t.notation);
    ASSERT_NE(it, expected.end()) << t.notation;
    EXPECT_DOUBLE_EQ(t.density, it->second.first) << t.notation;
    EXPECT_DOUBLE_EQ(t.symmetry, it->second.second) << t.notation;
  }
}

TEST(RootedTrees, DensityAndSymmetryIdentity) {
  // alpha(t) = n! / (sigma gamma) counts monotone labellings; they sum to (n-1)!.
  const auto forest = rooted_trees(6);
  std::map<int, double> sum;
  for (const auto& t : forest) {
    double n_fact = 1;
    for (int k = 2; k <= t.order; ++k) n_fact *= k;
    sum[t.order] += n_fact / (t.symmetry * t.density);
  }
  double fact = 1;
  for (int n = 1; n <= 6; ++n) {
    if (n > 1) fact *= (n - 1);
    EXPECT_NEAR(sum[n], fact, 1e-9) << "n=" << n;
  }
}

TEST(OrderReport, RadauLeftProjectionViolatesThirdOrder) {
  const auto report = order_report(projection_tableau(collocation(QuadratureKind::RadauLeft, 2)));
  EXPECT_EQ(report.B_order, 3);
  EXPECT_EQ(report.tree_order, 2);
  const auto* t = report.find_tree("[[t]]");
  ASSERT_NE(t, nullptr);
  EXPECT_NEAR(t->elementary_weight, 0.25, 1e-14);
  EXPECT_NEAR(t->expected, 1.0 / 6, 1e-15);
  EXPECT_NEAR(t->residual, 0.25 - 1.0 / 6, 1e-14);
  const auto* bush = report.find_tree("[t,t]");
  ASSERT_NE(bush, nullptr);
  EXPECT_NEAR(bush->elementary_weight, 1.0 / 3, 1e-14);
}

TEST(OrderReport, LobattoIIIAThreeStages) {
  const auto report = order_report(reference_tableau("LobattoIIIA_3"));
  EXPECT_EQ(report.C_order, 3);
  EXPECT_EQ(report.B_order, 4);
  EXPECT_EQ(report.tree_order, 4);
  EXPECT_GE(report.butcher_bound, 4);
}

TEST(OrderReport, FourthOrderFiniteDifferenceProjection) {
  const auto report = order_report(projection_tableau(fd_operator(4, 9, 1.0)));
  EXPECT_GE(report.tree_order, 4);
  EXPECT_GE(report.B_order, 4);
  EXPECT_GE(report.butcher_bound, 4);
}

TEST(OrderReport, GaussThreeStageProjectionIsFourthOrder) {
  const auto report = order_report(projection_tableau(collocation(QuadratureKind::Gauss, 3)));
  EXPECT_EQ(report.tree_order, 4);
  EXPECT_EQ(report.B_order, 6);
  double worst_order5 = 0.0;
  for (const auto& t : report.tree_conditions) {
    if (t.order == 5) worst_order5 = std::max(worst_order5, t.residual);
  }
  EXPECT_GT(worst_order5, 1e-6);
  RecordProperty("order5_max_residual", std::to_string(worst_order5));
}

TEST(OrderReport, ExplicitEuler) {
  const auto euler = make_tableau(Matrix::Zero(1, 1), Vector::Ones(1), Vector::Zero(1), "explicit Euler");
  const auto report = order_report(euler);
  EXPECT_EQ(report.tree_order, 1);
  EXPECT_EQ(report.B_order, 1);
  // c = 0 and A = 0 satisfy every C(q) trivially.
  EXPECT_EQ(report.C_order, 2);
}

TEST(OrderProperty, DiagonalNormProjectionReachesTwicePUpToSix) {
  // Order at least 2 p_bnd, capped by the tree enumeration depth.
  for (int s = 2; s <= 5; ++s) {
    for (auto kind : {QuadratureKind::Lobatto, QuadratureKind::Gauss}) {
      const auto op = collocation(kind, s);
      const auto report = order_report(projection_tableau(op));
      EXPECT_GE(report.tree_order, std::min(2 * op.boundary_order, kMaxTreeOrder)) << to_string(kind) << s;
      EXPECT_GE(report.butcher_bound, 2 * op.boundary_order);
      EXPECT_GE(report.C_order, op.boundary_order);
      EXPECT_GE(report.D_order, op.boundary_order - 1);
    }
  }
  for (int q : {2, 4, 6, 8}) {
    const auto op = fd_operator(q, min_fd_nodes(q) + 4, 1.0);
    const auto report = order_report(projection_tableau(op));
    EXPECT_GE(report.tree_order, std::min(2 * op.boundary_order, kMaxTreeOrder)) << q;
    const auto dual = order_report(dual_projection_tableau(op));
    EXPECT_GE(dual.tree_order, std::min(2 * op.boundary_order, kMaxTreeOrder)) << q;
  }
}

TEST(OrderProperty, TreeOrderAgreesWithButcherBoundOnClassicalMethods) {
  for (int s = 2; s <= 4; ++s) {
    const auto iiia = order_report(reference_tableau("LobattoIIIA_" + std::to_string(s)));
    EXPECT_EQ(iiia.tree_order, std::min(2 * s - 2, kMaxTreeOrder));
    const auto iiib = order_report(reference_tableau("LobattoIIIB_" + std::to_string(s)));
    EXPECT_EQ(iiib.tree_order, std::min(2 * s - 2, kMaxTreeOrder));
  }
  EXPECT_EQ(order_report(reference_tableau("RadauIIA_2")).tree_order, 3);
  EXPECT_EQ(order_report(reference_tableau("RadauIA_2")).tree_order, 3);
  EXPECT_EQ(order_report(reference_tableau("LobattoIIIC_2")).tree_order, 2);
}
