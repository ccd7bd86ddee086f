#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "sbp_time/butcher.hpp"
#include "sbp_time/fd_operators.hpp"
#include "sbp_time/ode_solver.hpp"
#include "sbp_time/quadrature.hpp"
#include "test_support.hpp"

using namespace sbp_time;
using testing_support::matrices_near;
using testing_support::Rng;

namespace {

SbpOperator collocation(QuadratureKind kind, int s) { return collocation_operator(build_rule(kind, s, 1.0)); }

std::vector<ButcherTableau> projection_tableaux() {
  std::vector<ButcherTableau> tabs;
  for (int s = 2; s <= 5; ++s) tabs.push_back(projection_tableau(collocation(QuadratureKind::Lobatto, s)));
  for (int s = 2; s <= 4; ++s) tabs.push_back(projection_tableau(collocation(QuadratureKind::Gauss, s)));
  tabs.push_back(projection_tableau(collocation(QuadratureKind::RadauLeft, 3)));
  tabs.push_back(projection_tableau(collocation(QuadratureKind::RadauRight, 3)));
  for (int q : {2, 4}) {
    for (int N : {9, 17}) tabs.push_back(projection_tableau(fd_operator(q, N, 1.0)));
  }
  tabs.push_back(projection_tableau(fd_operator(2, 3, 1.0)));
  tabs.push_back(projection_tableau(fd_operator(6, 13, 1.0)));
  tabs.push_back(projection_tableau(fd_operator(8, 17, 1.0)));
  return tabs;
}

/// u' = L u + g(t) with a random Hurwitz-ish L and smooth forcing.
OdeProblem random_linear_problem(Rng& rng, Eigen::Index d) {
  const Matrix L = rng.matrix(d, d) - 2.0 * Matrix::Identity(d, d);
  const Vector w = rng.vector(d);
  OdeProblem p;
  p.name = "random linear";
  p.dimension = d;
  p.linear_affine = LinearAffine{L, [w](double t) -> Vector { return std::cos(3 * t) * w; }};
  p.rhs = [L, w](double t, const Vector& u) -> Vector { return L * u + std::cos(3 * t) * w; };
  p.jacobian = [L](double, const Vector&) -> Matrix { return L; };
  p.u0 = rng.vector(d);
  return p;
}

/// u' = -u^2, u(0) = 1, exact 1 / (1 + t); no Jacobian supplied.
OdeProblem riccati_problem() {
  OdeProblem p;
  p.name = "riccati";
  p.rhs = [](double, const Vector& u) -> Vector { return -u.cwiseProduct(u); };
  p.exact = [](double t) -> Vector { return Vector::Constant(1, 1.0 / (1.0 + t)); };
  p.u0 = Vector::Ones(1);
  p.t_end = 1.0;
  return p;
}

}  // namespace

TEST(LinearStep, ZeroRightHandSide) {
  for (const auto& tab : projection_tableaux()) {
    const auto step = step_linear_affine<double>(tab, 0.0, 2.5, 0.7);
    EXPECT_DOUBLE_EQ(step.u_plus(0), 2.5);
  }
}

TEST(LinearStep, TrapezoidalValue) {
  const auto tab = reference_tableau("LobattoIIIA_2");
  const auto step = step_linear_affine<double>(tab, -1.0, 1.0, 1.0);
  EXPECT_NEAR(step.u_plus(0), 1.0 / 3, 1e-15);
}

TEST(LinearStep, ImaginaryAxisDoesNotGrow) {
  for (const auto& tab : projection_tableaux()) {
    const auto step = step_linear_affine<Complex>(tab, Complex(0, 1e3), Complex(1, 0), 1.0);
    EXPECT_LE(std::abs(step.u_plus(0)), 1.0 + 1e-10) << tab.provenance;
  }
}

TEST(LinearStep, MatchesStabilityFunction) {
  Rng rng(21);
  for (const auto& tab : projection_tableaux()) {
    for (int k = 0; k < 5; ++k) {
      const Complex z = rng.left_half_plane(50.0);
      const auto step = step_linear_affine<Complex>(tab, z, Complex(1, 0), 1.0);
      EXPECT_NEAR(std::abs(step.u_plus(0) - stability_function(tab, z)), 0.0, 1e-10) << tab.provenance;
    }
  }
}

TEST(LinearStep, SystemAgreesWithComplexScalarForm) {
  // u' = [[0, w], [-w, 0]] u is the real form of v' = -i w v with v = u1 + i u2.
  const double w = 3.0;
  Matrix L(2, 2);
  L << 0, w, -w, 0;
  const auto tab = projection_tableau(fd_operator(4, 9, 1.0));
  const auto sys = step_linear_affine<double>(tab, L, Matrix::Zero(9, 2), Vector{{1.0, 0.5}}, 0.3);
  const auto scalar = step_linear_affine<Complex>(tab, Complex(0, -w), Complex(1.0, 0.5), 0.3);
  EXPECT_NEAR(sys.u_plus(0), scalar.u_plus(0).real(), 1e-13);
  EXPECT_NEAR(sys.u_plus(1), scalar.u_plus(0).imag(), 1e-13);
}

TEST(LinearStep, SingularStageSystem) {
  const auto euler = make_tableau(Matrix::Ones(1, 1), Vector::Ones(1), Vector::Ones(1), "implicit Euler");
  try {
    step_linear_affine<double>(euler, 1.0, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularStageSystem);
  }
}

TEST(LinearStep, ConstantForcingIsIntegratedExactly) {
  // u' = 1 gives u(t) = u0 + t for any consistent tableau.
  OdeProblem p;
  p.name = "constant forcing";
  p.rhs = [](double, const Vector&) -> Vector { return Vector::Ones(1); };
  p.linear_affine = LinearAffine{Matrix::Zero(1, 1), [](double) -> Vector { return Vector::Ones(1); }};
  p.exact = [](double t) -> Vector { return Vector::Constant(1, 2.0 + t); };
  p.u0 = Vector::Constant(1, 2.0);
  p.t_end = 1.5;
  for (const auto& tab : projection_tableaux()) {
    const auto values = march(tab, p, 1);
    EXPECT_NEAR(values.back()(0), 3.5, 1e-13) << tab.provenance;
  }
}

TEST(Newton, ZeroRightHandSideNeedsNoIterations) {
  OdeProblem p;
  p.rhs = [](double, const Vector& u) -> Vector { return Vector::Zero(u.size()); };
  p.u0 = Vector::Constant(1, 4.0);
  const auto tab = reference_tableau("LobattoIIIA_3");
  const auto step = step_newton(tab, p, p.u0, 0.0, 0.5);
  EXPECT_EQ(step.newton_iters, 0);
  EXPECT_TRUE(step.converged);
  for (const auto& stage : step.stages) EXPECT_EQ(stage(0), 4.0);
  EXPECT_EQ(step.u_plus(0), 4.0);
}

TEST(Newton, LinearProblemConvergesInOneIteration) {
  const auto prob = nonstiff_problem();
  const auto tab = reference_tableau("LobattoIIIA_2");
  const auto step = step_newton(tab, prob, prob.u0, 0.0, 1.0);
  EXPECT_EQ(step.newton_iters, 1);
  EXPECT_NEAR(step.u_plus(0), 1.0 / 3, 1e-14);
}

TEST(Newton, StiffProblemConvergesQuickly) {
  const auto prob = stiff_problem(1000.0);
  const auto tab = projection_tableau(fd_operator(4, 9, 1.0));
  const auto step = step_newton(tab, prob, prob.u0, 0.0, 1.0);
  EXPECT_TRUE(step.converged);
  EXPECT_LE(step.newton_iters, 2);
}

TEST(Newton, DivergenceIsReported) {
  const auto prob = riccati_problem();
  NewtonOptions options;
  options.max_iters = 1;
  try {
    step_newton(reference_tableau("LobattoIIIA_3"), prob, prob.u0, 0.0, 1.0, options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NewtonDiverged);
  }
}

TEST(Newton, FiniteDifferenceJacobian) {
  const auto prob = riccati_problem();
  const Vector u = Vector::Constant(1, 0.7);
  EXPECT_NEAR(finite_difference_jacobian(prob, 0.0, u)(0, 0), -1.4, 1e-8);
}

TEST(Newton, NonlinearProblemConverges) {
  const auto prob = riccati_problem();
  const auto tab = projection_tableau(collocation(QuadratureKind::Lobatto, 3));
  std::vector<int> blocks{2, 4, 8, 16};
  const auto report = convergence_by_blocks(tab, prob, blocks);
  EXPECT_NEAR(report.fitted_slope, 4.0, 0.3);
}

TEST(SolverProperty, EnergyDecayForProjectionSchemes) {
  Rng rng(22);
  for (const auto& tab : projection_tableaux()) {
    for (int k = 0; k < 200; ++k) {
      const Complex lambda = rng.left_half_plane(1e4);
      const auto step = step_linear_affine<Complex>(tab, lambda, Complex(1, 0), 1.0);
      EXPECT_LE(std::abs(step.u_plus(0)), 1.0 + 1e-10) << tab.provenance << " lambda=" << lambda;
    }
  }
}

TEST(SolverProperty, NewtonAndLinearPathsAgree) {
  Rng rng(23);
  for (const auto& tab : projection_tableaux()) {
    for (Eigen::Index d : {1, 3}) {
      const auto prob = random_linear_problem(rng, d);
      const double t0 = rng.uniform(0.0, 1.0), h = rng.uniform(0.05, 0.5);
      const auto linear = step_linear_affine(tab, prob, prob.u0, t0, h);
      const auto newton = step_newton(tab, prob, prob.u0, t0, h);
      EXPECT_LE(linalg::max_abs(linear.u_plus - newton.u_plus), 1e-10) << tab.provenance;
    }
    const auto stiff = stiff_problem();
    const auto a = step_linear_affine(tab, stiff, stiff.u0, 0.0, 0.1);
    const auto b = step_newton(tab, stiff, stiff.u0, 0.0, 0.1);
    EXPECT_LE(linalg::max_abs(a.u_plus - b.u_plus), 1e-10) << tab.provenance;
  }
}

TEST(SolverProperty, FirstStageIsInitialValue) {
  Rng rng(24);
  std::vector<ButcherTableau> tabs;
  for (int s = 2; s <= 5; ++s) tabs.push_back(projection_tableau(collocation(QuadratureKind::Lobatto, s)));
  for (int q : {2, 4, 6, 8}) tabs.push_back(projection_tableau(fd_operator(q, min_fd_nodes(q) + 1, 1.0)));
  for (const auto& tab : tabs) {
    const auto prob = random_linear_problem(rng, 2);
    const auto step = step_linear_affine(tab, prob, prob.u0, 0.0, 0.3);
    EXPECT_LE(linalg::max_abs(step.stages.front() - prob.u0), 1e-14) << tab.provenance;
    const auto stiff = stiff_problem();
    const auto stiff_step = step_linear_affine(tab, stiff, stiff.u0, 0.0, 1.0);
    EXPECT_LE(linalg::max_abs(stiff_step.stages.front() - stiff.u0), 1e-14) << tab.provenance;
  }
}

TEST(SolverProperty, BlockCompositionIsAssociative) {
  Rng rng(25);
  const auto prob = stiff_problem(-50.0);
  for (const auto& tab : projection_tableaux()) {
    const int K = rng.integer(1, 5), K2 = rng.integer(1, 5);
    const double h = prob.t_end / (K + K2);
    const auto whole = march(tab, prob, prob.u0, 0.0, prob.t_end, K + K2);
    const auto first = march(tab, prob, prob.u0, 0.0, K * h, K);
    const auto second = march(tab, prob, first.back(), K * h, prob.t_end, K2);
    EXPECT_LE(linalg::max_abs(second.back() - whole.back()), 1e-12) << tab.provenance;
    ASSERT_EQ(whole.size(), static_cast<std::size_t>(K + K2 + 1));
    for (int k = 0; k <= K; ++k) EXPECT_LE(linalg::max_abs(first[k] - whole[k]), 1e-12);
  }
}

TEST(March, SingleBlockIsOneStep) {
  const auto prob = stiff_problem();
  const auto tab = projection_tableau(fd_operator(4, 9, 1.0));
  const auto values = march(tab, prob, 1);
  ASSERT_EQ(values.size(), 2u);
  EXPECT_EQ(values[1](0), step_linear_affine(tab, prob, prob.u0, 0.0, 1.0).u_plus(0));
  EXPECT_THROW(march(tab, prob, 0), Error);
}

TEST(Problems, Validation) {
  auto p = nonstiff_problem();
  p.u0 = Vector::Constant(1, 2.0);
  EXPECT_THROW(check_problem(p), Error);
  p = nonstiff_problem();
  p.u0 = Vector::Ones(2);
  EXPECT_THROW(check_problem(p), Error);
  EXPECT_NO_THROW(check_problem(stiff_problem(10.0)));
}

TEST(Convergence, TrapezoidalBlocks) {
  const std::vector<int> blocks{1, 2, 4, 8, 16};
  const auto report = convergence_by_blocks(reference_tableau("LobattoIIIA_2"), nonstiff_problem(), blocks);
  ASSERT_EQ(report.eoc.size(), report.errors.size() - 1);
  EXPECT_NEAR(report.eoc.back(), 2.0, 0.05);
  EXPECT_NEAR(report.fitted_slope, 2.0, 0.1);
}

TEST(Convergence, FourthOrderFdBlocks) {
  const auto tab = projection_tableau(fd_operator(4, 9, 1.0));
  const std::vector<int> blocks{1, 2, 4, 8, 16};
  const auto nonstiff = convergence_by_blocks(tab, nonstiff_problem(), blocks);
  EXPECT_NEAR(nonstiff.eoc.back(), 4.0, 0.3);
}

TEST(Convergence, FourthOrderFdBlocksStiff) {
  const auto tab = projection_tableau(fd_operator(4, 9, 1.0));
  const std::vector<int> blocks{1, 2, 4, 8, 16};
  const auto stiff = convergence_by_blocks(tab, stiff_problem(), blocks);
  EXPECT_NEAR(stiff.eoc.back(), 2.0, 0.5);
}

TEST(Convergence, NodeSweeps) {
  const std::vector<int> nodes{9, 13, 17, 25, 33};
  auto family = [](int q) { return [q](int N) { return projection_tableau(fd_operator(q, N, 1.0)); }; };
  const auto q2 = convergence_by_nodes(family(2), nonstiff_problem(), nodes);
  EXPECT_NEAR(q2.fitted_slope, 2.0, 0.3);
  const auto q4 = convergence_by_nodes(family(4), nonstiff_problem(), nodes);
  EXPECT_NEAR(q4.fitted_slope, 4.0, 0.3);
  const auto stiff = convergence_by_nodes(family(4), stiff_problem(), nodes);
  EXPECT_NEAR(stiff.fitted_slope, 2.0, 0.5);
  const std::vector<int> fifty{50};
  const auto q8 = convergence_by_nodes(family(8), nonstiff_problem(), fifty);
  EXPECT_LE(q8.errors.front(), 1e-13);
  EXPECT_TRUE(q8.eoc.empty());
}
