#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "lpround/oracle.hpp"

using namespace lpround;
using lpround::test::covering_rows;

namespace {

ConditionEstimate user_estimate(double c, double d, double dp, double dd) {
  ConditionEstimate e;
  e.c_star = c;
  e.d_norm = d;
  e.delta_p_lb = dp;
  e.delta_d_lb = dd;
  return e;
}

}  // namespace

TEST(VcCondition, TriangleHandValues) {
  const auto e = estimate_vc_condition(test::triangle());
  EXPECT_DOUBLE_EQ(e.d_norm, 3.0);
  EXPECT_NEAR(e.delta_p_lb, 1.0 / (12.0 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(e.delta_p_lb, 0.04811, 1e-5);
  EXPECT_NEAR(e.delta_d_lb, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(e.c_star, std::sqrt(3.0), 1e-15);
  EXPECT_EQ(e.source, ConditionSource::vc_closed_form);
}

TEST(VcCondition, SingleEdge) {
  const auto e = estimate_vc_condition(Graph(2, {{0, 1, 1.0}}));
  EXPECT_DOUBLE_EQ(e.d_norm, 2.0);
  EXPECT_NEAR(e.delta_p_lb, 1.0 / (8.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_DOUBLE_EQ(e.delta_d_lb, 0.5);
}

TEST(VcCondition, MoreEdgesShrinkBounds) {
  const auto sparse = estimate_vc_condition(gen::random_graph(20, 30, 1));
  const auto dense = estimate_vc_condition(gen::random_graph(20, 60, 1));
  EXPECT_LT(dense.delta_p_lb, sparse.delta_p_lb);
  EXPECT_LT(dense.delta_d_lb, sparse.delta_d_lb);
}

TEST(VcCondition, EmptyGraphRejected) {
  EXPECT_THROW(estimate_vc_condition(Graph(3, {})), PreconditionError);
  EXPECT_THROW(estimate_vc_condition(Graph(0, {})), PreconditionError);
}

TEST(CoveringCondition, TwoThirdsPointOnVertexCover) {
  const auto g = test::triangle();
  const auto cp = vertex_cover_program(g);
  EXPECT_DOUBLE_EQ(cp.d_norm(), 3.0);
  const auto e = estimate_covering_condition(cp, std::vector<double>(3, 2.0 / 3.0));
  EXPECT_NEAR(cp.slack(std::vector<double>(3, 2.0 / 3.0)), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(e.delta_p_lb, (1.0 / 3.0) / (2.0 * std::sqrt(3.0) * 3.0), 1e-15);
  // Half the closed-form constant would need slack 1/2; 1/3 gives 2/3 of it.
  EXPECT_NEAR(e.delta_p_lb / estimate_vc_condition(g).delta_p_lb, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(e.delta_d_lb, 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(e.c_star_heuristic);
  EXPECT_NEAR(e.c_star, std::sqrt(3.0), 1e-15);
}

TEST(CoveringCondition, DiagonalSearchFindsTwoThirds) {
  const auto cp = vertex_cover_program(test::triangle());
  const auto x = diagonal_slack_point(cp);
  EXPECT_NEAR(x[0], 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(cp.slack(x), 1.0 / 3.0, 1e-9);
}

TEST(CoveringCondition, UnitCostsGiveInverseNorm) {
  const auto cp = vertex_cover_program(gen::random_graph(10, 20, 3));
  const auto e = estimate_covering_condition(cp);
  EXPECT_DOUBLE_EQ(e.delta_d_lb, 1.0 / cp.d_norm());
}

TEST(CoveringCondition, ScalingInvariance) {
  const auto cp = vertex_cover_program(gen::random_graph(12, 25, 5));
  auto trip = cp.a.triplets();
  for (auto& t : trip) t.value *= 2.0;
  CoveringProgram scaled{SparseMatrix(cp.a.rows(), cp.a.cols(), std::move(trip)), cp.b, cp.c, 2.0 * cp.box_scale};
  for (auto& v : scaled.b) v *= 2.0;
  for (auto& v : scaled.c) v *= 2.0;
  const auto x = diagonal_slack_point(cp);
  const auto e1 = estimate_covering_condition(cp, x);
  const auto e2 = estimate_covering_condition(scaled, x);
  EXPECT_NEAR(e2.d_norm, 2.0 * e1.d_norm, 1e-12 * e1.d_norm);
  EXPECT_NEAR(e2.delta_p_lb, e1.delta_p_lb, 1e-14);
  EXPECT_NEAR(e2.delta_d_lb, e1.delta_d_lb, 1e-14);
}

TEST(CoveringCondition, NoSlackRejected) {
  // Element 1 lies in a single set, so x must reach the box.
  const SetSystem ss(2, {{{0, 1}, {}, 1.0}, {{0}, {}, 1.0}});
  EXPECT_THROW(estimate_covering_condition(set_cover_program(ss)), PreconditionError);
  const auto cp = vertex_cover_program(test::triangle());
  EXPECT_THROW(estimate_covering_condition(cp, std::vector<double>(3, 0.5)), PreconditionError);
  EXPECT_THROW(estimate_covering_condition(cp, std::vector<double>(2, 0.7)), DimensionError);
}

TEST(ChooseBeta, HandExample) {
  const auto bc = choose_beta(user_estimate(1.0, 10.0, 0.1, 0.1), 1.0, 1.0, 1.0, 0.0);
  EXPECT_NEAR(bc.bounds[0], 10.0, 1e-12);
  EXPECT_NEAR(bc.bounds[1], 2506.0, 1e-9);
  EXPECT_NEAR(bc.bounds[2], 1250.0 + 1.0 + std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(bc.bounds[2], 1252.4, 0.05);
  EXPECT_DOUBLE_EQ(bc.beta, bc.bounds[1]);
  EXPECT_EQ(bc.binding, BetaBound::objective);
  EXPECT_NEAR(bc.c20, 125.0, 1e-9);
  EXPECT_NEAR(bc.eps_bar, 125.0 * 125.0 / std::pow(2506.0, 3), 1e-15);
}

TEST(ChooseBeta, InfiniteToleranceLeavesConditionBound) {
  const auto bc = choose_beta(user_estimate(1.0, 10.0, 0.1, 0.1), kInf, kInf, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(bc.beta, 10.0);
  EXPECT_EQ(bc.binding, BetaBound::condition);
  const auto no_delta = choose_beta(user_estimate(1.0, 10.0, 0.1, 0.1), kInf, std::nullopt, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(no_delta.beta, 10.0);
}

TEST(ChooseBeta, HalvingEpsDoublesFeasibilityBound) {
  const auto est = user_estimate(2.0, 7.0, 0.03, 0.2);
  const auto a = choose_beta(est, 0.2, 0.1, 3.0, 1.0);
  const auto b = choose_beta(est, 0.1, 0.1, 3.0, 1.0);
  EXPECT_DOUBLE_EQ(b.bounds[2], 2.0 * a.bounds[2]);
}

TEST(ChooseBeta, Monotonicity) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double c = 0.1 + 5 * uniform_unit(rng), d = 1 + 20 * uniform_unit(rng);
    const double dp = 0.01 + 0.5 * uniform_unit(rng), dd = 0.01 + 0.5 * uniform_unit(rng);
    const double eps = 0.01 + uniform_unit(rng), delta = 0.01 + uniform_unit(rng);
    const double mag = 0.5 + uniform_unit(rng), xb = 2 * uniform_unit(rng);
    const double base = choose_beta(user_estimate(c, d, dp, dd), eps, delta, mag, xb).beta;
    EXPECT_LE(choose_beta(user_estimate(c, d, dp, dd), 1.5 * eps, delta, mag, xb).beta, base);
    EXPECT_LE(choose_beta(user_estimate(c, d, dp, dd), eps, 1.5 * delta, mag, xb).beta, base);
    EXPECT_LE(choose_beta(user_estimate(c, d, 1.5 * dp, dd), eps, delta, mag, xb).beta, base);
    EXPECT_LE(choose_beta(user_estimate(c, d, dp, 1.5 * dd), eps, delta, mag, xb).beta, base);
    EXPECT_GE(choose_beta(user_estimate(1.5 * c, d, dp, dd), eps, delta, mag, xb).beta, base);
  }
}

TEST(ChooseBeta, AllBoundsRespected) {
  const auto bc = choose_beta(estimate_vc_condition(gen::random_graph(30, 80, 4)), 0.1, 0.05, 5.0, 1.0);
  for (double b : bc.bounds) EXPECT_GE(bc.beta, b);
}

TEST(ChooseBeta, Errors) {
  const auto est = user_estimate(1.0, 10.0, 0.1, 0.1);
  EXPECT_THROW(choose_beta(est, 0.1, 0.1, 0.0, 0.0), PreconditionError);
  EXPECT_THROW(choose_beta(est, 0.0, 0.1, 1.0, 0.0), PreconditionError);
  EXPECT_THROW(choose_beta(est, 0.1, -1.0, 1.0, 0.0), PreconditionError);
  EXPECT_THROW(choose_beta(user_estimate(0.0, 10.0, 0.1, 0.1), 0.1, 0.1, 1.0, 0.0), PreconditionError);
  EXPECT_THROW(choose_beta(user_estimate(1.0, 10.0, 0.0, 0.1), 0.1, 0.1, 1.0, 0.0), PreconditionError);
  EXPECT_NO_THROW(choose_beta(est, 0.1, std::nullopt, 0.0, 0.0));
}

TEST(Perturbation, FixedPointAnchors) {
  const auto lp = test::edge_lp();
  const auto ref = oracle::enumerate_lp(lp);
  const auto est = user_estimate(1.0, 2.0, 0.2, 0.5);
  const PenaltyProblem p(lp, 5.0, ref.u, ref.x);
  const auto xb = oracle::solve_penalty(p).x;
  const auto rep = verify_perturbation_bounds(lp, 5.0, xb, ref.x, ref.u, ref.x, ref.u, est);
  EXPECT_EQ(rep.c_star, 0.0);
  EXPECT_NEAR(rep.distance_to_x_star, 0.0, 1e-12);
  EXPECT_NEAR(rep.residual.measured, 0.0, 1e-12);
  ASSERT_TRUE(rep.objective.has_value());
  EXPECT_TRUE(rep.pass);
}

TEST(Perturbation, RandomCoveringLpsWithChosenBeta) {
  int passed = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t m = 5, n = 7;
    const auto lp = gen::random_covering_lp(m, n, 0.4, 100 + seed);
    const auto ref = oracle::enumerate_lp(lp);
    const std::vector<double> x_bar(lp.cols(), 0.0), u_bar(m, 0.0);
    auto est = estimate_covering_condition(covering_rows(lp, n));
    est.c_star = anchor_distance(ref.x, ref.u, x_bar, u_bar);
    const auto bc = choose_beta(est, 0.1, 0.05, std::abs(ref.objective), 0.0);
    const PenaltyProblem p(lp, bc.beta, u_bar, x_bar);
    const auto xb = oracle::solve_penalty(p).x;
    const auto rep = verify_perturbation_bounds(lp, bc.beta, xb, x_bar, u_bar, ref.x, ref.u, est);
    ASSERT_TRUE(rep.objective.has_value());
    EXPECT_TRUE(rep.pass) << "seed " << seed << " residual " << rep.residual.slack << " anchor "
                          << rep.anchor.slack << " objective " << rep.objective->slack;
    passed += rep.pass;
  }
  EXPECT_EQ(passed, 20);
}

TEST(Perturbation, ResidualBoundsNeedNoBetaCondition) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto lp = gen::random_covering_lp(4, 6, 0.5, 300 + seed);
    const auto ref = oracle::enumerate_lp(lp);
    Rng rng(seed);
    const auto x_bar = test::random_vector(rng, lp.cols(), 0.0, 1.0);
    const auto u_bar = test::random_vector(rng, lp.rows(), -1.0, 1.0);
    for (double beta : {0.05, 0.5, 2.0}) {
      const auto xb = oracle::solve_penalty(PenaltyProblem(lp, beta, u_bar, x_bar)).x;
      const auto rep = verify_perturbation_bounds(lp, beta, xb, x_bar, u_bar, ref.x, ref.u);
      EXPECT_FALSE(rep.objective.has_value());
      EXPECT_TRUE(rep.residual.holds) << seed << " beta " << beta;
      EXPECT_TRUE(rep.residual_sharp.holds) << seed << " beta " << beta;
      EXPECT_TRUE(rep.anchor.holds) << seed << " beta " << beta;
      EXPECT_TRUE(rep.anchor_sharp.holds) << seed << " beta " << beta;
    }
  }
}

TEST(Perturbation, Errors) {
  const auto lp = test::edge_lp();
  const std::vector<double> x{0.5, 0.5}, u{0.0}, none;
  EXPECT_THROW(verify_perturbation_bounds(lp, 1.0, x, x, u, none, u), PreconditionError);
  EXPECT_THROW(verify_perturbation_bounds(lp, 0.0, x, x, u, x, u), PreconditionError);
  EXPECT_THROW(verify_perturbation_bounds(lp, 1.0, x, x, none, x, u), DimensionError);
}

TEST(ScdStepBound, StepFormula) {
  // inner = 2 / (2 * 0.1 * 1e-3) * (4 + 2 * 1 / 2) = 5e4
  EXPECT_EQ(scd_step_bound(10, 1.0, 2.0, 0.1, 1e-3, 4.0, 1.0), std::ceil(30.0 * std::log(5e4)));
  EXPECT_EQ(scd_step_bound(10, 1.0, 2.0, 0.1, 1e-3, 4.0, 1.0), 325.0);
  EXPECT_GT(scd_step_bound(10, 1.0, 2.0, 0.05, 1e-3, 4.0, 1.0), scd_step_bound(10, 1.0, 2.0, 0.1, 1e-3, 4.0, 1.0));
  EXPECT_THROW(scd_step_bound(10, 0.0, 2.0, 0.1, 1e-3, 4.0, 1.0), PreconditionError);
  EXPECT_THROW(scd_step_bound(10, 1.0, 2.0, 1.0, 1e-3, 4.0, 1.0), PreconditionError);
  EXPECT_THROW(scd_step_bound(10, 1.0, 2.0, 0.1, 0.0, 4.0, 1.0), PreconditionError);
}
