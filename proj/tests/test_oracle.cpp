#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "lpround/oracle.hpp"

using namespace lpround;

namespace {

// Subset search by bitmask; independent of the branching solvers.
template <class Feasible, class Cost>
double brute_force(std::size_t count, Feasible feasible, Cost cost, bool maximize) {
  double best = maximize ? -kInf : kInf;
  for (std::uint32_t mask = 0; mask < (1u << count); ++mask) {
    if (!feasible(mask)) continue;
    const double c = cost(mask);
    best = maximize ? std::max(best, c) : std::min(best, c);
  }
  return best;
}

double mask_cost(std::uint32_t mask, const std::vector<double>& costs) {
  double s = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (mask >> i & 1u) s += costs[i];
  }
  return s;
}

}  // namespace

TEST(ExactLp, TriangleVertexCover) {
  const auto enc = encode_vertex_cover(test::triangle());
  const auto sol = oracle::exact_lp(enc.lp);
  EXPECT_TRUE(sol.exact);
  EXPECT_NEAR(sol.objective, 1.5, 1e-12);
  for (double v : decision_values(enc, sol.x)) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(ExactLp, SingleEdge) {
  const auto sol = oracle::exact_lp(test::edge_lp());
  EXPECT_NEAR(sol.objective, 1.0, 1e-12);
  EXPECT_NEAR(sol.x[0] + sol.x[1], 1.0, 1e-12);
}

TEST(ExactLp, UniquePointOfEqualitySystem) {
  const auto lp = test::dense_lp({{1, 1}, {1, -1}}, {1.0, 0.4}, {3, -2}, {-kInf, -kInf}, {kInf, kInf});
  const auto sol = oracle::enumerate_lp(lp);
  EXPECT_NEAR(sol.x[0], 0.7, 1e-12);
  EXPECT_NEAR(sol.x[1], 0.3, 1e-12);
}

TEST(ExactLp, DualsSatisfyReducedCostSigns) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto lp = gen::random_feasible_lp(4, 8, 0.5, seed);
    const auto sol = oracle::enumerate_lp(lp);
    EXPECT_LE(inf_norm(residual(lp, sol.x)), 1e-9);
    const auto at = lp.matrix().multiply_transpose(sol.u);
    for (std::size_t j = 0; j < lp.cols(); ++j) {
      const double d = lp.cost()[j] - at[j];
      if (sol.x[j] <= lp.lower()[j] + 1e-9) {
        EXPECT_GE(d, -1e-8);
      } else if (sol.x[j] >= lp.upper()[j] - 1e-9) {
        EXPECT_LE(d, 1e-8);
      } else {
        EXPECT_NEAR(d, 0.0, 1e-8);
      }
    }
    // Strong duality through the Lagrangian bound.
    EXPECT_NEAR(lagrangian_bound(lp, sol.u), lp.min_objective(sol.x), 1e-8);
  }
}

TEST(ExactLp, MaximizationSense) {
  const auto lp = test::dense_lp({{1, 1}}, {1}, {2, 1}, {0, 0}, {1, 1}, Sense::maximize);
  const auto sol = oracle::enumerate_lp(lp);
  EXPECT_NEAR(sol.objective, 2.0, 1e-12);
  EXPECT_NEAR(sol.x[0], 1.0, 1e-12);
}

TEST(ExactLp, InfeasibleAndUnbounded) {
  const auto infeasible = test::dense_lp({{1, 1}}, {3}, {1, 1}, {0, 0}, {1, 1});
  try {
    oracle::enumerate_lp(infeasible);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("infeasible"), std::string::npos);
  }
  const auto unbounded = test::dense_lp({{1, -1}}, {0}, {-1, 0}, {0, 0}, {kInf, kInf});
  try {
    oracle::enumerate_lp(unbounded);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("unbounded"), std::string::npos);
  }
}

TEST(ExactLp, TooLargeForEnumeration) {
  const auto lp = gen::random_feasible_lp(13, 20, 0.5, 1);
  EXPECT_THROW(oracle::enumerate_lp(lp), TooLargeError);
}

TEST(ExactLp, EnumerationAndHighAccuracyAgree) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto lp = gen::random_feasible_lp(5, 10, 0.4, 50 + seed);
    const auto a = oracle::enumerate_lp(lp);
    const auto b = oracle::high_accuracy_lp(lp);
    EXPECT_FALSE(b.exact);
    EXPECT_NEAR(a.objective, b.objective, 1e-8) << "seed " << seed;
  }
}

TEST(ExactLp, FallbackOnLargerInstances) {
  const auto lp = gen::random_feasible_lp(15, 30, 0.3, 9);
  const auto sol = oracle::exact_lp(lp);
  EXPECT_FALSE(sol.exact);
  EXPECT_LE(inf_norm(residual(lp, sol.x)), 1e-9);
  EXPECT_NEAR(lagrangian_bound(lp, sol.u), lp.min_objective(sol.x), 1e-6);
}

TEST(SolvePenalty, ProjectedGradientVanishes) {
  Rng rng(4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto lp = gen::random_feasible_lp(6, 12, 0.4, seed);
    const double beta = 0.5 + 20 * uniform_unit(rng);
    const PenaltyProblem p(lp, beta, test::random_vector(rng, 6, -1, 1), test::random_vector(rng, 12, 0, 1));
    const auto qp = oracle::solve_penalty(p);
    const auto g = p.gradient(qp.x, residual(lp, qp.x));
    for (std::size_t j = 0; j < 12; ++j) {
      if (qp.x[j] <= lp.lower()[j]) {
        EXPECT_GE(g[j], -1e-9);
      } else if (qp.x[j] >= lp.upper()[j]) {
        EXPECT_LE(g[j], 1e-9);
      } else {
        EXPECT_NEAR(g[j], 0.0, 1e-9);
      }
    }
    EXPECT_NEAR(qp.objective, p.objective(qp.x), 1e-12);
  }
}

TEST(VertexCoverLp, MinCutMatchesEnumeration) {
  EXPECT_NEAR(oracle::vertex_cover_lp(test::triangle()).objective, 1.5, 1e-12);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto g = gen::random_graph(7, 8, seed);
    Rng rng(seed);
    std::vector<Edge> e(g.edges().begin(), g.edges().end());
    std::vector<double> costs = test::random_vector(rng, 7, 0.5, 2.0);
    const Graph wg(7, e, costs);
    const auto flow = oracle::vertex_cover_lp(wg);
    const auto enc = encode_vertex_cover(wg);
    EXPECT_NEAR(flow.objective, oracle::enumerate_lp(enc.lp).objective, 1e-9) << "seed " << seed;
    EXPECT_LE(vertex_cover_violation(wg, flow.x), 1e-12);
    for (double v : flow.x) EXPECT_TRUE(v == 0.0 || v == 0.5 || v == 1.0);
  }
}

TEST(ExactIntegral, SmallExamples) {
  EXPECT_DOUBLE_EQ(oracle::exact_vertex_cover(test::triangle()).cost, 2.0);
  EXPECT_DOUBLE_EQ(oracle::exact_independent_set(test::triangle()).cost, 1.0);
  const MultiwayInstance path(test::path(3), {0, 2});
  const auto cut = oracle::exact_multiway_cut(path);
  EXPECT_TRUE(cut.feasible);
  EXPECT_DOUBLE_EQ(cut.cost, 1.0);
}

TEST(ExactIntegral, VertexCoverAndIndependentSetMatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = gen::erdos_renyi(12, 0.3, seed);
    const auto costs = g.vertex_costs();
    const auto covers = [&](std::uint32_t mask) {
      for (const auto& e : g.edges()) {
        if (!(mask >> e.u & 1u) && !(mask >> e.v & 1u)) return false;
      }
      return true;
    };
    const auto independent = [&](std::uint32_t mask) {
      for (const auto& e : g.edges()) {
        if ((mask >> e.u & 1u) && (mask >> e.v & 1u)) return false;
      }
      return true;
    };
    const auto cost = [&](std::uint32_t mask) { return mask_cost(mask, costs); };
    const auto vc = oracle::exact_vertex_cover(g);
    EXPECT_TRUE(vc.feasible);
    EXPECT_DOUBLE_EQ(vc.cost, brute_force(12, covers, cost, false));
    const auto is = oracle::exact_independent_set(g);
    EXPECT_TRUE(is.feasible);
    EXPECT_DOUBLE_EQ(is.cost, brute_force(12, independent, cost, true));
  }
}

TEST(ExactIntegral, SetCoverAndPackingMatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ss = gen::random_set_system(10, 12, 0.25, seed, true, 0.5, 2.0);
    const auto costs = ss.costs();
    const auto load = [&](std::uint32_t mask, bool weighted) {
      std::vector<double> l(ss.universe(), 0.0);
      for (std::size_t s = 0; s < ss.size(); ++s) {
        if (!(mask >> s & 1u)) continue;
        const auto& set = ss.set(s);
        for (std::size_t q = 0; q < set.elements.size(); ++q) l[set.elements[q]] += weighted ? set.weights[q] : 1.0;
      }
      return l;
    };
    const auto covers = [&](std::uint32_t mask) {
      const auto l = load(mask, false);
      return std::all_of(l.begin(), l.end(), [](double v) { return v >= 1.0; });
    };
    const auto packs = [&](std::uint32_t mask) {
      const auto l = load(mask, true);
      return std::all_of(l.begin(), l.end(), [](double v) { return v <= 1.0 + 1e-12; });
    };
    const auto cost = [&](std::uint32_t mask) { return mask_cost(mask, costs); };
    EXPECT_NEAR(oracle::exact_set_cover(ss).cost, brute_force(12, covers, cost, false), 1e-12) << seed;
    EXPECT_NEAR(oracle::exact_set_packing(ss).cost, brute_force(12, packs, cost, true), 1e-12) << seed;
  }
}

TEST(ExactIntegral, MultiwayCutMatchesLabelSearch) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = gen::random_graph(8, 14, seed);
    const auto terms = gen::random_terminals(g, 3, seed);
    const MultiwayInstance mi(g, terms);
    const auto best = oracle::exact_multiway_cut(mi);
    EXPECT_TRUE(best.feasible);
    // Isolating every terminal but the last is a feasible cut.
    double star = 0.0;
    for (std::size_t t = 0; t + 1 < terms.size(); ++t) {
      for (auto e : g.incident(terms[t])) star += g.edges()[e].cost;
    }
    EXPECT_LE(best.cost, star + 1e-12);
    // The LP relaxation is a lower bound.
    const auto lp = oracle::exact_lp(encode_multiway_cut(mi).lp);
    EXPECT_LE(lp.objective, best.cost + 1e-8);
  }
}

TEST(ExactIntegral, SizeLimits) {
  EXPECT_THROW(oracle::exact_vertex_cover(gen::random_graph(26, 30, 1)), TooLargeError);
  EXPECT_THROW(oracle::exact_set_cover(gen::random_set_system(5, 26, 0.3, 1)), TooLargeError);
  EXPECT_THROW(oracle::exact_set_packing(gen::random_set_system(5, 26, 0.3, 1)), TooLargeError);
  const auto g = test::path(13);
  EXPECT_THROW(oracle::exact_multiway_cut(MultiwayInstance(g, {0, 12})), TooLargeError);
  EXPECT_THROW(oracle::exact_set_cover(SetSystem(2, {{{0}, {}, 1.0}})), InfeasibleError);
}
