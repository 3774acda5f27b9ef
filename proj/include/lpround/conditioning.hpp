#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpround/errors.hpp"
#include "lpround/lp.hpp"
#include "lpround/problems.hpp"
#include "lpround/sparse_matrix.hpp"

namespace lpround {

enum class ConditionSource { vc_closed_form, covering_slack, user };

inline const char* to_string(ConditionSource s) {
  switch (s) {
    case ConditionSource::vc_closed_form: return "vc-closed-form";
    case ConditionSource::covering_slack: return "covering-slack";
    case ConditionSource::user: return "user";
  }
  return "user";
}

/// Data norm ||d||, lower bounds on the primal and dual distances to
/// ill-posedness (relative to ||d||), and the anchor distance C_*.
struct ConditionEstimate {
  double d_norm = 0.0;
  double delta_p_lb = 0.0;
  double delta_d_lb = 0.0;
  double c_star = 0.0;
  ConditionSource source = ConditionSource::user;
  /// C_* is the sqrt(m) default rather than a computed distance.
  bool c_star_heuristic = false;
};

inline void validate(const ConditionEstimate& e) {
  if (!(e.d_norm > 0.0) || !(e.delta_p_lb > 0.0) || !(e.delta_d_lb > 0.0)) {
    throw PreconditionError("condition estimate must be positive");
  }
  if (e.delta_p_lb > 1.0 || e.delta_d_lb > 1.0) throw PreconditionError("delta bounds exceed 1");
  if (!(e.c_star >= 0.0)) throw PreconditionError("C_* must be nonnegative");
}

/// Vertex cover LP with box rows folded in: ||d|| = sqrt(2m + n),
/// delta_P >= 1/(4 sqrt(n) ||d||), delta_D >= 1/||d||, C_* = sqrt(m) for
/// anchors x_bar = 1, u_bar = 0.
inline ConditionEstimate estimate_vc_condition(const Graph& g) {
  if (g.n() == 0 || g.m() == 0) throw PreconditionError("vertex cover condition needs a nonempty edge set");
  const double n = static_cast<double>(g.n()), m = static_cast<double>(g.m());
  ConditionEstimate e;
  e.d_norm = std::sqrt(2.0 * m + n);
  e.delta_p_lb = std::min(1.0, 1.0 / (4.0 * std::sqrt(n) * e.d_norm));
  e.delta_d_lb = std::min(1.0, 1.0 / e.d_norm);
  e.c_star = std::sqrt(m);
  e.source = ConditionSource::vc_closed_form;
  return e;
}

/// Covering program  min c^T x  s.t.  A x >= b,  0 <= x <= 1, with the box
/// written as rows  -box_scale * x_i >= -box_scale.
struct CoveringProgram {
  SparseMatrix a;
  std::vector<double> b;
  std::vector<double> c;
  double box_scale = 1.0;

  /// Data norm max(||A_hat||_F, ||b_hat||, ||c||) of the explicit-row form.
  double d_norm() const {
    const double n = static_cast<double>(a.cols()), s2 = box_scale * box_scale;
    double bb = n * s2, cc = 0.0;
    for (double v : b) bb += v * v;
    for (double v : c) cc += v * v;
    return std::sqrt(std::max({a.frobenius_sq() + n * s2, bb, cc}));
  }

  /// Smallest slack over all rows, box rows included.
  double slack(std::span<const double> x) const {
    double s = kInf;
    for (std::size_t i = 0; i < a.rows(); ++i) s = std::min(s, a.row_dot(i, x) - b[i]);
    for (double v : x) s = std::min(s, box_scale * (1.0 - v));
    return s;
  }
};

/// Covering rows of a vertex cover instance.
inline CoveringProgram vertex_cover_program(const Graph& g) {
  std::vector<Triplet> t;
  for (std::size_t e = 0; e < g.m(); ++e) {
    t.push_back({e, g.edges()[e].u, 1.0});
    t.push_back({e, g.edges()[e].v, 1.0});
  }
  return {SparseMatrix(g.m(), g.n(), std::move(t)), std::vector<double>(g.m(), 1.0), g.vertex_costs(), 1.0};
}

/// Covering rows of a set cover instance.
inline CoveringProgram set_cover_program(const SetSystem& ss) {
  std::vector<Triplet> t;
  for (std::size_t a = 0; a < ss.universe(); ++a) {
    for (const auto& mb : ss.members(a)) t.push_back({a, mb.set, 1.0});
  }
  return {SparseMatrix(ss.universe(), ss.size(), std::move(t)), std::vector<double>(ss.universe(), 1.0), ss.costs(),
          1.0};
}

/// Best slack along the diagonal x = t * 1, t in [0,1]. The slack is concave
/// and piecewise linear in t, so ternary search finds its maximum.
inline std::vector<double> diagonal_slack_point(const CoveringProgram& cp) {
  const std::size_t n = cp.a.cols();
  const auto at = [&](double t) { return cp.slack(std::vector<double>(n, t)); };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (at(m1) < at(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return std::vector<double>(n, 0.5 * (lo + hi));
}

/// Slack-based bounds: delta_P >= s / (2 sqrt(n) ||d||) where s is the
/// slack of a strictly feasible point, delta_D >= min_i c_i / ||d||.
/// Without a supplied point one is searched along the diagonal. C_* is the
/// user's value or, when absent, the sqrt(m) heuristic.
inline ConditionEstimate estimate_covering_condition(const CoveringProgram& cp,
                                                     std::optional<std::vector<double>> point = std::nullopt,
                                                     std::optional<double> c_star = std::nullopt) {
  const std::size_t n = cp.a.cols();
  if (n == 0) throw PreconditionError("empty covering program");
  if (cp.b.size() != cp.a.rows() || cp.c.size() != n) throw DimensionError("covering program dimensions");
  if (!(cp.box_scale > 0.0)) throw PreconditionError("box scale must be positive");
  const auto x = point ? *point : diagonal_slack_point(cp);
  if (x.size() != n) throw DimensionError("slack point length");
  const double s = cp.slack(x);
  if (!(s > 0.0) || std::any_of(x.begin(), x.end(), [](double v) { return v < 0.0; })) {
    throw PreconditionError("no strictly feasible point with positive slack");
  }
  const double cmin = *std::min_element(cp.c.begin(), cp.c.end());
  if (!(cmin > 0.0)) throw PreconditionError("dual bound needs positive costs");
  ConditionEstimate e;
  e.d_norm = cp.d_norm();
  e.delta_p_lb = std::min(1.0, s / (2.0 * std::sqrt(static_cast<double>(n)) * e.d_norm));
  e.delta_d_lb = std::min(1.0, cmin / e.d_norm);
  if (c_star) {
    e.c_star = *c_star;
  } else {
    e.c_star = std::sqrt(static_cast<double>(cp.a.rows()));
    e.c_star_heuristic = true;
  }
  e.source = ConditionSource::covering_slack;
  return e;
}

enum class BetaBound { condition = 0, objective = 1, feasibility = 2 };

inline const char* to_string(BetaBound b) {
  switch (b) {
    case BetaBound::condition: return "condition";
    case BetaBound::objective: return "objective";
    case BetaBound::feasibility: return "feasibility";
  }
  return "condition";
}

struct BetaChoice {
  double beta = 0.0;
  /// condition, objective and feasibility lower bounds, in that order.
  std::array<double, 3> bounds{};
  BetaBound binding = BetaBound::condition;
  /// Target penalty-QP accuracy C20^2 / beta^3.
  double eps_bar = 0.0;
  double c20 = 0.0;
  ConditionEstimate estimate;
  double eps = 0.0;
  std::optional<double> delta;
  double objective_magnitude = 0.0;
  double x_bar_norm = 0.0;
};

/// The three penalty lower bounds:
///   beta >= 10 C / (||d|| min(dP, dD))
///   beta >= [25 C/(dP dD) + 6 C^2 + sqrt(6) ||x_bar|| C] / (delta |c^T x*|)
///   beta >= [(1 + sqrt 2) C + 25 C / (2 dP dD)] / eps
/// An absent delta drops the objective bound.
inline BetaChoice choose_beta(const ConditionEstimate& est, double eps, std::optional<double> delta,
                              double objective_magnitude, double x_bar_norm) {
  validate(est);
  if (!(est.c_star > 0.0)) throw PreconditionError("C_* must be positive to choose beta");
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  if (delta && !(*delta > 0.0)) throw PreconditionError("delta must be positive");
  if (!(x_bar_norm >= 0.0)) throw PreconditionError("x_bar norm must be nonnegative");
  const bool finite_delta = delta && std::isfinite(*delta);
  if (finite_delta && !(objective_magnitude > 0.0)) {
    throw PreconditionError("objective magnitude must be positive when delta is requested");
  }
  const double c = est.c_star, dp = est.delta_p_lb, dd = est.delta_d_lb;
  BetaChoice out;
  out.bounds[0] = 10.0 * c / (est.d_norm * std::min(dp, dd));
  out.bounds[1] = finite_delta ? (25.0 * c / (dp * dd) + 6.0 * c * c + std::sqrt(6.0) * x_bar_norm * c) /
                                     (*delta * objective_magnitude)
                               : 0.0;
  out.bounds[2] = std::isfinite(eps) ? ((1.0 + std::sqrt(2.0)) * c + 25.0 * c / (2.0 * dp * dd)) / eps : 0.0;
  const auto it = std::max_element(out.bounds.begin(), out.bounds.end());
  out.beta = *it;
  out.binding = static_cast<BetaBound>(it - out.bounds.begin());
  out.c20 = 25.0 * c / (2.0 * est.d_norm * dp * dd);
  out.eps_bar = out.c20 * out.c20 / (out.beta * out.beta * out.beta);
  out.estimate = est;
  out.eps = eps;
  out.delta = delta;
  out.objective_magnitude = objective_magnitude;
  out.x_bar_norm = x_bar_norm;
  return out;
}

/// C_* = max(||x* - x_bar||, ||u* - u_bar||).
inline double anchor_distance(std::span<const double> x_star, std::span<const double> u_star,
                              std::span<const double> x_bar, std::span<const double> u_bar) {
  return std::max(distance(x_star, x_bar), distance(u_star, u_bar));
}

struct BoundCheck {
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;  ///< bound - measured
  bool holds = false;
};

struct PerturbationReport {
  double c_star = 0.0;
  double beta = 0.0;
  BoundCheck residual;         ///< ||A x(beta) - b|| <= (1 + sqrt 2) C / beta
  /// ||A x(beta) - b|| <= [du + sqrt(du^2 + dx^2)] / beta with du, dx the two anchor distances
  BoundCheck residual_sharp;
  BoundCheck anchor;           ///< ||x(beta) - x_bar|| <= sqrt(6) C
  BoundCheck anchor_sharp;     ///< ||x(beta) - x_bar||^2 <= 2 du [du + sqrt(du^2 + dx^2)] + dx^2
  std::optional<BoundCheck> objective;  ///< only when beta meets the condition bound
  double distance_to_x_star = 0.0;      ///< reported, not checked
  bool pass = false;
};

inline BoundCheck make_check(double measured, double bound, double tol) {
  return {measured, bound, bound - measured, measured <= bound + tol};
}

/// Checks the perturbation inequalities for the penalty minimizer x(beta)
/// with anchors (x_bar, u_bar) against an optimal primal-dual pair
/// (x*, u*). The objective bound needs the condition estimate and applies
/// only when beta >= 10 C / (||d|| min(dP, dD)).
inline PerturbationReport verify_perturbation_bounds(const StandardFormLp& lp, double beta,
                                                     std::span<const double> x_beta,
                                                     std::span<const double> x_bar,
                                                     std::span<const double> u_bar,
                                                     std::span<const double> x_star,
                                                     std::span<const double> u_star,
                                                     const std::optional<ConditionEstimate>& est = std::nullopt,
                                                     double tol = 1e-7) {
  if (x_star.empty() && lp.cols() > 0) throw PreconditionError("oracle solution missing");
  lp.check_dim(x_beta);
  lp.check_dim(x_bar);
  lp.check_dim(x_star);
  if (u_bar.size() != lp.rows() || u_star.size() != lp.rows()) throw DimensionError("multiplier length");
  if (!(beta > 0.0)) throw PreconditionError("beta must be positive");

  PerturbationReport rep;
  rep.beta = beta;
  rep.c_star = anchor_distance(x_star, u_star, x_bar, u_bar);
  const double c = rep.c_star;
  const double res = two_norm(residual(lp, x_beta));
  rep.residual = make_check(res, (1.0 + std::sqrt(2.0)) * c / beta, tol);
  const double du = distance(u_star, u_bar), dx = distance(x_star, x_bar);
  const double root = du + std::sqrt(du * du + dx * dx);
  rep.residual_sharp = make_check(res, root / beta, tol);
  const double moved = distance(x_beta, x_bar);
  rep.anchor = make_check(moved, std::sqrt(6.0) * c, tol);
  rep.anchor_sharp = make_check(moved, std::sqrt(2.0 * du * root + dx * dx), tol);
  rep.distance_to_x_star = distance(x_beta, x_star);
  rep.pass = rep.residual.holds && rep.residual_sharp.holds && rep.anchor.holds && rep.anchor_sharp.holds;

  if (est) {
    validate(*est);
    const double dp = est->delta_p_lb, dd = est->delta_d_lb;
    if (beta >= 10.0 * c / (est->d_norm * std::min(dp, dd))) {
      const double xbar_norm = two_norm(x_bar);
      const double bound = (25.0 * c / (2.0 * dp * dd) + 6.0 * c * c + std::sqrt(6.0) * xbar_norm * c) / beta;
      const double gap = std::abs(lp.min_objective(x_star) - lp.min_objective(x_beta));
      rep.objective = make_check(gap, bound, tol);
      rep.pass = rep.pass && rep.objective->holds;
    }
  }
  return rep;
}

/// Step count after which serial coordinate descent reaches
/// f(x_j) - f* < eps_bar with probability >= 1 - eta:
///   j >= n (l + L) / l * |log( L / (2 eta eps_bar) * (R^2 + 2 (f0 - f*) / L) )|.
inline double scd_step_bound(std::size_t n, double l, double l_max, double eta, double eps_bar, double r_sq,
                             double f0_gap) {
  if (!(l > 0.0) || !(l_max > 0.0) || !(eta > 0.0 && eta < 1.0) || !(eps_bar > 0.0)) {
    throw PreconditionError("invalid step-count parameters");
  }
  const double inner = l_max / (2.0 * eta * eps_bar) * (r_sq + 2.0 * f0_gap / l_max);
  return std::ceil(static_cast<double>(n) * (l + l_max) / l * std::abs(std::log(inner)));
}

}  // namespace lpround
