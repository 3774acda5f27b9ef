#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "lpround/errors.hpp"
#include "lpround/lp.hpp"
#include "lpround/penalty.hpp"
#include "lpround/random.hpp"
#include "lpround/scd.hpp"

namespace lpround {

struct AlmOptions {
  double beta0 = 1.0;
  /// Multiplier applied to beta after a round that did not halve the residual.
  double beta_growth = 2.0;
  double beta_max = 1e8;
  std::size_t max_outer = 20;
  SolveOptions inner;
  double target_eps = 0.1;
  /// Relative gap to the Lagrangian bound of the current multipliers.
  std::optional<double> target_delta;
  std::optional<std::vector<double>> x_bar0;
  std::optional<std::vector<double>> u_bar0;
  /// Three rounds in a row without residual decrease (while above
  /// target_eps, with beta already at beta_max) raise StalledError. Below
  /// the cap a flat residual only triggers beta growth.
  std::size_t stall_rounds = 3;
};

struct AlmRound {
  std::size_t round = 0;
  double beta = 0.0;
  double eps = 0.0;
  double objective = 0.0;
  double dual_bound = 0.0;
  std::size_t inner_steps = 0;
  double qp_gap = 0.0;
  bool inner_converged = false;
};

struct AlmResult {
  std::vector<double> x;
  std::vector<double> u;  ///< multiplier estimate after the last round
  ApproxCertificate certificate;
  std::vector<AlmRound> rounds;
  double dual_bound = 0.0;
  double final_beta = 0.0;
  std::size_t total_steps = 0;
  double wall_ms = 0.0;
  bool converged = false;
  bool timed_out = false;
};

/// Observer: round record, multipliers before and after, residual of the round's solution.
using AlmObserver = std::function<void(const AlmRound&, std::span<const double> u_prev,
                                       std::span<const double> u_next,
                                       std::span<const double> residual)>;

/// Proximal method of multipliers. Round t minimizes the penalty objective
/// with (beta_t, u_t, x_bar_t), then
///   u_{t+1} = u_t - beta_t (A x_t - b),   x_bar_{t+1} = x_t,
/// and beta grows by beta_growth unless ||A x_t - b||_inf at least halved.
inline AlmResult alm_solve(const StandardFormLp& lp, const AlmOptions& opts,
                           const AlmObserver& observer = {}) {
  if (!(opts.beta0 > 0.0)) throw ConfigError("beta0 must be positive");
  if (!(opts.beta_growth >= 1.0)) throw ConfigError("beta_growth must be >= 1");
  if (opts.max_outer == 0) throw ConfigError("max_outer must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = lp.cols(), m = lp.rows();

  std::vector<double> x_bar = opts.x_bar0 ? *opts.x_bar0 : std::vector<double>(n, 0.0);
  std::vector<double> u_bar = opts.u_bar0 ? *opts.u_bar0 : std::vector<double>(m, 0.0);
  if (x_bar.size() != n || u_bar.size() != m) throw DimensionError("anchor length mismatch");
  std::vector<double> x_start = opts.inner.x0 ? *opts.inner.x0 : x_bar;

  AlmResult out;
  double beta = opts.beta0;
  double prev_eps = std::numeric_limits<double>::infinity();
  std::size_t no_progress = 0;

  for (std::size_t t = 1; t <= opts.max_outer; ++t) {
    PenaltyProblem p(lp, beta, u_bar, x_bar);
    SolveOptions inner = opts.inner;
    inner.x0 = x_start;
    inner.seed = derive_seed(opts.inner.seed, t);
    SolveResult res = inner.threads > 1 ? solve_parallel(p, inner) : solve(p, inner);

    const auto r = residual(lp, res.x);
    const double eps = inf_norm(r);
    std::vector<double> u_next(m);
    for (std::size_t i = 0; i < m; ++i) u_next[i] = u_bar[i] - beta * r[i];

    AlmRound rec;
    rec.round = t;
    rec.beta = beta;
    rec.eps = eps;
    rec.objective = lp.objective(res.x);
    rec.dual_bound = lagrangian_bound(lp, u_next);
    rec.inner_steps = res.stats.steps;
    rec.qp_gap = res.stats.qp_gap;
    rec.inner_converged = res.stats.converged;
    out.rounds.push_back(rec);
    out.total_steps += res.stats.steps;
    if (observer) observer(rec, u_bar, u_next, r);

    u_bar = std::move(u_next);
    x_bar = res.x;
    x_start = res.x;
    out.x = std::move(res.x);
    out.u = u_bar;
    out.dual_bound = rec.dual_bound;
    out.final_beta = beta;

    bool gap_ok = true;
    if (opts.target_delta) {
      const double scale = std::max(std::abs(rec.dual_bound), 1e-12);
      gap_ok = std::isfinite(rec.dual_bound) &&
               std::abs(rec.objective - rec.dual_bound) <= *opts.target_delta * scale;
    }
    if (eps <= opts.target_eps && gap_ok) {
      out.converged = true;
      break;
    }
    if (res.stats.timed_out) {
      out.timed_out = true;
      break;
    }
    if (eps > opts.target_eps) {
      no_progress = (eps >= prev_eps && beta >= opts.beta_max) ? no_progress + 1 : 0;
      if (no_progress >= opts.stall_rounds) {
        throw StalledError("residual did not decrease for " + std::to_string(no_progress) +
                           " consecutive rounds (eps = " + std::to_string(eps) + ")");
      }
    }
    if (eps > 0.5 * prev_eps) beta = std::min(beta * opts.beta_growth, opts.beta_max);
    prev_eps = eps;
  }

  out.certificate = certify(lp, out.x);
  if (std::isfinite(out.dual_bound) && out.dual_bound != 0.0) {
    out.certificate.reference = out.dual_bound;
    out.certificate.reference_kind = ReferenceKind::dual_bound;
    out.certificate.delta = std::abs(lp.objective(out.x) - out.dual_bound) / std::abs(out.dual_bound);
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace lpround
