#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "lpround/alm.hpp"
#include "lpround/conditioning.hpp"
#include "lpround/errors.hpp"
#include "lpround/lp.hpp"
#include "lpround/problems.hpp"
#include "lpround/rounding.hpp"

namespace lpround {

struct PipelineOptions {
  double eps = 0.1;
  /// Relative gap to the Lagrangian bound required before the outer loop stops.
  double delta = 0.05;
  /// Starting penalty; defaults to 1.
  std::optional<double> beta;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  std::size_t reps = 10;
  double time_limit_s = 3600.0;
  /// Cap on coordinate steps per inner solve; default 400 epochs.
  std::optional<std::size_t> steps;
  double inner_gap = 1e-7;
  std::size_t max_outer = 40;
  /// Set cover: best of `reps` randomized roundings instead of thresholding.
  bool randomized_set_cover = false;
};

struct PipelineResult {
  ProblemKind kind = ProblemKind::generic;
  AlmResult alm;
  std::optional<BetaChoice> beta_choice;
  /// Decision values after repair.
  std::vector<double> decisions;
  /// Constraint violation fed to the repair step.
  double repair_eps = 0.0;
  double lp_objective = 0.0;
  std::optional<IntegralSolution> rounded;
  double wall_ms = 0.0;
  bool timed_out = false;
};

namespace detail {

inline AlmResult run_alm(const EncodedProblem& enc, const PipelineOptions& opt, std::optional<double> beta_cap,
                         std::chrono::steady_clock::time_point deadline) {
  if (!(opt.eps > 0.0)) throw ConfigError("eps must be positive");
  if (opt.threads < 1) throw ConfigError("threads must be >= 1");
  AlmOptions ao;
  ao.beta0 = opt.beta.value_or(1.0);
  ao.beta_max = std::max(ao.beta0, beta_cap.value_or(1e8));
  ao.max_outer = opt.max_outer;
  ao.target_eps = opt.eps;
  if (std::isfinite(opt.delta)) ao.target_delta = opt.delta;
  ao.x_bar0 = enc.initial_point;
  ao.inner.x0 = enc.initial_point;
  ao.inner.blocks = enc.blocks;
  ao.inner.threads = opt.threads;
  ao.inner.seed = opt.seed;
  ao.inner.target_qp_gap = opt.inner_gap;
  ao.inner.max_steps = opt.steps.value_or(400 * std::max<std::size_t>(1, enc.lp.cols()));
  ao.inner.deadline = deadline;
  return alm_solve(enc.lp, ao);
}

inline double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

/// Stamps the wall time; true when the ALM hit the deadline, in which case
/// the caller returns the partial result without repair or rounding.
inline bool stop_if_timed_out(PipelineResult& out, std::chrono::steady_clock::time_point t0) {
  out.timed_out = out.alm.timed_out;
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out.timed_out;
}

}  // namespace detail

/// Encode, solve, repair and half-round a vertex cover instance.
inline PipelineResult run_vertex_cover(const Graph& g, const PipelineOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(opt.time_limit_s));
  const auto enc = encode_vertex_cover(g);
  PipelineResult out;
  out.kind = enc.kind;
  if (g.m() > 0) {
    double lower = 0.0;
    for (const auto& e : g.edges()) lower = std::max(lower, std::min(g.vertex_cost(e.u), g.vertex_cost(e.v)));
    if (lower > 0.0) {
      out.beta_choice = choose_beta(estimate_vc_condition(g), opt.eps, opt.delta, lower, std::sqrt(double(g.n())));
    }
  }
  out.alm = detail::run_alm(enc, opt, out.beta_choice ? std::optional(out.beta_choice->beta) : std::nullopt, deadline);
  out.lp_objective = enc.lp.objective(out.alm.x);
  if (detail::stop_if_timed_out(out, t0)) return out;

  auto d = decision_values(enc, out.alm.x);
  for (double& v : d) v = detail::clamp_unit(v);
  out.repair_eps = std::max(0.0, vertex_cover_violation(g, d));
  if (out.repair_eps >= 1.0) throw InfeasibleError("LP point too infeasible to repair");
  auto fs = repair_vertex_cover(g, d, out.repair_eps);
  out.decisions = fs.x;
  out.rounded = round_vertex_cover(g, fs.x);
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Set cover: covering repair with q(P) = 1, then threshold rounding at 1/f
/// (or best-of randomized rounding).
inline PipelineResult run_set_cover(const SetSystem& ss, const PipelineOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(opt.time_limit_s));
  const auto enc = encode_set_cover(ss);
  PipelineResult out;
  out.kind = enc.kind;
  if (ss.size() > 0 && ss.universe() > 0) {
    try {
      const auto cp = set_cover_program(ss);
      double lower = kInf;
      for (const auto& s : ss.sets()) lower = std::min(lower, s.cost);
      if (lower > 0.0) {
        out.beta_choice = choose_beta(estimate_covering_condition(cp), opt.eps, opt.delta, lower,
                                      two_norm(decision_values(enc, enc.initial_point)));
      }
    } catch (const PreconditionError&) {
      // No strictly feasible point: beta stays at its default cap.
    }
  }
  out.alm = detail::run_alm(enc, opt, out.beta_choice ? std::optional(out.beta_choice->beta) : std::nullopt, deadline);
  out.lp_objective = enc.lp.objective(out.alm.x);
  if (detail::stop_if_timed_out(out, t0)) return out;

  auto d = decision_values(enc, out.alm.x);
  for (double& v : d) v = detail::clamp_unit(v);
  const auto inc = incidence_matrix(ss);
  const std::vector<double> ones(ss.universe(), 1.0);
  out.repair_eps = std::max(0.0, covering_violation(inc, ones, d));
  if (out.repair_eps >= 1.0) throw InfeasibleError("LP point too infeasible to repair");
  auto fs = repair_covering(inc, ones, d, out.repair_eps, 1.0);
  out.decisions = fs.x;
  if (opt.randomized_set_cover) {
    out.rounded = best_of([&](std::uint64_t s) { return round_set_cover_randomized(ss, fs.x, s); }, opt.reps,
                          opt.seed);
  } else {
    out.rounded = round_set_cover_threshold(ss, fs.x, static_cast<double>(std::max<std::size_t>(1, ss.max_frequency())));
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Weighted set packing through the strengthened LP, packing repair and
/// best-of sampling/deletion rounding with theta = 1/k.
inline PipelineResult run_set_packing(const SetSystem& ss, const PipelineOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(opt.time_limit_s));
  const auto enc = encode_set_packing_strong(ss);
  PipelineResult out;
  out.kind = enc.kind;
  out.alm = detail::run_alm(enc, opt, std::nullopt, deadline);
  out.lp_objective = enc.lp.objective(out.alm.x);
  if (detail::stop_if_timed_out(out, t0)) return out;

  auto d = decision_values(enc, out.alm.x);
  for (double& v : d) v = detail::clamp_unit(v);
  const auto pm = packing_matrix(ss);
  auto fs = repair_packing(pm, std::vector<double>(pm.cols(), 1.0), d);
  out.decisions = fs.x;
  const double k = static_cast<double>(std::max<std::size_t>(1, enc.k));
  out.rounded = best_of([&](std::uint64_t s) { return round_set_packing(ss, fs.x, k, 1.0 / k, s); }, opt.reps,
                        opt.seed, Sense::maximize);
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline PipelineResult run_independent_set(const Graph& g, const PipelineOptions& opt) {
  return run_set_packing(independent_set_system(g), opt);
}

/// Multiway cut with simplex blocks. The block projection keeps every
/// vertex on the simplex, so rounding needs no repair; the reported LP value
/// is that of the feasible point with edge variables |x_u - x_v|.
inline PipelineResult run_multiway_cut(const MultiwayInstance& mi, const PipelineOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(opt.time_limit_s));
  const auto enc = encode_multiway_cut(mi);
  PipelineResult out;
  out.kind = enc.kind;
  out.alm = detail::run_alm(enc, opt, std::nullopt, deadline);
  out.lp_objective = enc.lp.objective(out.alm.x);
  if (detail::stop_if_timed_out(out, t0)) return out;
  out.decisions = decision_values(enc, out.alm.x);
  out.repair_eps = out.alm.certificate.eps;
  out.lp_objective = enc.lp.objective(lift_multiway_cut(enc, mi, out.decisions));
  out.rounded = best_of([&](std::uint64_t s) { return round_multiway_cut(mi, out.decisions, s); }, opt.reps,
                        opt.seed);
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Plain LP solve, no rounding.
inline PipelineResult run_lp(const StandardFormLp& lp, const PipelineOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(opt.time_limit_s));
  const auto enc = encode_generic(lp);
  PipelineResult out;
  out.kind = enc.kind;
  out.alm = detail::run_alm(enc, opt, std::nullopt, deadline);
  out.lp_objective = enc.lp.objective(out.alm.x);
  out.timed_out = out.alm.timed_out;
  out.decisions = out.alm.x;
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace lpround
