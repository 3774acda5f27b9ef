#pragma once

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "lpround/errors.hpp"
#include "lpround/lp.hpp"
#include "lpround/penalty.hpp"
#include "lpround/random.hpp"

namespace lpround {

/// A group of coordinates updated together. Simplex blocks are projected
/// onto the probability simplex after each gradient step.
struct Block {
  std::vector<std::size_t> indices;
  bool simplex = false;
};

/// Reported to SolveOptions::on_check at every stopping check.
struct CheckInfo {
  std::size_t steps = 0;
  std::size_t epoch = 0;
  double objective = 0.0;
  double qp_gap = 0.0;
};

struct SolveOptions {
  std::size_t max_steps = 10'000'000;
  /// Stop once the strong-convexity gap surrogate drops to this value.
  double target_qp_gap = 1e-9;
  /// Steps between stopping checks; 0 means one epoch.
  std::size_t check_interval = 0;
  std::size_t threads = 1;
  std::size_t max_threads = 256;
  /// Disjoint, covering partition of the coordinates. Empty: plain SCD.
  std::vector<Block> blocks;
  /// Multiplier on the 1/L step; halved automatically after a divergence.
  double step_safety = 1.0;
  std::uint64_t seed = 0;
  /// Starting point (clamped into the box). Defaults to the primal anchor.
  std::optional<std::vector<double>> x0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::function<void(const CheckInfo&)> on_check;
};

struct SolverState {
  std::vector<double> x;
  std::vector<double> r;  ///< A x - b, exact after every refresh
  std::size_t epoch = 0;
  std::size_t steps = 0;
  std::uint64_t rng_seed = 0;
  double f_current = 0.0;
};

struct SolveStats {
  std::size_t steps = 0;
  std::size_t epochs = 0;
  double wall_ms = 0.0;
  double f_final = 0.0;
  double qp_gap = 0.0;
  std::size_t threads = 1;
  double step_safety = 1.0;
  std::size_t restarts = 0;
  bool converged = false;
  bool timed_out = false;
};

struct SolveResult {
  std::vector<double> x;
  ApproxCertificate certificate;
  SolveStats stats;
};

/// Euclidean projection onto {z >= 0, sum z = 1}.
inline void project_simplex(std::span<double> v) {
  if (v.empty()) return;
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumsum = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cumsum += s[k];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (k + 1 == s.size() || s[k + 1] <= t) {
      tau = t;
      break;
    }
  }
  for (double& x : v) x = std::max(x - tau, 0.0);
}

inline void refresh_residual(const StandardFormLp& lp, SolverState& s) {
  const auto& a = lp.matrix();
  s.r.resize(lp.rows());
  for (std::size_t i = 0; i < lp.rows(); ++i) s.r[i] = a.row_dot(i, s.x) - lp.rhs()[i];
}

namespace detail {

inline void validate_blocks(const StandardFormLp& lp, const std::vector<Block>& blocks) {
  if (blocks.empty()) return;
  std::vector<char> seen(lp.cols(), 0);
  for (const auto& b : blocks) {
    if (b.indices.empty()) throw ConfigError("empty block");
    for (auto i : b.indices) {
      if (i >= lp.cols()) throw ConfigError("block index out of range");
      if (seen[i]) throw ConfigError("blocks overlap at coordinate " + std::to_string(i));
      seen[i] = 1;
      if (b.simplex && (lp.lower()[i] != 0.0 || lp.upper()[i] != 1.0)) {
        throw ConfigError("simplex block contains coordinate " + std::to_string(i) +
                          " whose bounds are not [0,1]");
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw ConfigError("blocks do not cover every coordinate");
  }
}

inline void place_in_box(const StandardFormLp& lp, const std::vector<Block>& blocks,
                         std::vector<double>& x) {
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], lp.lower()[j], lp.upper()[j]);
  std::vector<double> tmp;
  for (const auto& b : blocks) {
    if (!b.simplex) continue;
    tmp.resize(b.indices.size());
    for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] = x[b.indices[k]];
    project_simplex(tmp);
    for (std::size_t k = 0; k < tmp.size(); ++k) x[b.indices[k]] = tmp[k];
  }
}

/// Step length scale for a block: L_max when the block's columns share no
/// rows (block Hessian is then diagonal), otherwise beta * sum ||A_:i||^2 + 1/beta.
inline double block_lipschitz(const PenaltyProblem& p, const Block& b, double l_max) {
  const auto& a = p.lp().matrix();
  std::vector<std::size_t> rows;
  double sum_sq = 0.0;
  for (auto i : b.indices) {
    for (auto r : a.col_rows(i)) rows.push_back(r);
    sum_sq += a.col_sq_norm(i);
  }
  std::sort(rows.begin(), rows.end());
  const bool disjoint = std::adjacent_find(rows.begin(), rows.end()) == rows.end();
  return disjoint ? l_max : std::max(l_max, p.beta() * sum_sq + 1.0 / p.beta());
}

// Memory access policy: plain for the serial solver, std::atomic_ref for
// workers sharing x and r. Both go through the same arithmetic so a
// one-thread parallel run reproduces the serial trajectory bit for bit.
template <bool Atomic>
struct Access {
  static double load(const double& v) noexcept {
    if constexpr (Atomic) {
      return std::atomic_ref<double>(const_cast<double&>(v)).load(std::memory_order_relaxed);
    } else {
      return v;
    }
  }
  static void store(double& v, double value) noexcept {
    if constexpr (Atomic) {
      std::atomic_ref<double>(v).store(value, std::memory_order_relaxed);
    } else {
      v = value;
    }
  }
  static void add(double& v, double delta) noexcept {
    if constexpr (Atomic) {
      std::atomic_ref<double>(v).fetch_add(delta, std::memory_order_relaxed);
    } else {
      v += delta;
    }
  }
};

template <bool Atomic>
double col_dot(const SparseMatrix& a, std::size_t j, const std::vector<double>& r) noexcept {
  const auto rows = a.col_rows(j);
  const auto vals = a.col_values(j);
  double s = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) s += vals[k] * Access<Atomic>::load(r[rows[k]]);
  return s;
}

template <bool Atomic>
void scatter(const SparseMatrix& a, std::size_t j, double delta, std::vector<double>& r) noexcept {
  const auto rows = a.col_rows(j);
  const auto vals = a.col_values(j);
  for (std::size_t k = 0; k < rows.size(); ++k) Access<Atomic>::add(r[rows[k]], vals[k] * delta);
}

template <bool Atomic>
void coordinate_update(const PenaltyProblem& p, std::vector<double>& x, std::vector<double>& r,
                       std::size_t i, double step) noexcept {
  const auto& lp = p.lp();
  const auto& a = lp.matrix();
  const double lo = lp.lower()[i], hi = lp.upper()[i];
  const double dot = col_dot<Atomic>(a, i, r);
  double old = Access<Atomic>::load(x[i]);
  double next = std::clamp(old - step * p.grad_from_dot(dot, old, i), lo, hi);
  if constexpr (Atomic) {
    // Another worker may have moved x_i since it was read; redo the step from
    // the fresh value (the residual dot stays stale).
    std::atomic_ref<double> xi(x[i]);
    while (!xi.compare_exchange_weak(old, next, std::memory_order_relaxed,
                                     std::memory_order_relaxed)) {
      next = std::clamp(old - step * p.grad_from_dot(dot, old, i), lo, hi);
    }
  } else {
    x[i] = next;
  }
  const double delta = next - old;
  if (delta != 0.0) scatter<Atomic>(a, i, delta, r);
}

template <bool Atomic>
void block_update(const PenaltyProblem& p, std::vector<double>& x, std::vector<double>& r,
                  const Block& block, double step, std::vector<double>& old_vals,
                  std::vector<double>& new_vals) noexcept {
  const auto& lp = p.lp();
  const auto& a = lp.matrix();
  const std::size_t k = block.indices.size();
  old_vals.resize(k);
  new_vals.resize(k);
  for (std::size_t q = 0; q < k; ++q) {
    const std::size_t i = block.indices[q];
    old_vals[q] = Access<Atomic>::load(x[i]);
    const double g = p.grad_from_dot(col_dot<Atomic>(a, i, r), old_vals[q], i);
    new_vals[q] = old_vals[q] - step * g;
  }
  if (block.simplex) {
    project_simplex(new_vals);
  } else {
    for (std::size_t q = 0; q < k; ++q) {
      const std::size_t i = block.indices[q];
      new_vals[q] = std::clamp(new_vals[q], lp.lower()[i], lp.upper()[i]);
    }
  }
  for (std::size_t q = 0; q < k; ++q) {
    const std::size_t i = block.indices[q];
    Access<Atomic>::store(x[i], new_vals[q]);
    const double delta = new_vals[q] - old_vals[q];
    if (delta != 0.0) scatter<Atomic>(a, i, delta, r);
  }
}

/// Norm of the minimum-norm element of g + N(x) for a simplex block, where
/// N is the simplex normal cone: min over lambda of
///   sum_{x_i > 0} (g_i + lambda)^2 + sum_{x_i = 0} max(g_i + lambda, 0)^2.
inline double simplex_min_norm_sq(std::span<const double> x, std::span<const double> g) {
  const auto slope = [&](double lambda) {
    double d = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double v = g[q] + lambda;
      d += (x[q] > 0.0) ? v : std::max(v, 0.0);
    }
    return d;
  };
  const auto [gmin, gmax] = std::minmax_element(g.begin(), g.end());
  double lo = -*gmax - 1.0, hi = -*gmin + 1.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  double s = 0.0;
  for (std::size_t q = 0; q < x.size(); ++q) {
    const double v = g[q] + lambda;
    const double w = (x[q] > 0.0) ? v : std::max(v, 0.0);
    s += w * w;
  }
  return s;
}

}  // namespace detail

/// Upper bound on f(x) - f* from strong convexity:
/// ||min-norm subgradient of f + box/simplex indicator||^2 / (2 / beta).
inline double qp_gap_surrogate(const PenaltyProblem& p, std::span<const double> x,
                               std::span<const double> r, const std::vector<Block>& blocks = {}) {
  const auto& lp = p.lp();
  const auto g = p.gradient(x, r);
  const auto coord = [&](std::size_t j) {
    if ((x[j] <= lp.lower()[j] && g[j] > 0.0) || (x[j] >= lp.upper()[j] && g[j] < 0.0)) return 0.0;
    return g[j] * g[j];
  };
  double sum = 0.0;
  if (blocks.empty()) {
    for (std::size_t j = 0; j < x.size(); ++j) sum += coord(j);
  } else {
    std::vector<double> xb, gb;
    for (const auto& b : blocks) {
      if (!b.simplex) {
        for (auto j : b.indices) sum += coord(j);
        continue;
      }
      xb.clear();
      gb.clear();
      for (auto j : b.indices) {
        xb.push_back(x[j]);
        gb.push_back(g[j]);
      }
      sum += detail::simplex_min_norm_sq(xb, gb);
    }
  }
  return sum * p.beta() / 2.0;
}

/// Fresh state at x0 (or the primal anchor), placed in the box and on every
/// simplex block, with an exact residual.
inline SolverState make_state(const PenaltyProblem& p,
                              const std::optional<std::vector<double>>& x0 = std::nullopt,
                              const std::vector<Block>& blocks = {}, std::uint64_t seed = 0) {
  const auto& lp = p.lp();
  SolverState s;
  s.x = x0 ? *x0 : p.x_bar();
  lp.check_dim(s.x);
  detail::place_in_box(lp, blocks, s.x);
  refresh_residual(lp, s);
  s.rng_seed = seed;
  s.f_current = p.objective(s.x, s.r);
  return s;
}

/// One projected coordinate step x_i <- clamp(x_i - step * grad_i).
inline void scd_step(const PenaltyProblem& p, SolverState& s, std::size_t i, double step) {
  if (i >= p.lp().cols()) throw DimensionError("coordinate index out of range");
  detail::coordinate_update<false>(p, s.x, s.r, i, step);
  ++s.steps;
}

/// One coordinate step with length 1/L_max.
inline void scd_step(const PenaltyProblem& p, SolverState& s, std::size_t i) {
  const double l_max = p.beta() * p.lp().matrix().max_col_sq_norm() + 1.0 / p.beta();
  scd_step(p, s, i, 1.0 / l_max);
}

inline void block_step(const PenaltyProblem& p, SolverState& s, const Block& block, double step) {
  const auto& lp = p.lp();
  for (auto i : block.indices) {
    if (i >= lp.cols()) throw DimensionError("block index out of range");
    if (block.simplex && (lp.lower()[i] != 0.0 || lp.upper()[i] != 1.0)) {
      throw ConfigError("simplex block with bounds other than [0,1]");
    }
  }
  std::vector<double> a, b;
  detail::block_update<false>(p, s.x, s.r, block, step, a, b);
  ++s.steps;
}

/// Block step with the block's safe step length.
inline void block_step(const PenaltyProblem& p, SolverState& s, const Block& block) {
  const double l_max = p.beta() * p.lp().matrix().max_col_sq_norm() + 1.0 / p.beta();
  block_step(p, s, block, 1.0 / detail::block_lipschitz(p, block, l_max));
}

namespace detail {

/// State and bookkeeping shared by the serial and the parallel solver.
class Engine {
 public:
  static constexpr std::size_t kMaxRestarts = 8;

  Engine(const PenaltyProblem& p, const SolveOptions& opts)
      : p_(p), opts_(opts), start_(std::chrono::steady_clock::now()) {
    if (!(opts.step_safety > 0.0)) throw ConfigError("step_safety must be positive");
    validate_blocks(p.lp(), opts.blocks);
    state_ = make_state(p, opts.x0, opts.blocks, opts.seed);
    safety_ = opts.step_safety;
    l_max_ = lipschitz(p).l_max;
    block_l_.reserve(opts.blocks.size());
    for (const auto& b : opts.blocks) block_l_.push_back(block_lipschitz(p, b, l_max_));
    update_steps();
    snapshot_ = state_.x;
  }

  std::size_t units() const noexcept {
    return opts_.blocks.empty() ? p_.lp().cols() : opts_.blocks.size();
  }

  template <bool Atomic>
  void step_unit(std::size_t u, std::vector<double>& s1, std::vector<double>& s2) noexcept {
    if (opts_.blocks.empty()) {
      coordinate_update<Atomic>(p_, state_.x, state_.r, u, coord_step_);
    } else {
      block_update<Atomic>(p_, state_.x, state_.r, opts_.blocks[u], block_step_[u], s1, s2);
    }
  }

  void refresh_rows(std::size_t begin, std::size_t end) noexcept {
    const auto& lp = p_.lp();
    for (std::size_t i = begin; i < end; ++i) state_.r[i] = lp.matrix().row_dot(i, state_.x) - lp.rhs()[i];
  }

  /// Stopping check. Returns true when the solve should end. On a
  /// non-finite objective, rewinds to the last good point with half the step.
  bool check() {
    const double f = p_.objective(state_.x, state_.r);
    if (!std::isfinite(f)) {
      restore();
      return false;
    }
    state_.f_current = f;
    stats_.qp_gap = qp_gap_surrogate(p_, state_.x, state_.r, opts_.blocks);
    have_good_ = true;
    snapshot_ = state_.x;
    if (opts_.on_check) opts_.on_check({state_.steps, state_.epoch, f, stats_.qp_gap});
    if (stats_.qp_gap <= opts_.target_qp_gap) {
      stats_.converged = true;
      return true;
    }
    if (opts_.deadline && std::chrono::steady_clock::now() >= *opts_.deadline) {
      stats_.timed_out = true;
      return true;
    }
    return false;
  }

  SolveResult finish(std::size_t threads) {
    SolveResult res;
    stats_.steps = state_.steps;
    stats_.epochs = state_.epoch;
    stats_.f_final = state_.f_current;
    stats_.threads = threads;
    stats_.step_safety = safety_;
    stats_.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    res.certificate = certify(p_.lp(), state_.x);
    res.x = std::move(state_.x);
    res.stats = stats_;
    return res;
  }

  SolverState& state() noexcept { return state_; }
  const SolveOptions& options() const noexcept { return opts_; }

 private:
  void update_steps() {
    coord_step_ = safety_ / l_max_;
    block_step_.resize(block_l_.size());
    for (std::size_t b = 0; b < block_l_.size(); ++b) block_step_[b] = safety_ / block_l_[b];
  }

  void restore() {
    if (!have_good_ || ++stats_.restarts > kMaxRestarts) {
      throw DivergedError("penalty objective became non-finite (beta = " +
                          std::to_string(p_.beta()) + ", step safety = " + std::to_string(safety_) + ")");
    }
    safety_ /= 2.0;
    update_steps();
    state_.x = snapshot_;
    refresh_residual(p_.lp(), state_);
  }

  const PenaltyProblem& p_;
  const SolveOptions& opts_;
  std::chrono::steady_clock::time_point start_;
  SolverState state_;
  SolveStats stats_;
  double safety_ = 1.0;
  double l_max_ = 0.0;
  double coord_step_ = 0.0;
  std::vector<double> block_l_;
  std::vector<double> block_step_;
  std::vector<double> snapshot_;
  bool have_good_ = false;
};

}  // namespace detail

/// Serial stochastic coordinate descent: uniform sampling with replacement,
/// residual refreshed every epoch (one pass worth of samples).
inline SolveResult solve(const PenaltyProblem& p, const SolveOptions& opts) {
  detail::Engine eng(p, opts);
  auto& st = eng.state();
  const std::size_t units = eng.units();
  if (units == 0 || eng.check() || opts.max_steps == 0) return eng.finish(1);
  const std::size_t interval = opts.check_interval ? opts.check_interval : units;
  Rng rng = make_stream(opts.seed, 0);
  std::vector<double> s1, s2;
  while (st.steps < opts.max_steps) {
    eng.step_unit<false>(uniform_index(rng, units), s1, s2);
    ++st.steps;
    const bool end = st.steps == opts.max_steps;
    if (st.steps % units == 0 || end) {
      refresh_residual(p.lp(), st);
      ++st.epoch;
    }
    if (st.steps % interval == 0 || end) {
      if (eng.check()) break;
    }
  }
  return eng.finish(1);
}

/// Asynchronous parallel SCD. Workers sample and update coordinates
/// concurrently on shared x and r with per-component atomic
/// read-modify-write; an epoch barrier refreshes r from x. Checks happen at
/// epoch boundaries (check_interval is rounded up to whole epochs).
inline SolveResult solve_parallel(const PenaltyProblem& p, const SolveOptions& opts) {
  const std::size_t threads = opts.threads;
  if (threads < 1 || threads > opts.max_threads) {
    throw ConfigError("thread count must be in [1, " + std::to_string(opts.max_threads) + "]");
  }
  detail::Engine eng(p, opts);
  auto& st = eng.state();
  const std::size_t units = eng.units();
  if (units == 0 || eng.check() || opts.max_steps == 0) return eng.finish(threads);

  const std::size_t interval = opts.check_interval ? opts.check_interval : units;
  const std::size_t check_epochs = (interval + units - 1) / units;
  const std::size_t rows = p.lp().rows();

  std::size_t budget = std::min(units, opts.max_steps - st.steps);
  bool stop = false;
  std::exception_ptr error;
  std::unique_ptr<std::atomic_flag[]> locks;
  if (!opts.blocks.empty()) locks = std::make_unique<std::atomic_flag[]>(units);

  auto end_of_epoch = [&]() noexcept {
    try {
      st.steps += budget;
      ++st.epoch;
      const bool end = st.steps >= opts.max_steps;
      bool s = end;
      if ((end || st.epoch % check_epochs == 0) && eng.check()) s = true;
      budget = std::min(units, opts.max_steps - st.steps);
      stop = s || budget == 0;
    } catch (...) {
      error = std::current_exception();
      stop = true;
    }
  };
  std::barrier<> steps_done(static_cast<std::ptrdiff_t>(threads));
  std::barrier<decltype(end_of_epoch)> refreshed(static_cast<std::ptrdiff_t>(threads), end_of_epoch);

  auto worker = [&](std::size_t t) {
    Rng rng = make_stream(opts.seed, t);
    std::vector<double> s1, s2;
    while (true) {
      const std::size_t mine = budget / threads + (t < budget % threads ? 1 : 0);
      for (std::size_t k = 0; k < mine; ++k) {
        const std::size_t u = uniform_index(rng, units);
        if (locks) {
          while (locks[u].test_and_set(std::memory_order_acquire)) {
            while (locks[u].test(std::memory_order_relaxed)) std::this_thread::yield();
          }
          eng.step_unit<true>(u, s1, s2);
          locks[u].clear(std::memory_order_release);
        } else {
          eng.step_unit<true>(u, s1, s2);
        }
      }
      steps_done.arrive_and_wait();
      eng.refresh_rows(rows * t / threads, rows * (t + 1) / threads);
      refreshed.arrive_and_wait();
      if (stop) break;
    }
  };

  {
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker, t);
    worker(0);
  }
  if (error) std::rethrow_exception(error);
  return eng.finish(threads);
}

}  // namespace lpround
