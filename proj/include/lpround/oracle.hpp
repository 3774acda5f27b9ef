#pragma once

// Exact references for small instances. Needs Eigen.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "lpround/errors.hpp"
#include "lpround/lp.hpp"
#include "lpround/penalty.hpp"
#include "lpround/problems.hpp"
#include "lpround/rounding.hpp"

namespace lpround::oracle {

struct LpSolution {
  std::vector<double> x;
  std::vector<double> u;  ///< multipliers of A x = b for the minimization form
  double objective = 0.0; ///< user sense
  bool exact = false;     ///< vertex enumeration (true) or iterative (false)
};

struct EnumerationLimits {
  std::size_t max_rows = 12;
  double max_candidates = 4e6;
  double tol = 1e-9;
};

namespace detail {

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Optimal vertex by enumerating bases of the reduced system. Fixed columns
/// are substituted, dependent rows dropped, and each nonbasic column placed
/// at one of its finite bounds. The first basis that is both primal and dual
/// feasible is optimal; its duals B^{-T} c_B are returned.
inline LpSolution enumerate_lp(const StandardFormLp& lp, const EnumerationLimits& lim = {}) {
  const std::size_t m = lp.rows(), n = lp.cols();
  const auto& lo = lp.lower();
  const auto& hi = lp.upper();
  const auto& cost = lp.cost();

  std::vector<double> x_full(n, 0.0);
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < n; ++j) {
    if (lo[j] == hi[j]) {
      x_full[j] = lo[j];
    } else {
      free_cols.push_back(j);
    }
  }
  const std::size_t nf = free_cols.size();
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(nf));
  for (std::size_t q = 0; q < nf; ++q) {
    const auto rows = lp.matrix().col_rows(free_cols[q]);
    const auto vals = lp.matrix().col_values(free_cols[q]);
    for (std::size_t k = 0; k < rows.size(); ++k) mat(rows[k], static_cast<Eigen::Index>(q)) = vals[k];
  }
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
  {
    const auto r0 = residual(lp, x_full);
    for (std::size_t i = 0; i < m; ++i) rhs(static_cast<Eigen::Index>(i)) = -r0[i];
  }

  // Independent rows: pivot columns of a rank-revealing QR of M^T.
  std::vector<std::size_t> rows_kept;
  if (m > 0 && nf > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mat.transpose());
    qr.setThreshold(1e-10);
    const auto rank = static_cast<std::size_t>(qr.rank());
    for (std::size_t k = 0; k < rank; ++k) rows_kept.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(static_cast<Eigen::Index>(k))));
    std::sort(rows_kept.begin(), rows_kept.end());
  }
  const std::size_t r = rows_kept.size();
  if (r > lim.max_rows) throw TooLargeError("enumeration limited to " + std::to_string(lim.max_rows) + " independent rows");
  std::size_t two_sided = 0;
  for (auto j : free_cols) two_sided += std::isfinite(lo[j]) && std::isfinite(hi[j]);
  const double candidates =
      detail::binomial(nf, r) * std::pow(2.0, static_cast<double>(std::min(two_sided, nf - r)));
  if (candidates > lim.max_candidates) throw TooLargeError("too many basis candidates for enumeration");

  Eigen::MatrixXd mr(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(nf));
  Eigen::VectorXd br(static_cast<Eigen::Index>(r));
  for (std::size_t k = 0; k < r; ++k) {
    mr.row(static_cast<Eigen::Index>(k)) = mat.row(static_cast<Eigen::Index>(rows_kept[k]));
    br(static_cast<Eigen::Index>(k)) = rhs(static_cast<Eigen::Index>(rows_kept[k]));
  }
  const double scale = 1.0 + (m ? rhs.cwiseAbs().maxCoeff() : 0.0) + (m && nf ? mat.cwiseAbs().maxCoeff() : 0.0);
  const double tol = lim.tol * scale;

  std::vector<std::size_t> basis(r);
  std::iota(basis.begin(), basis.end(), 0);
  bool any_feasible = false;
  std::vector<char> is_basic(nf);
  std::vector<std::size_t> nonbasic;
  Eigen::VectorXd xf(static_cast<Eigen::Index>(nf));
  do {
    std::fill(is_basic.begin(), is_basic.end(), 0);
    for (auto q : basis) is_basic[q] = 1;
    nonbasic.clear();
    bool ok = true;
    for (std::size_t q = 0; q < nf; ++q) {
      if (is_basic[q]) continue;
      const auto j = free_cols[q];
      if (!std::isfinite(lo[j]) && !std::isfinite(hi[j])) ok = false;
      nonbasic.push_back(q);
    }
    if (!ok) continue;

    Eigen::MatrixXd bm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    for (std::size_t k = 0; k < r; ++k) bm.col(static_cast<Eigen::Index>(k)) = mr.col(static_cast<Eigen::Index>(basis[k]));
    Eigen::FullPivLU<Eigen::MatrixXd> lu;
    if (r > 0) {
      lu.compute(bm);
      if (lu.rank() < static_cast<Eigen::Index>(r)) continue;
    }

    Eigen::VectorXd cb(static_cast<Eigen::Index>(r));
    for (std::size_t k = 0; k < r; ++k) cb(static_cast<Eigen::Index>(k)) = cost[free_cols[basis[k]]];
    const Eigen::VectorXd y = r > 0 ? Eigen::VectorXd(bm.transpose().fullPivLu().solve(cb)) : Eigen::VectorXd();
    std::vector<double> reduced(nonbasic.size());
    for (std::size_t t = 0; t < nonbasic.size(); ++t) {
      const auto q = nonbasic[t];
      reduced[t] = cost[free_cols[q]] - (r > 0 ? mr.col(static_cast<Eigen::Index>(q)).dot(y) : 0.0);
    }

    // Mixed-radix walk over finite bound choices of the nonbasic columns.
    std::vector<int> choice(nonbasic.size(), 0);
    std::vector<int> radix(nonbasic.size());
    for (std::size_t t = 0; t < nonbasic.size(); ++t) {
      const auto j = free_cols[nonbasic[t]];
      radix[t] = (std::isfinite(lo[j]) ? 1 : 0) + (std::isfinite(hi[j]) ? 1 : 0);
    }
    while (true) {
      Eigen::VectorXd rest = br;
      for (std::size_t t = 0; t < nonbasic.size(); ++t) {
        const auto q = nonbasic[t];
        const auto j = free_cols[q];
        const bool at_lo = std::isfinite(lo[j]) && choice[t] == 0;
        const double v = at_lo ? lo[j] : hi[j];
        xf(static_cast<Eigen::Index>(q)) = v;
        if (r > 0) rest -= mr.col(static_cast<Eigen::Index>(q)) * v;
      }
      bool feasible = true;
      if (r > 0) {
        const Eigen::VectorXd xb = lu.solve(rest);
        for (std::size_t k = 0; k < r; ++k) {
          const auto q = basis[k];
          const auto j = free_cols[q];
          double v = xb(static_cast<Eigen::Index>(k));
          if (v < lo[j] - tol || v > hi[j] + tol) feasible = false;
          v = std::clamp(v, lo[j], hi[j]);
          xf(static_cast<Eigen::Index>(q)) = v;
        }
      }
      if (feasible && m > 0 && nf > 0) feasible = (mat * xf - rhs).cwiseAbs().maxCoeff() <= tol;
      if (feasible && m > 0 && nf == 0) feasible = rhs.cwiseAbs().maxCoeff() <= tol;
      if (feasible) {
        any_feasible = true;
        bool dual_ok = true;
        for (std::size_t t = 0; t < nonbasic.size() && dual_ok; ++t) {
          const auto j = free_cols[nonbasic[t]];
          const bool at_lo = std::isfinite(lo[j]) && choice[t] == 0;
          dual_ok = at_lo ? reduced[t] >= -tol : reduced[t] <= tol;
        }
        if (dual_ok) {
          LpSolution sol;
          sol.x = x_full;
          for (std::size_t q = 0; q < nf; ++q) sol.x[free_cols[q]] = xf(static_cast<Eigen::Index>(q));
          sol.u.assign(m, 0.0);
          for (std::size_t k = 0; k < r; ++k) sol.u[rows_kept[k]] = y(static_cast<Eigen::Index>(k));
          sol.objective = lp.objective(sol.x);
          sol.exact = true;
          return sol;
        }
      }
      std::size_t t = 0;
      while (t < choice.size() && ++choice[t] >= radix[t]) choice[t++] = 0;
      if (t == choice.size()) break;
    }
  } while (r > 0 && detail::next_combination(basis, nf));

  throw InfeasibleError(any_feasible ? "LP is unbounded" : "LP is infeasible");
}

// ---------------------------------------------------------------------------
// Penalty minimizer

struct QpSolution {
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Exact minimizer of the penalty objective over the box by a primal active
/// set method. Free-variable subproblems are solved through the
/// quasi-definite system
///   [ I/beta   A_F^T   ] [x_F]   [ x_bar_F/beta - (c - A^T u)_F ]
///   [ A_F     -I/beta  ] [ w ] = [ b - A_W x_W                  ]
/// with w = beta (A x - b), which avoids squaring the condition of A.
inline QpSolution solve_penalty(const PenaltyProblem& p, std::size_t max_iter = 10000) {
  const auto& lp = p.lp();
  const std::size_t m = lp.rows(), n = lp.cols();
  const double beta = p.beta();
  const auto& lo = lp.lower();
  const auto& hi = lp.upper();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (const auto& t : lp.matrix().triplets()) a(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;

  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = std::clamp(p.x_bar()[j], lo[j], hi[j]);
  // 0 free, -1 at lower, +1 at upper
  std::vector<int> state(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (lo[j] == hi[j] || x[j] == lo[j]) {
      state[j] = -1;
    } else if (x[j] == hi[j]) {
      state[j] = 1;
    }
  }
  const auto gradient = [&](const std::vector<double>& xv) {
    const auto r = residual(lp, xv);
    return p.gradient(xv, r);
  };

  QpSolution out;
  for (std::size_t it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    std::vector<std::size_t> fr;
    for (std::size_t j = 0; j < n; ++j) {
      if (state[j] == 0) fr.push_back(j);
    }
    const auto nfr = static_cast<Eigen::Index>(fr.size());
    const auto mm = static_cast<Eigen::Index>(m);
    std::vector<double> target = x;
    if (nfr > 0) {
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nfr + mm, nfr + mm);
      Eigen::VectorXd rhs(nfr + mm);
      for (Eigen::Index q = 0; q < nfr; ++q) {
        const auto j = fr[static_cast<std::size_t>(q)];
        k(q, q) = 1.0 / beta;
        k.block(nfr, q, mm, 1) = a.col(static_cast<Eigen::Index>(j));
        k.block(q, nfr, 1, mm) = a.col(static_cast<Eigen::Index>(j)).transpose();
        rhs(q) = p.x_bar()[j] / beta - p.linear_offset(j);
      }
      for (Eigen::Index i = 0; i < mm; ++i) {
        k(nfr + i, nfr + i) = -1.0 / beta;
        double s = lp.rhs()[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < n; ++j) {
          if (state[j] != 0) s -= a(i, static_cast<Eigen::Index>(j)) * x[j];
        }
        rhs(nfr + i) = s;
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);
      Eigen::VectorXd sol = lu.solve(rhs);
      for (int refine = 0; refine < 3; ++refine) sol += lu.solve(rhs - k * sol);
      for (Eigen::Index q = 0; q < nfr; ++q) target[fr[static_cast<std::size_t>(q)]] = sol(q);
    }

    // Largest step toward the subproblem minimizer that stays in the box.
    double step = 1.0;
    std::size_t blocking = n;
    for (auto j : fr) {
      const double d = target[j] - x[j];
      if (d < 0.0 && target[j] < lo[j]) {
        const double t = (lo[j] - x[j]) / d;
        if (t < step) step = t, blocking = j;
      } else if (d > 0.0 && target[j] > hi[j]) {
        const double t = (hi[j] - x[j]) / d;
        if (t < step) step = t, blocking = j;
      }
    }
    for (auto j : fr) x[j] = std::clamp(x[j] + step * (target[j] - x[j]), lo[j], hi[j]);
    if (blocking < n) {
      state[blocking] = (target[blocking] < lo[blocking]) ? -1 : 1;
      x[blocking] = state[blocking] < 0 ? lo[blocking] : hi[blocking];
      continue;
    }

    // Subproblem optimum reached: release the worst wrong-signed bound.
    const auto g = gradient(x);
    double worst = 0.0;
    std::size_t release = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (lo[j] == hi[j] || state[j] == 0) continue;
      const double viol = state[j] < 0 ? -g[j] : g[j];
      const double scale = 1e-12 * (1.0 + std::abs(p.linear_offset(j)) + beta);
      if (viol > scale && viol > worst) worst = viol, release = j;
    }
    if (release == n) {
      out.x = std::move(x);
      out.objective = p.objective(out.x);
      return out;
    }
    state[release] = 0;
  }
  throw DivergedError("active set method did not terminate");
}

/// Iterative reference: proximal method of multipliers with exact inner
/// solves, escalating beta tenfold whenever the residual fails to halve.
inline LpSolution high_accuracy_lp(const StandardFormLp& lp, double target = 1e-10, std::size_t max_rounds = 400) {
  const std::size_t m = lp.rows(), n = lp.cols();
  std::vector<double> u(m, 0.0), xbar(n, 0.0);
  double beta = 10.0, prev = kInf;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    PenaltyProblem p(lp, beta, u, xbar);
    const auto qp = solve_penalty(p);
    const auto r = residual(lp, qp.x);
    const double eps = inf_norm(r);
    for (std::size_t i = 0; i < m; ++i) u[i] -= beta * r[i];
    const double move = distance(qp.x, xbar);
    xbar = qp.x;
    if (eps <= target && move <= target) {
      LpSolution sol;
      sol.x = xbar;
      sol.u = u;
      sol.objective = lp.objective(sol.x);
      return sol;
    }
    if (eps > 0.5 * prev) beta = std::min(beta * 10.0, 1e10);
    prev = eps;
  }
  throw DivergedError("high-accuracy LP reference did not reach its tolerance");
}

/// Vertex enumeration when the instance is small enough, otherwise the
/// iterative reference.
inline LpSolution exact_lp(const StandardFormLp& lp, const EnumerationLimits& lim = {}) {
  try {
    return enumerate_lp(lp, lim);
  } catch (const TooLargeError&) {
    return high_accuracy_lp(lp);
  }
}

// ---------------------------------------------------------------------------
// Vertex cover LP by minimum cut

namespace detail {

class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n) : adj_(n), level_(n), it_(n) {}

  void add_edge(std::size_t a, std::size_t b, double cap) {
    adj_[a].push_back(arcs_.size());
    arcs_.push_back({b, cap});
    adj_[b].push_back(arcs_.size());
    arcs_.push_back({a, 0.0});
  }

  double run(std::size_t s, std::size_t t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (true) {
        const double f = dfs(s, t, std::numeric_limits<double>::infinity());
        if (f <= 0.0) break;
        flow += f;
      }
    }
    return flow;
  }

  /// Vertices reachable from s in the final residual graph.
  std::vector<char> source_side(std::size_t s) const {
    std::vector<char> seen(adj_.size(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto id : adj_[v]) {
        const auto& e = arcs_[id];
        if (e.cap > kEps && !seen[e.to]) {
          seen[e.to] = 1;
          stack.push_back(e.to);
        }
      }
    }
    return seen;
  }

 private:
  static constexpr double kEps = 1e-12;
  struct Arc {
    std::size_t to;
    double cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (auto id : adj_[v]) {
        const auto& e = arcs_[id];
        if (e.cap > kEps && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(std::size_t v, std::size_t t, double pushed) {
    if (v == t) return pushed;
    for (auto& i = it_[v]; i < adj_[v].size(); ++i) {
      const auto id = adj_[v][i];
      auto& e = arcs_[id];
      if (e.cap <= kEps || level_[e.to] != level_[v] + 1) continue;
      const double got = dfs(e.to, t, std::min(pushed, e.cap));
      if (got > 0.0) {
        e.cap -= got;
        arcs_[id ^ 1].cap += got;
        return got;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

}  // namespace detail

/// Vertex cover LP optimum through the bipartite double cover: the LP value
/// is half the minimum weight cover of the double cover, which is a minimum
/// s-t cut. The returned point is half-integral.
inline LpSolution vertex_cover_lp(const Graph& g) {
  const std::size_t n = g.n(), s = 2 * n, t = 2 * n + 1;
  detail::MaxFlow mf(2 * n + 2);
  double big = 1.0;
  for (double c : g.vertex_costs()) big += c;
  for (std::size_t v = 0; v < n; ++v) {
    mf.add_edge(s, v, g.vertex_cost(v));
    mf.add_edge(n + v, t, g.vertex_cost(v));
  }
  for (const auto& e : g.edges()) {
    mf.add_edge(e.u, n + e.v, big);
    mf.add_edge(e.v, n + e.u, big);
  }
  const double cut = mf.run(s, t);
  const auto side = mf.source_side(s);
  LpSolution sol;
  sol.x.resize(n);
  for (std::size_t v = 0; v < n; ++v) sol.x[v] = 0.5 * ((side[v] ? 0.0 : 1.0) + (side[n + v] ? 1.0 : 0.0));
  sol.objective = 0.5 * cut;
  sol.exact = true;
  return sol;
}

// ---------------------------------------------------------------------------
// Exhaustive integral solvers

/// Minimum weight vertex cover by branching on uncovered edges (n <= 25).
inline IntegralSolution exact_vertex_cover(const Graph& g) {
  if (g.n() > 25) throw TooLargeError("exact vertex cover limited to 25 vertices");
  std::vector<char> in(g.n(), 0), best_in;
  double best = kInf;
  const std::function<void(double)> rec = [&](double cost) {
    if (cost >= best) return;
    for (const auto& e : g.edges()) {
      if (in[e.u] || in[e.v]) continue;
      for (auto w : {e.u, e.v}) {
        in[w] = 1;
        rec(cost + g.vertex_cost(w));
        in[w] = 0;
      }
      return;
    }
    best = cost;
    best_in = in;
  };
  rec(0.0);
  IntegralSolution out;
  for (std::size_t v = 0; v < g.n(); ++v) {
    if (best_in[v]) out.selected.push_back(v);
  }
  check_vertex_cover(g, out);
  return out;
}

/// Minimum cost set cover by branching on the first uncovered element (<= 25 sets).
inline IntegralSolution exact_set_cover(const SetSystem& ss) {
  if (ss.size() > 25) throw TooLargeError("exact set cover limited to 25 sets");
  std::vector<int> covered(ss.universe(), 0);
  std::vector<char> in(ss.size(), 0), best_in;
  double best = kInf;
  const auto costs = ss.costs();
  const std::function<void(double)> rec = [&](double cost) {
    if (cost >= best) return;
    std::size_t a = 0;
    while (a < ss.universe() && covered[a]) ++a;
    if (a == ss.universe()) {
      best = cost;
      best_in = in;
      return;
    }
    for (const auto& mb : ss.members(a)) {
      in[mb.set] = 1;
      for (auto e : ss.set(mb.set).elements) ++covered[e];
      rec(cost + costs[mb.set]);
      for (auto e : ss.set(mb.set).elements) --covered[e];
      in[mb.set] = 0;
    }
  };
  rec(0.0);
  if (best_in.empty()) throw InfeasibleError("set system has an uncoverable element");
  IntegralSolution out;
  for (std::size_t s = 0; s < ss.size(); ++s) {
    if (best_in[s]) out.selected.push_back(s);
  }
  check_set_cover(ss, out);
  return out;
}

/// Maximum cost packing by include/exclude search with capacity pruning (<= 25 sets).
inline IntegralSolution exact_set_packing(const SetSystem& ss) {
  if (ss.size() > 25) throw TooLargeError("exact set packing limited to 25 sets");
  std::vector<double> load(ss.universe(), 0.0);
  std::vector<char> in(ss.size(), 0), best_in(ss.size(), 0);
  double best = -1.0;
  const auto costs = ss.costs();
  std::vector<double> suffix(ss.size() + 1, 0.0);
  for (std::size_t s = ss.size(); s-- > 0;) suffix[s] = suffix[s + 1] + costs[s];
  const std::function<void(std::size_t, double)> rec = [&](std::size_t s, double cost) {
    if (cost + suffix[s] <= best) return;
    if (s == ss.size()) {
      best = cost;
      best_in = in;
      return;
    }
    const auto& set = ss.set(s);
    bool fits = true;
    for (std::size_t q = 0; q < set.elements.size(); ++q) {
      if (load[set.elements[q]] + set.weights[q] > 1.0 + 1e-12) fits = false;
    }
    if (fits) {
      for (std::size_t q = 0; q < set.elements.size(); ++q) load[set.elements[q]] += set.weights[q];
      in[s] = 1;
      rec(s + 1, cost + costs[s]);
      in[s] = 0;
      for (std::size_t q = 0; q < set.elements.size(); ++q) load[set.elements[q]] -= set.weights[q];
    }
    rec(s + 1, cost);
  };
  rec(0, 0.0);
  IntegralSolution out;
  for (std::size_t s = 0; s < ss.size(); ++s) {
    if (best_in[s]) out.selected.push_back(s);
  }
  check_set_packing(ss, out);
  return out;
}

/// Maximum weight independent set as packing over edge elements.
inline IntegralSolution exact_independent_set(const Graph& g) { return exact_set_packing(independent_set_system(g)); }

/// Minimum multiway cut over all labelings of non-terminals (n <= 12, k <= 4).
inline IntegralSolution exact_multiway_cut(const MultiwayInstance& mi) {
  const std::size_t n = mi.graph.n(), k = mi.k();
  if (n > 12 || k > 4) throw TooLargeError("exact multiway cut limited to 12 vertices and 4 terminals");
  std::vector<std::size_t> free;
  IntegralSolution cur;
  cur.assignment.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (auto l = mi.terminal_label(v)) {
      cur.assignment[v] = *l;
    } else {
      free.push_back(v);
    }
  }
  std::uint64_t total = 1;
  for (std::size_t q = 0; q < free.size(); ++q) total *= k;
  IntegralSolution best;
  best.cost = kInf;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (auto v : free) {
      cur.assignment[v] = c % k;
      c /= k;
    }
    check_multiway_cut(mi, cur);
    if (cur.cost < best.cost) best = cur;
  }
  return best;
}

}  // namespace lpround::oracle
