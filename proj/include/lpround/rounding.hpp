#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpround/errors.hpp"
#include "lpround/lp.hpp"
#include "lpround/problems.hpp"
#include "lpround/random.hpp"
#include "lpround/sparse_matrix.hpp"

namespace lpround {

/// Values of the combinatorial decision variables.
struct FractionalSolution {
  std::vector<double> x;
  ApproxCertificate certificate;
};

struct IntegralSolution {
  /// Chosen vertices or sets, increasing. Empty for multiway cut.
  std::vector<std::size_t> selected;
  /// Multiway cut: terminal label of every vertex.
  std::vector<std::size_t> assignment;
  double cost = 0.0;
  bool feasible = false;
  /// First violated constraint when infeasible.
  std::string violation;
};

struct PackingStats {
  std::size_t sampled = 0;
  std::size_t deleted = 0;
  /// Sets whose sampling probability x_s / (k theta) exceeded 1 and was capped.
  std::size_t capped = 0;
};

namespace detail {

inline void check_unit_box(std::span<const double> x, const char* who) {
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError(std::string(who) + ": values must lie in [0,1]");
  }
}

/// x / (1 - alpha) clipped to [0,1]. A few ulps of extra inflation keep the
/// covering inequalities exact after rounding of the division.
inline std::vector<double> inflate(std::span<const double> x, double alpha) {
  double scale = 1.0 / (1.0 - alpha);
  if (alpha > 0.0) scale *= 1.0 + 4.0 * DBL_EPSILON;
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = std::clamp(x[j] * scale, 0.0, 1.0);
  return out;
}

inline double weighted_cost(std::span<const double> costs, std::span<const std::size_t> chosen) {
  double s = 0.0;
  for (auto j : chosen) s += costs[j];
  return s;
}

inline double fractional_cost(std::span<const double> costs, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += costs[j] * x[j];
  return s;
}

/// Contract check with a little room for summation order.
inline bool within_factor(double cost, double factor, double frac) {
  return cost <= factor * frac + 1e-9 * std::max(1.0, std::abs(factor * frac));
}

}  // namespace detail

/// Largest violation max_e (1 - x_u - x_v)_+ of the edge constraints.
inline double vertex_cover_violation(const Graph& g, std::span<const double> x) {
  double worst = 0.0;
  for (const auto& e : g.edges()) worst = std::max(worst, 1.0 - (x[e.u] + x[e.v]));
  return worst;
}

/// Largest violation max_i (b_i - A_i x)_+ of A x >= b.
inline double covering_violation(const SparseMatrix& a, std::span<const double> b, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) worst = std::max(worst, b[i] - a.row_dot(i, x));
  return worst;
}

/// Element-by-set incidence matrix of a set system (row a, column s, value 1).
inline SparseMatrix incidence_matrix(const SetSystem& ss) {
  std::vector<Triplet> t;
  for (std::size_t a = 0; a < ss.universe(); ++a) {
    for (const auto& mb : ss.members(a)) t.push_back({a, mb.set, 1.0});
  }
  return SparseMatrix(ss.universe(), ss.size(), std::move(t));
}

/// Scales an edge-violating point by (1 - eps)^{-1} and clips to [0,1].
inline FractionalSolution repair_vertex_cover(const Graph& g, std::span<const double> x, double eps) {
  if (x.size() != g.n()) throw DimensionError("one value per vertex expected");
  if (!(eps >= 0.0 && eps < 1.0)) throw PreconditionError("repair needs eps in [0,1)");
  detail::check_unit_box(x, "repair_vertex_cover");
  // eps is usually a measured violation; allow for its own rounding.
  if (vertex_cover_violation(g, x) > eps + 1e-12) throw PreconditionError("edge violation exceeds eps");
  FractionalSolution fs;
  fs.x = eps > 0.0 ? detail::inflate(x, eps) : std::vector<double>(x.begin(), x.end());
  for (const auto& e : g.edges()) {
    if (fs.x[e.u] + fs.x[e.v] < 1.0) {
      throw RoundingFailure("repaired point misses edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
  }
  return fs;
}

/// Covering repair A x >= b with alpha = eps / q.
inline FractionalSolution repair_covering(const SparseMatrix& a, std::span<const double> b,
                                          std::span<const double> x, double eps, double q = 1.0) {
  if (x.size() != a.cols() || b.size() != a.rows()) throw DimensionError("covering dimensions");
  if (!(q > 0.0)) throw PreconditionError("q(P) must be positive");
  const double alpha = eps / q;
  if (!(eps >= 0.0) || !(alpha < 1.0)) throw PreconditionError("repair needs 0 <= eps < q(P)");
  detail::check_unit_box(x, "repair_covering");
  FractionalSolution fs;
  fs.x = alpha > 0.0 ? detail::inflate(x, alpha) : std::vector<double>(x.begin(), x.end());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (a.row_dot(i, fs.x) < b[i]) throw RoundingFailure("repaired point violates covering row " + std::to_string(i));
  }
  return fs;
}

/// Exact q(P): the least infeasibility max_i (b_i - A_i x)_+ over infeasible
/// binary x. Only the support of one violated row needs enumerating, since
/// setting every other variable to 1 can only lower the other rows' deficit.
inline double exact_q(const SparseMatrix& a, std::span<const double> b, std::size_t max_row_support = 20) {
  double best = kInf;
  std::vector<double> x(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto cols = a.row_cols(i);
    if (cols.size() > max_row_support) throw TooLargeError("row support too large for exact q(P)");
    const std::uint64_t count = std::uint64_t{1} << cols.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      std::fill(x.begin(), x.end(), 1.0);
      for (std::size_t q = 0; q < cols.size(); ++q) x[cols[q]] = (mask >> q) & 1U ? 1.0 : 0.0;
      const double own = b[i] - a.row_dot(i, x);
      if (own <= 0.0) continue;
      best = std::min(best, covering_violation(a, b, x));
    }
  }
  return best;
}

/// Packing repair for A^T u <= c: u / (1 + alpha) with the tight
/// alpha = max_i ((A_:i^T u - c_i) / c_i)_+.
inline FractionalSolution repair_packing(const SparseMatrix& a, std::span<const double> c,
                                         std::span<const double> u) {
  if (u.size() != a.rows() || c.size() != a.cols()) throw DimensionError("packing dimensions");
  detail::check_unit_box(u, "repair_packing");
  double alpha = 0.0;
  for (std::size_t i = 0; i < a.cols(); ++i) {
    if (!(c[i] > 0.0)) throw PreconditionError("packing capacities must be positive");
    alpha = std::max(alpha, (a.col_dot(i, u) - c[i]) / c[i]);
  }
  FractionalSolution fs;
  fs.x.assign(u.begin(), u.end());
  if (alpha > 0.0) {
    const double scale = (1.0 / (1.0 + alpha)) * (1.0 - 4.0 * DBL_EPSILON);
    for (double& v : fs.x) v *= scale;
  }
  for (std::size_t i = 0; i < a.cols(); ++i) {
    if (a.col_dot(i, fs.x) > c[i]) throw RoundingFailure("repaired point violates packing column " + std::to_string(i));
  }
  return fs;
}

/// Transposed packing constraints of a set system: column i holds one row of
/// packing_rows(ss), so set packing reads A^T x <= 1.
inline SparseMatrix packing_matrix(const SetSystem& ss) {
  const auto rows = packing_rows(ss);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [s, w] : rows[i]) t.push_back({s, i, w});
  }
  return SparseMatrix(ss.size(), rows.size(), std::move(t));
}

/// Re-evaluates cost and cover validity; returns feasibility.
inline bool check_vertex_cover(const Graph& g, IntegralSolution& s) {
  std::vector<char> in(g.n(), 0);
  for (auto v : s.selected) in[v] = 1;
  s.cost = detail::weighted_cost(g.vertex_costs(), s.selected);
  s.feasible = true;
  s.violation.clear();
  for (const auto& e : g.edges()) {
    if (!in[e.u] && !in[e.v]) {
      s.feasible = false;
      s.violation = "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") uncovered";
      break;
    }
  }
  return s.feasible;
}

/// Half-rounding: every vertex with x_v >= 1/2.
inline IntegralSolution round_vertex_cover(const Graph& g, std::span<const double> x) {
  if (x.size() != g.n()) throw DimensionError("one value per vertex expected");
  if (vertex_cover_violation(g, x) > 0.0) throw PreconditionError("fractional point is not a vertex cover");
  IntegralSolution out;
  for (std::size_t v = 0; v < g.n(); ++v) {
    if (x[v] >= 0.5) out.selected.push_back(v);
  }
  if (!check_vertex_cover(g, out)) throw RoundingFailure(out.violation);
  if (!detail::within_factor(out.cost, 2.0, detail::fractional_cost(g.vertex_costs(), x))) {
    throw RoundingFailure("half-rounding exceeded twice the fractional cost");
  }
  return out;
}

/// Re-evaluates cost and cover validity; returns feasibility.
inline bool check_set_cover(const SetSystem& ss, IntegralSolution& s) {
  std::vector<char> covered(ss.universe(), 0);
  for (auto j : s.selected) {
    for (auto a : ss.set(j).elements) covered[a] = 1;
  }
  s.cost = detail::weighted_cost(ss.costs(), s.selected);
  s.feasible = true;
  s.violation.clear();
  for (std::size_t a = 0; a < ss.universe(); ++a) {
    if (!covered[a]) {
      s.feasible = false;
      s.violation = "element " + std::to_string(a) + " uncovered";
      break;
    }
  }
  return s.feasible;
}

/// Re-evaluates cost and capacity validity (every element's selected weight <= 1).
inline bool check_set_packing(const SetSystem& ss, IntegralSolution& s) {
  std::vector<double> load(ss.universe(), 0.0);
  for (auto j : s.selected) {
    const auto& set = ss.set(j);
    for (std::size_t q = 0; q < set.elements.size(); ++q) load[set.elements[q]] += set.weights[q];
  }
  s.cost = detail::weighted_cost(ss.costs(), s.selected);
  s.feasible = true;
  s.violation.clear();
  for (std::size_t a = 0; a < ss.universe(); ++a) {
    if (load[a] > 1.0 + 1e-12) {
      s.feasible = false;
      s.violation = "element " + std::to_string(a) + " over capacity";
      break;
    }
  }
  return s.feasible;
}

/// Threshold rounding: every set with x_s >= 1/f.
inline IntegralSolution round_set_cover_threshold(const SetSystem& ss, std::span<const double> x, double f) {
  if (x.size() != ss.size()) throw DimensionError("one value per set expected");
  if (!(f >= 1.0)) throw ConfigError("frequency f must be >= 1");
  const auto inc = incidence_matrix(ss);
  if (covering_violation(inc, std::vector<double>(ss.universe(), 1.0), x) > 0.0) {
    throw PreconditionError("fractional point is not a set cover");
  }
  IntegralSolution out;
  for (std::size_t s = 0; s < ss.size(); ++s) {
    if (x[s] >= 1.0 / f) out.selected.push_back(s);
  }
  if (!check_set_cover(ss, out)) throw RoundingFailure(out.violation);
  if (!detail::within_factor(out.cost, f, detail::fractional_cost(ss.costs(), x))) {
    throw RoundingFailure("threshold rounding exceeded f times the fractional cost");
  }
  return out;
}

/// Number of folded inclusion trials, ceil(ln 2N).
inline double set_cover_amplification(std::size_t universe) {
  return std::max(1.0, std::ceil(std::log(2.0 * static_cast<double>(std::max<std::size_t>(1, universe)))));
}

/// Includes set s with probability min(1, d x_s), d = ceil(ln 2N). A sample
/// that misses an element is returned with feasible = false.
inline IntegralSolution round_set_cover_randomized(const SetSystem& ss, std::span<const double> x,
                                                   std::uint64_t seed) {
  if (x.size() != ss.size()) throw DimensionError("one value per set expected");
  detail::check_unit_box(x, "round_set_cover_randomized");
  const double d = set_cover_amplification(ss.universe());
  Rng rng(seed);
  IntegralSolution out;
  for (std::size_t s = 0; s < ss.size(); ++s) {
    if (uniform_unit(rng) < std::min(1.0, d * x[s])) out.selected.push_back(s);
  }
  check_set_cover(ss, out);
  return out;
}

/// Sampling and deletion rounding for weighted set packing. Set s is sampled
/// with probability min(1, x_s / (k theta)); a sampled s is deleted when, at
/// some element a of s, the sampled sets of weight >= w_{a,s} (s included)
/// carry total weight above 1.
inline IntegralSolution round_set_packing(const SetSystem& ss, std::span<const double> x, double k, double theta,
                                          std::uint64_t seed, PackingStats* stats = nullptr) {
  if (x.size() != ss.size()) throw DimensionError("one value per set expected");
  if (!(theta > 0.0) || !(k > 0.0)) throw ConfigError("k and theta must be positive");
  detail::check_unit_box(x, "round_set_packing");
  Rng rng(seed);
  PackingStats st;
  std::vector<char> chosen(ss.size(), 0);
  for (std::size_t s = 0; s < ss.size(); ++s) {
    const double p = x[s] / (k * theta);
    if (p > 1.0) ++st.capped;
    if (uniform_unit(rng) < std::min(1.0, p)) {
      chosen[s] = 1;
      ++st.sampled;
    }
  }
  std::vector<char> marked(ss.size(), 0);
  for (std::size_t a = 0; a < ss.universe(); ++a) {
    const auto mem = ss.members(a);
    for (const auto& mb : mem) {
      if (!chosen[mb.set]) continue;
      double heavier = 0.0;
      for (const auto& other : mem) {
        if (chosen[other.set] && other.weight >= mb.weight) heavier += other.weight;
      }
      if (heavier > 1.0) marked[mb.set] = 1;
    }
  }
  IntegralSolution out;
  for (std::size_t s = 0; s < ss.size(); ++s) {
    if (!chosen[s]) continue;
    if (marked[s]) {
      ++st.deleted;
    } else {
      out.selected.push_back(s);
    }
  }
  if (stats) *stats = st;
  if (!check_set_packing(ss, out)) throw RoundingFailure(out.violation);
  return out;
}

/// Cut cost of a labeling; sets feasible when every terminal keeps its label.
inline bool check_multiway_cut(const MultiwayInstance& mi, IntegralSolution& s) {
  const auto& g = mi.graph;
  s.cost = 0.0;
  for (const auto& e : g.edges()) {
    if (s.assignment[e.u] != s.assignment[e.v]) s.cost += e.cost;
  }
  s.feasible = true;
  s.violation.clear();
  for (std::size_t j = 0; j < mi.k(); ++j) {
    if (s.assignment[mi.terminals[j]] != j) {
      s.feasible = false;
      s.violation = "terminal " + std::to_string(j) + " reassigned";
      break;
    }
  }
  return s.feasible;
}

/// Threshold rounding over simplex coordinates x[v*k + i]: draw theta in
/// (0,1) and a random order sigma of labels; v takes the first label i in
/// sigma with x_v^i >= theta, or the last label of sigma if none qualifies.
inline IntegralSolution round_multiway_cut(const MultiwayInstance& mi, std::span<const double> x,
                                           std::uint64_t seed) {
  const std::size_t n = mi.graph.n(), k = mi.k();
  if (x.size() != n * k) throw DimensionError("expected n*k simplex coordinates");
  for (std::size_t v = 0; v < n; ++v) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(x[v * k + i] >= -1e-12)) throw PreconditionError("negative simplex coordinate");
      sum += x[v * k + i];
    }
    if (std::abs(sum - 1.0) > 1e-9) throw PreconditionError("vertex " + std::to_string(v) + " not on the simplex");
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (x[mi.terminals[j] * k + j] != 1.0) throw PreconditionError("terminal not at its corner");
  }
  Rng rng(seed);
  double theta = 0.0;
  while (theta == 0.0) theta = uniform_unit(rng);
  std::vector<std::size_t> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 0);
  for (std::size_t i = k; i > 1; --i) std::swap(sigma[i - 1], sigma[uniform_index(rng, i)]);

  IntegralSolution out;
  out.assignment.assign(n, sigma[k - 1]);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t q = 0; q + 1 < k; ++q) {
      if (x[v * k + sigma[q]] >= theta) {
        out.assignment[v] = sigma[q];
        break;
      }
    }
  }
  if (!check_multiway_cut(mi, out)) throw RoundingFailure(out.violation);
  return out;
}

/// Best feasible result of `reps` runs with seeds derive_seed(master, r).
inline IntegralSolution best_of(const std::function<IntegralSolution(std::uint64_t)>& rounder, std::size_t reps,
                                std::uint64_t master, Sense sense = Sense::minimize) {
  if (reps == 0) throw ConfigError("best_of needs at least one repetition");
  std::optional<IntegralSolution> best;
  for (std::size_t r = 0; r < reps; ++r) {
    IntegralSolution s = rounder(derive_seed(master, r));
    if (!s.feasible) continue;
    const bool better = !best || (sense == Sense::minimize ? s.cost < best->cost : s.cost > best->cost);
    if (better) best = std::move(s);
  }
  if (!best) throw RoundingFailure("all " + std::to_string(reps) + " rounding repetitions failed");
  return *best;
}

}  // namespace lpround
