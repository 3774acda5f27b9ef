#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "lpround/errors.hpp"
#include "lpround/lp.hpp"
#include "lpround/scd.hpp"
#include "lpround/sparse_matrix.hpp"

namespace lpround {

struct Edge {
  std::size_t u;
  std::size_t v;
  double cost = 1.0;
};

/// Undirected graph with vertex and edge costs.
///
/// Construction normalizes the edge list: endpoints ordered u < v, parallel
/// edges merged with their costs summed, self-loops dropped and counted.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t n, std::vector<Edge> edges, std::vector<double> vertex_costs = {})
      : n_(n), vertex_costs_(std::move(vertex_costs)) {
    if (vertex_costs_.empty()) vertex_costs_.assign(n, 1.0);
    if (vertex_costs_.size() != n) throw DimensionError("vertex cost count != vertex count");
    for (double c : vertex_costs_) {
      if (!(c >= 0.0) || !std::isfinite(c)) throw PreconditionError("vertex costs must be finite and >= 0");
    }
    std::map<std::pair<std::size_t, std::size_t>, double> merged;
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n) throw DimensionError("edge endpoint out of range");
      if (!(e.cost >= 0.0) || !std::isfinite(e.cost)) throw PreconditionError("edge costs must be finite and >= 0");
      if (e.u == e.v) {
        ++self_loops_;
        continue;
      }
      merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.cost;
    }
    edges_.reserve(merged.size());
    for (const auto& [key, cost] : merged) edges_.push_back({key.first, key.second, cost});

    inc_start_.assign(n + 1, 0);
    for (const auto& e : edges_) {
      ++inc_start_[e.u + 1];
      ++inc_start_[e.v + 1];
    }
    for (std::size_t v = 0; v < n; ++v) inc_start_[v + 1] += inc_start_[v];
    incident_.resize(2 * edges_.size());
    std::vector<std::size_t> next(inc_start_.begin(), inc_start_.end() - 1);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      incident_[next[edges_[e].u]++] = e;
      incident_[next[edges_[e].v]++] = e;
    }
    labels_.resize(n);
    std::iota(labels_.begin(), labels_.end(), std::int64_t{0});
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<double>& vertex_costs() const noexcept { return vertex_costs_; }
  double vertex_cost(std::size_t v) const noexcept { return vertex_costs_[v]; }

  /// Edge indices incident to v.
  std::span<const std::size_t> incident(std::size_t v) const noexcept {
    return {incident_.data() + inc_start_[v], inc_start_[v + 1] - inc_start_[v]};
  }
  std::size_t degree(std::size_t v) const noexcept { return inc_start_[v + 1] - inc_start_[v]; }
  std::size_t max_degree() const noexcept {
    std::size_t d = 0;
    for (std::size_t v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
  }
  std::size_t other(std::size_t e, std::size_t v) const noexcept {
    return edges_[e].u == v ? edges_[e].v : edges_[e].u;
  }

  std::size_t self_loops_dropped() const noexcept { return self_loops_; }

  /// Label of each dense vertex index in the source file.
  const std::vector<std::int64_t>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::int64_t> labels) {
    if (labels.size() != n_) throw DimensionError("label count != vertex count");
    labels_ = std::move(labels);
  }
  /// Dense index of a source label.
  std::optional<std::size_t> index_of(std::int64_t label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> vertex_costs_;
  std::vector<std::size_t> inc_start_{0};
  std::vector<std::size_t> incident_;
  std::vector<std::int64_t> labels_;
  std::size_t self_loops_ = 0;
};

struct WeightedSet {
  std::vector<std::size_t> elements;
  std::vector<double> weights;  ///< w_{a,s}; empty means all ones
  double cost = 1.0;
};

/// Family of weighted sets over the universe {0, ..., N-1}.
class SetSystem {
 public:
  struct Membership {
    std::size_t set;
    double weight;
  };

  SetSystem() = default;

  SetSystem(std::size_t universe, std::vector<WeightedSet> sets) : universe_(universe), sets_(std::move(sets)) {
    member_start_.assign(universe + 1, 0);
    for (auto& s : sets_) {
      if (s.weights.empty()) s.weights.assign(s.elements.size(), 1.0);
      if (s.weights.size() != s.elements.size()) throw DimensionError("weight count != element count");
      if (!(s.cost >= 0.0) || !std::isfinite(s.cost)) throw PreconditionError("set costs must be finite and >= 0");
      std::vector<std::size_t> order(s.elements.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return s.elements[a] < s.elements[b]; });
      WeightedSet sorted{{}, {}, s.cost};
      for (auto k : order) {
        const auto a = s.elements[k];
        const double w = s.weights[k];
        if (a >= universe) throw DimensionError("element " + std::to_string(a) + " outside universe");
        if (!(w > 0.0) || !std::isfinite(w)) throw PreconditionError("element weights must be positive");
        if (!sorted.elements.empty() && sorted.elements.back() == a) {
          throw PreconditionError("element " + std::to_string(a) + " repeated within a set");
        }
        sorted.elements.push_back(a);
        sorted.weights.push_back(w);
        ++member_start_[a + 1];
      }
      s = std::move(sorted);
    }
    for (std::size_t a = 0; a < universe; ++a) member_start_[a + 1] += member_start_[a];
    members_.resize(member_start_[universe]);
    std::vector<std::size_t> next(member_start_.begin(), member_start_.end() - 1);
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      for (std::size_t k = 0; k < sets_[s].elements.size(); ++k) {
        members_[next[sets_[s].elements[k]]++] = {s, sets_[s].weights[k]};
      }
    }
  }

  std::size_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return sets_.size(); }
  const std::vector<WeightedSet>& sets() const noexcept { return sets_; }
  const WeightedSet& set(std::size_t s) const noexcept { return sets_[s]; }

  /// Sets containing element a, in set order.
  std::span<const Membership> members(std::size_t a) const noexcept {
    return {members_.data() + member_start_[a], member_start_[a + 1] - member_start_[a]};
  }

  /// Maximum number of sets containing one element.
  std::size_t max_frequency() const noexcept {
    std::size_t f = 0;
    for (std::size_t a = 0; a < universe_; ++a) f = std::max(f, members(a).size());
    return f;
  }

  /// Maximum set size.
  std::size_t max_set_size() const noexcept {
    std::size_t k = 0;
    for (const auto& s : sets_) k = std::max(k, s.elements.size());
    return k;
  }

  std::vector<double> costs() const {
    std::vector<double> c(sets_.size());
    for (std::size_t s = 0; s < sets_.size(); ++s) c[s] = sets_[s].cost;
    return c;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<WeightedSet> sets_;
  std::vector<std::size_t> member_start_{0};
  std::vector<Membership> members_;
};

/// Terminal j of the instance receives label j.
struct MultiwayInstance {
  Graph graph;
  std::vector<std::size_t> terminals;

  MultiwayInstance(Graph g, std::vector<std::size_t> t) : graph(std::move(g)), terminals(std::move(t)) {
    if (terminals.size() < 2) throw PreconditionError("multiway cut needs at least 2 terminals");
    std::vector<std::size_t> sorted = terminals;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw PreconditionError("terminal collision: a vertex is listed twice");
    }
    for (auto v : terminals) {
      if (v >= graph.n()) throw DimensionError("terminal out of range");
    }
  }

  std::size_t k() const noexcept { return terminals.size(); }

  /// Label of v if v is a terminal.
  std::optional<std::size_t> terminal_label(std::size_t v) const {
    const auto it = std::find(terminals.begin(), terminals.end(), v);
    if (it == terminals.end()) return std::nullopt;
    return static_cast<std::size_t>(it - terminals.begin());
  }
};

enum class ProblemKind { vertex_cover, set_cover, set_packing, multiway_cut, generic };

inline const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::vertex_cover: return "vertex-cover";
    case ProblemKind::set_cover: return "set-cover";
    case ProblemKind::set_packing: return "set-packing";
    case ProblemKind::multiway_cut: return "multiway-cut";
    case ProblemKind::generic: return "lp";
  }
  return "lp";
}

/// An encoded instance. decision_cols[d] is the LP column of combinatorial
/// decision d: vertex v, set s, or x_v^i at index v*k + i for multiway cut.
struct EncodedProblem {
  ProblemKind kind = ProblemKind::generic;
  StandardFormLp lp;
  std::vector<std::size_t> decision_cols;
  std::vector<SlackColumn> slacks;
  std::vector<Block> blocks;
  std::vector<double> initial_point;
  /// Labels (multiway cut) or column sparsity (set packing); 0 otherwise.
  std::size_t k = 0;
  /// Set packing: max sets per element.
  std::size_t frequency = 0;
};

/// Decision-variable values of an LP point.
inline std::vector<double> decision_values(const EncodedProblem& enc, std::span<const double> x) {
  enc.lp.check_dim(x);
  std::vector<double> out(enc.decision_cols.size());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = x[enc.decision_cols[d]];
  return out;
}

/// LP point with the given decision values and slacks filled in. Extra
/// columns that are neither decisions nor slacks start at their lower bound
/// clamped to zero.
inline std::vector<double> lift_decisions(const EncodedProblem& enc, std::span<const double> d) {
  if (d.size() != enc.decision_cols.size()) throw DimensionError("decision vector length mismatch");
  std::vector<double> x(enc.lp.cols());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(0.0, enc.lp.lower()[j], enc.lp.upper()[j]);
  for (std::size_t k = 0; k < d.size(); ++k) x[enc.decision_cols[k]] = d[k];
  fill_slacks(enc.lp, enc.slacks, x);
  return x;
}

namespace detail {

/// Appends covering rows  sum_j a_ij x_j - z_i = 1  with slack z_i in [0, inf).
inline EncodedProblem encode_covering(ProblemKind kind, std::size_t vars, std::vector<double> cost,
                                      const std::vector<std::vector<std::pair<std::size_t, double>>>& rows) {
  const std::size_t m = rows.size();
  std::vector<Triplet> t;
  EncodedProblem enc;
  enc.kind = kind;
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [j, a] : rows[i]) t.push_back({i, j, a});
    t.push_back({i, vars + i, -1.0});
    enc.slacks.push_back({vars + i, i, -1.0});
  }
  const std::size_t n = vars + m;
  cost.resize(n, 0.0);
  std::vector<double> lo(n, 0.0), hi(n, 1.0);
  for (std::size_t i = 0; i < m; ++i) hi[vars + i] = kInf;
  enc.lp = StandardFormLp(SparseMatrix(m, n, std::move(t)), std::vector<double>(m, 1.0), std::move(cost),
                          std::move(lo), std::move(hi));
  enc.decision_cols.resize(vars);
  std::iota(enc.decision_cols.begin(), enc.decision_cols.end(), 0);
  return enc;
}

}  // namespace detail

/// min c^T x  s.t.  x_u + x_v - s_e = 1,  x in [0,1]^n,  s >= 0.
/// Starts from the half-integral feasible point x = 1/2.
inline EncodedProblem encode_vertex_cover(const Graph& g) {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  rows.reserve(g.m());
  for (const auto& e : g.edges()) rows.push_back({{e.u, 1.0}, {e.v, 1.0}});
  auto enc = detail::encode_covering(ProblemKind::vertex_cover, g.n(), g.vertex_costs(), rows);
  enc.initial_point = lift_decisions(enc, std::vector<double>(g.n(), 0.5));
  return enc;
}

/// min c^T x  s.t.  sum_{s ∋ a} x_s - z_a = 1 per element.
inline EncodedProblem encode_set_cover(const SetSystem& ss) {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(ss.universe());
  for (std::size_t a = 0; a < ss.universe(); ++a) {
    if (ss.members(a).empty()) throw PreconditionError("element " + std::to_string(a) + " is in no set");
    for (const auto& mb : ss.members(a)) rows[a].push_back({mb.set, 1.0});
  }
  auto enc = detail::encode_covering(ProblemKind::set_cover, ss.size(), ss.costs(), rows);
  // x_s = 1/f is feasible for every element.
  const double start = 1.0 / static_cast<double>(std::max<std::size_t>(1, ss.max_frequency()));
  enc.initial_point = lift_decisions(enc, std::vector<double>(ss.size(), start));
  return enc;
}

/// Rows of the strengthened packing formulation, each as (set, coefficient)
/// pairs: one weight row per element, then for each element a the row
/// sum_{s : w_{a,s} > 1/2} x_s <= 1 unless it repeats the weight row or has
/// fewer than two sets.
inline std::vector<std::vector<std::pair<std::size_t, double>>> packing_rows(const SetSystem& ss) {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  for (std::size_t a = 0; a < ss.universe(); ++a) {
    std::vector<std::pair<std::size_t, double>> row;
    for (const auto& mb : ss.members(a)) row.push_back({mb.set, mb.weight});
    if (!row.empty()) rows.push_back(std::move(row));
  }
  for (std::size_t a = 0; a < ss.universe(); ++a) {
    std::vector<std::pair<std::size_t, double>> strong;
    bool same = true;
    for (const auto& mb : ss.members(a)) {
      if (mb.weight > 0.5) strong.push_back({mb.set, 1.0});
      if (!(mb.weight > 0.5 && mb.weight == 1.0)) same = false;
    }
    if (strong.size() < 2 || same) continue;
    rows.push_back(std::move(strong));
  }
  return rows;
}

/// max c^T x  s.t.  packing_rows(ss) x + z = 1,  x in [0,1],  z >= 0.
inline EncodedProblem encode_set_packing_strong(const SetSystem& ss) {
  const auto rows = packing_rows(ss);
  const std::size_t m = rows.size(), vars = ss.size(), n = vars + m;
  std::vector<Triplet> t;
  EncodedProblem enc;
  enc.kind = ProblemKind::set_packing;
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [s, w] : rows[i]) t.push_back({i, s, w});
    t.push_back({i, vars + i, 1.0});
    enc.slacks.push_back({vars + i, i, 1.0});
  }
  auto cost = ss.costs();
  cost.resize(n, 0.0);
  std::vector<double> lo(n, 0.0), hi(n, 1.0);
  for (std::size_t i = 0; i < m; ++i) hi[vars + i] = kInf;
  enc.lp = StandardFormLp(SparseMatrix(m, n, std::move(t)), std::vector<double>(m, 1.0), std::move(cost),
                          std::move(lo), std::move(hi), Sense::maximize);
  enc.decision_cols.resize(vars);
  std::iota(enc.decision_cols.begin(), enc.decision_cols.end(), 0);
  enc.k = ss.max_set_size();
  enc.frequency = ss.max_frequency();
  enc.initial_point = lift_decisions(enc, std::vector<double>(vars, 0.0));
  return enc;
}

/// Independent set as packing: one set per vertex holding its incident
/// edges, so the element constraints are x_u + x_v <= 1.
inline SetSystem independent_set_system(const Graph& g) {
  std::vector<WeightedSet> sets(g.n());
  for (std::size_t v = 0; v < g.n(); ++v) {
    for (auto e : g.incident(v)) sets[v].elements.push_back(e);
    sets[v].cost = g.vertex_cost(v);
  }
  return SetSystem(g.m(), std::move(sets));
}

/// Edge-incidence set system of a graph (elements = edges), whose set cover
/// is the graph's vertex cover.
inline SetSystem vertex_cover_set_system(const Graph& g) { return independent_set_system(g); }

/// Linearized multiway cut LP. Columns: x_v^i at v*k + i, x_e^i at
/// n*k + e*k + i, then one slack per edge row. Rows: one simplex row per
/// vertex, then for every (edge, label) the two rows
///   x_e^i - x_v^i + x_u^i - s = 0,   x_e^i - x_u^i + x_v^i - s' = 0.
/// Terminal blocks are fixed to their corner through bounds.
inline EncodedProblem encode_multiway_cut(const MultiwayInstance& mi) {
  const auto& g = mi.graph;
  const std::size_t n = g.n(), m = g.m(), k = mi.k();
  const std::size_t vx = n * k, ex = m * k, rows = n + 2 * m * k, cols = vx + ex + 2 * m * k;
  std::vector<Triplet> t;
  std::vector<double> b(rows, 0.0), c(cols, 0.0), lo(cols, 0.0), hi(cols, 1.0);
  EncodedProblem enc;
  enc.kind = ProblemKind::multiway_cut;
  enc.k = k;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < k; ++i) t.push_back({v, v * k + i, 1.0});
    b[v] = 1.0;
  }
  std::size_t row = n, slack = vx + ex;
  for (std::size_t e = 0; e < m; ++e) {
    const auto [u, v, cost] = g.edges()[e];
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t xe = vx + e * k + i;
      c[xe] = 0.5 * cost;
      for (int dir = 0; dir < 2; ++dir) {
        const std::size_t plus = dir == 0 ? u : v, minus = dir == 0 ? v : u;
        t.push_back({row, xe, 1.0});
        t.push_back({row, minus * k + i, -1.0});
        t.push_back({row, plus * k + i, 1.0});
        t.push_back({row, slack, -1.0});
        enc.slacks.push_back({slack, row, -1.0});
        hi[slack] = kInf;
        ++row;
        ++slack;
      }
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t v = mi.terminals[j];
    for (std::size_t i = 0; i < k; ++i) lo[v * k + i] = hi[v * k + i] = (i == j ? 1.0 : 0.0);
  }
  enc.lp = StandardFormLp(SparseMatrix(rows, cols, std::move(t)), std::move(b), std::move(c), std::move(lo),
                          std::move(hi));
  enc.decision_cols.resize(vx);
  std::iota(enc.decision_cols.begin(), enc.decision_cols.end(), 0);

  for (std::size_t v = 0; v < n; ++v) {
    Block blk;
    for (std::size_t i = 0; i < k; ++i) blk.indices.push_back(v * k + i);
    blk.simplex = !mi.terminal_label(v).has_value();
    enc.blocks.push_back(std::move(blk));
  }
  for (std::size_t j = vx; j < cols; ++j) enc.blocks.push_back({{j}, false});

  std::vector<double> x(cols, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < k; ++i) {
      x[v * k + i] = enc.lp.lower()[v * k + i] == enc.lp.upper()[v * k + i] ? enc.lp.lower()[v * k + i]
                                                                             : 1.0 / static_cast<double>(k);
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    const auto& ed = g.edges()[e];
    for (std::size_t i = 0; i < k; ++i) x[vx + e * k + i] = std::abs(x[ed.u * k + i] - x[ed.v * k + i]);
  }
  fill_slacks(enc.lp, enc.slacks, x);
  enc.initial_point = std::move(x);
  return enc;
}

/// Feasible LP point from simplex-feasible vertex values: every edge
/// variable becomes |x_u^i - x_v^i| and the slacks absorb the rest.
inline std::vector<double> lift_multiway_cut(const EncodedProblem& enc, const MultiwayInstance& mi,
                                             std::span<const double> d) {
  const auto& g = mi.graph;
  const std::size_t k = mi.k(), vx = g.n() * k;
  if (d.size() != vx || enc.lp.cols() != vx + 3 * g.m() * k) throw DimensionError("multiway cut lift dimensions");
  std::vector<double> x(enc.lp.cols(), 0.0);
  std::copy(d.begin(), d.end(), x.begin());
  for (std::size_t e = 0; e < g.m(); ++e) {
    const auto& ed = g.edges()[e];
    for (std::size_t i = 0; i < k; ++i) x[vx + e * k + i] = std::abs(d[ed.u * k + i] - d[ed.v * k + i]);
  }
  fill_slacks(enc.lp, enc.slacks, x);
  return x;
}

/// Generic LP wrapper: no slacks or blocks, every column is a decision.
inline EncodedProblem encode_generic(StandardFormLp lp) {
  EncodedProblem enc;
  enc.kind = ProblemKind::generic;
  enc.decision_cols.resize(lp.cols());
  std::iota(enc.decision_cols.begin(), enc.decision_cols.end(), 0);
  enc.initial_point.resize(lp.cols());
  for (std::size_t j = 0; j < lp.cols(); ++j) enc.initial_point[j] = std::clamp(0.0, lp.lower()[j], lp.upper()[j]);
  enc.lp = std::move(lp);
  return enc;
}

// ---------------------------------------------------------------------------
// File formats

namespace detail {

inline std::string strip_comment(std::string line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return line;
}

inline std::int64_t parse_label(const std::string& tok, std::size_t line) {
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0') throw ParseError("bad vertex label '" + tok + "'", line);
  return v;
}

inline double parse_cost(const std::string& tok, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || !std::isfinite(v) || v < 0.0) {
    throw ParseError("bad cost '" + tok + "'", line);
  }
  return v;
}

}  // namespace detail

/// Edge list: one `u v [cost]` per line, `#` comments. Labels are any
/// integers and get relabeled densely in increasing order.
inline Graph read_edge_list(std::istream& in) {
  struct Raw {
    std::int64_t u, v;
    double cost;
  };
  std::vector<Raw> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(detail::strip_comment(line));
    std::vector<std::string> tok;
    for (std::string s; ss >> s;) tok.push_back(s);
    if (tok.empty()) continue;
    if (tok.size() < 2 || tok.size() > 3) throw ParseError("expected 'u v [cost]'", line_no);
    raw.push_back({detail::parse_label(tok[0], line_no), detail::parse_label(tok[1], line_no),
                   tok.size() == 3 ? detail::parse_cost(tok[2], line_no) : 1.0});
  }
  std::vector<std::int64_t> labels;
  for (const auto& r : raw) {
    labels.push_back(r.u);
    labels.push_back(r.v);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  const auto index = [&](std::int64_t l) {
    return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
  };
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& r : raw) edges.push_back({index(r.u), index(r.v), r.cost});
  Graph g(labels.size(), std::move(edges));
  g.set_labels(std::move(labels));
  return g;
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

/// Whitespace-separated source labels, mapped to dense indices of g.
inline std::vector<std::size_t> read_terminals(std::istream& in, const Graph& g) {
  std::vector<std::size_t> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(detail::strip_comment(line));
    for (std::string tok; ss >> tok;) {
      const auto label = detail::parse_label(tok, line_no);
      const auto idx = g.index_of(label);
      if (!idx) throw PreconditionError("terminal " + tok + " not in graph");
      out.push_back(*idx);
    }
  }
  return out;
}

inline std::vector<std::size_t> load_terminals(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open terminal file '" + path + "'");
  return read_terminals(in, g);
}

/// Set file: one `cost e1 e2 ...` per line, `#` comments. Element labels are
/// relabeled densely in increasing order.
inline SetSystem read_set_system(std::istream& in) {
  std::vector<std::pair<double, std::vector<std::int64_t>>> raw;
  std::vector<std::int64_t> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(detail::strip_comment(line));
    std::vector<std::string> tok;
    for (std::string s; ss >> s;) tok.push_back(s);
    if (tok.empty()) continue;
    std::vector<std::int64_t> el;
    for (std::size_t q = 1; q < tok.size(); ++q) el.push_back(detail::parse_label(tok[q], line_no));
    std::sort(el.begin(), el.end());
    if (std::adjacent_find(el.begin(), el.end()) != el.end()) throw ParseError("element repeated in a set", line_no);
    labels.insert(labels.end(), el.begin(), el.end());
    raw.push_back({detail::parse_cost(tok[0], line_no), std::move(el)});
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::vector<WeightedSet> sets;
  for (auto& [cost, el] : raw) {
    WeightedSet s;
    s.cost = cost;
    for (auto l : el) {
      s.elements.push_back(
          static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin()));
    }
    sets.push_back(std::move(s));
  }
  return SetSystem(labels.size(), std::move(sets));
}

inline SetSystem load_set_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open set file '" + path + "'");
  return read_set_system(in);
}

}  // namespace lpround
