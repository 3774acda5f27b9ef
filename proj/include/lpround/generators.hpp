#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "lpround/lp.hpp"
#include "lpround/problems.hpp"
#include "lpround/random.hpp"

namespace lpround::gen {

/// G(n, p) with unit costs.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (uniform_unit(rng) < p) edges.push_back({u, v, 1.0});
    }
  }
  return Graph(n, std::move(edges));
}

/// G(n, m): m distinct uniformly random edges.
inline Graph random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Edge> edges;
  const std::size_t cap = n * (n - 1) / 2;
  m = std::min(m, cap);
  while (edges.size() < m) {
    std::size_t u = uniform_index(rng, n), v = uniform_index(rng, n);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (seen.insert({u, v}).second) edges.push_back({u, v, 1.0});
  }
  return Graph(n, std::move(edges));
}

/// Random set system in which every element lies in at least one set.
/// Weights are drawn from (0, 1] when `weighted`, otherwise all ones.
inline SetSystem random_set_system(std::size_t universe, std::size_t sets, double density, std::uint64_t seed,
                                   bool weighted = false, double cost_lo = 1.0, double cost_hi = 1.0) {
  Rng rng(seed);
  std::vector<WeightedSet> out(sets);
  std::vector<char> used(universe, 0);
  for (auto& s : out) {
    for (std::size_t a = 0; a < universe; ++a) {
      if (uniform_unit(rng) < density) {
        s.elements.push_back(a);
        used[a] = 1;
      }
    }
  }
  for (std::size_t a = 0; a < universe; ++a) {
    if (used[a] || sets == 0) continue;
    auto& s = out[uniform_index(rng, sets)];
    s.elements.insert(std::lower_bound(s.elements.begin(), s.elements.end(), a), a);
  }
  for (auto& s : out) {
    s.cost = cost_lo + (cost_hi - cost_lo) * uniform_unit(rng);
    if (weighted) {
      for (std::size_t q = 0; q < s.elements.size(); ++q) s.weights.push_back(0.05 + 0.95 * uniform_unit(rng));
    }
  }
  return SetSystem(universe, std::move(out));
}

/// Feasible, bounded LP: A >= 0 sparse with every row and column nonempty,
/// b = A x_f for a random interior x_f, box [0,1], costs in [0.5, 1.5].
inline StandardFormLp random_feasible_lp(std::size_t m, std::size_t n, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> dense(m, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (uniform_unit(rng) < density) dense[i][j] = 0.1 + 0.9 * uniform_unit(rng);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (n && std::all_of(dense[i].begin(), dense[i].end(), [](double v) { return v == 0.0; })) {
      dense[i][uniform_index(rng, n)] = 0.5 + 0.5 * uniform_unit(rng);
    }
  }
  for (std::size_t j = 0; j < n && m; ++j) {
    bool empty = true;
    for (std::size_t i = 0; i < m; ++i) empty = empty && dense[i][j] == 0.0;
    if (empty) dense[uniform_index(rng, m)][j] = 0.5 + 0.5 * uniform_unit(rng);
  }
  std::vector<double> xf(n), c(n);
  for (auto& v : xf) v = 0.2 + 0.6 * uniform_unit(rng);
  for (auto& v : c) v = 0.5 + uniform_unit(rng);
  std::vector<Triplet> t;
  std::vector<double> b(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dense[i][j] != 0.0) {
        t.push_back({i, j, dense[i][j]});
        b[i] += dense[i][j] * xf[j];
      }
    }
  }
  return StandardFormLp(SparseMatrix(m, n, std::move(t)), std::move(b), std::move(c), std::vector<double>(n, 0.0),
                        std::vector<double>(n, 1.0));
}

/// Covering LP  min c^T x  s.t.  A x - s = 1,  x, s >= 0  with no upper
/// bounds. Columns n..n+m-1 are the surplus variables. Every row has at
/// least two positive entries, so x = 1 has positive slack, and c > 0 keeps
/// the LP bounded. Needs n >= 2.
inline StandardFormLp random_covering_lp(std::size_t m, std::size_t n, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<char> in(n, 0);
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (uniform_unit(rng) < density) in[j] = 1, ++count;
    }
    while (count < std::min<std::size_t>(2, n)) {
      const auto j = uniform_index(rng, n);
      if (!in[j]) in[j] = 1, ++count;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (in[j]) t.push_back({i, j, 0.5 + uniform_unit(rng)});
    }
    t.push_back({i, n + i, -1.0});
  }
  std::vector<double> c(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) c[j] = 0.5 + uniform_unit(rng);
  return StandardFormLp(SparseMatrix(m, n + m, std::move(t)), std::vector<double>(m, 1.0), std::move(c),
                        std::vector<double>(n + m, 0.0), std::vector<double>(n + m, kInf));
}

/// k distinct vertices from the largest connected component.
inline std::vector<std::size_t> random_terminals(const Graph& g, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> comp(g.n(), g.n());
  std::vector<std::size_t> best;
  for (std::size_t s = 0; s < g.n(); ++s) {
    if (comp[s] != g.n()) continue;
    std::vector<std::size_t> members{s}, stack{s};
    comp[s] = s;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto e : g.incident(v)) {
        const auto w = g.other(e, v);
        if (comp[w] == g.n()) {
          comp[w] = s;
          members.push_back(w);
          stack.push_back(w);
        }
      }
    }
    if (members.size() > best.size()) best = std::move(members);
  }
  if (best.size() < k) throw PreconditionError("largest component has fewer than k vertices");
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) std::swap(best[i], best[i + uniform_index(rng, best.size() - i)]);
  best.resize(k);
  return best;
}

}  // namespace lpround::gen
