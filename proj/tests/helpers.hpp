#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "lpround/lpround.hpp"

namespace lpround::test {

/// LP from a dense row-major matrix.
inline StandardFormLp dense_lp(const std::vector<std::vector<double>>& rows, std::vector<double> b,
                               std::vector<double> c, std::vector<double> lo, std::vector<double> hi,
                               Sense sense = Sense::minimize) {
  std::vector<Triplet> t;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (rows[i][j] != 0.0) t.push_back({i, j, rows[i][j]});
    }
  }
  return StandardFormLp(SparseMatrix(rows.size(), n, std::move(t)), std::move(b), std::move(c), std::move(lo),
                        std::move(hi), sense);
}

/// The single-edge LP min x1 + x2 s.t. x1 + x2 = 1, x in [0,1]^2.
inline StandardFormLp edge_lp() { return dense_lp({{1, 1}}, {1}, {1, 1}, {0, 0}, {1, 1}); }

inline Graph triangle() { return Graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}); }

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t v = 0; v + 1 < n; ++v) e.push_back({v, v + 1, 1.0});
  return Graph(n, std::move(e));
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * uniform_unit(rng);
  return v;
}

/// Covering rows (first `vars` columns) of an LP built by random_covering_lp,
/// for the slack-based condition estimate.
inline CoveringProgram covering_rows(const StandardFormLp& lp, std::size_t vars) {
  std::vector<Triplet> t;
  for (const auto& e : lp.matrix().triplets()) {
    if (e.col < vars) t.push_back(e);
  }
  std::vector<double> c(lp.cost().begin(), lp.cost().begin() + static_cast<std::ptrdiff_t>(vars));
  return {SparseMatrix(lp.rows(), vars, std::move(t)), lp.rhs(), std::move(c), 1.0};
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace lpround::test
