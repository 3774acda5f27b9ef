#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "lpround/errors.hpp"
#include "lpround/sparse_matrix.hpp"

namespace lpround {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };

/// min (or max) c^T x  s.t.  A x = b,  lo <= x <= hi.
///
/// Maximize instances keep the user's cost for reporting but expose the
/// negated cost through cost(), so every solver sees a minimization.
class StandardFormLp {
 public:
  StandardFormLp() = default;

  StandardFormLp(SparseMatrix a, std::vector<double> b, std::vector<double> c,
                 std::vector<double> lower, std::vector<double> upper,
                 Sense sense = Sense::minimize)
      : a_(std::move(a)),
        b_(std::move(b)),
        user_cost_(std::move(c)),
        lower_(std::move(lower)),
        upper_(std::move(upper)),
        sense_(sense) {
    if (b_.size() != a_.rows()) throw DimensionError("rhs length != rows");
    if (user_cost_.size() != a_.cols()) throw DimensionError("cost length != cols");
    if (lower_.size() != a_.cols() || upper_.size() != a_.cols()) {
      throw DimensionError("bound length != cols");
    }
    for (std::size_t j = 0; j < lower_.size(); ++j) {
      if (!(lower_[j] <= upper_[j]) || lower_[j] == kInf || upper_[j] == -kInf) {
        throw PreconditionError("empty bound interval for variable " + std::to_string(j));
      }
    }
    cost_ = user_cost_;
    if (sense_ == Sense::maximize) {
      for (double& v : cost_) v = -v;
    }
  }

  /// Default bounds [0, +inf).
  StandardFormLp(SparseMatrix a, std::vector<double> b, std::vector<double> c,
                 Sense sense = Sense::minimize)
      : StandardFormLp(std::move(a), std::move(b), c, std::vector<double>(c.size(), 0.0),
                       std::vector<double>(c.size(), kInf), sense) {}

  std::size_t rows() const noexcept { return a_.rows(); }
  std::size_t cols() const noexcept { return a_.cols(); }
  const SparseMatrix& matrix() const noexcept { return a_; }
  const std::vector<double>& rhs() const noexcept { return b_; }
  /// Minimization cost (negated for maximize instances).
  const std::vector<double>& cost() const noexcept { return cost_; }
  const std::vector<double>& user_cost() const noexcept { return user_cost_; }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  Sense sense() const noexcept { return sense_; }

  /// c^T x in the user's sense.
  double objective(std::span<const double> x) const {
    check_dim(x);
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += user_cost_[j] * x[j];
    return s;
  }

  /// c^T x of the internal minimization.
  double min_objective(std::span<const double> x) const {
    return sense_ == Sense::maximize ? -objective(x) : objective(x);
  }

  void check_dim(std::span<const double> x) const {
    if (x.size() != cols()) {
      throw DimensionError("point has length " + std::to_string(x.size()) + ", LP has " +
                           std::to_string(cols()) + " columns");
    }
  }

  /// Copy with the user cost negated and the sense flipped.
  StandardFormLp flipped_sense() const {
    std::vector<double> c = user_cost_;
    for (double& v : c) v = -v;
    return StandardFormLp(a_, b_, std::move(c), lower_, upper_,
                          sense_ == Sense::minimize ? Sense::maximize : Sense::minimize);
  }

 private:
  SparseMatrix a_;
  std::vector<double> b_;
  std::vector<double> user_cost_;
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  Sense sense_ = Sense::minimize;
};

/// A x - b.
inline std::vector<double> residual(const StandardFormLp& lp, std::span<const double> x) {
  lp.check_dim(x);
  std::vector<double> r = lp.matrix().multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lp.rhs()[i];
  return r;
}

inline double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double two_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("distance: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

enum class ReferenceKind { none, exact_oracle, dual_bound, user_supplied };

inline const char* to_string(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::none: return "none";
    case ReferenceKind::exact_oracle: return "exact-oracle";
    case ReferenceKind::dual_bound: return "dual-bound";
    case ReferenceKind::user_supplied: return "user-supplied";
  }
  return "none";
}

/// Measured feasibility / objective-gap pair of an approximate LP solution.
struct ApproxCertificate {
  double eps = 0.0;                 ///< ||Ax - b||_inf
  std::optional<double> delta;      ///< |c^T x - ref| / |ref|
  std::optional<double> reference;  ///< objective the gap was measured against
  ReferenceKind reference_kind = ReferenceKind::none;
};

inline constexpr double kBoundTolerance = 1e-12;

inline void check_within_bounds(const StandardFormLp& lp, std::span<const double> x,
                                double tol = kBoundTolerance) {
  lp.check_dim(x);
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] >= lp.lower()[j] - tol && x[j] <= lp.upper()[j] + tol)) {
      throw PreconditionError("x[" + std::to_string(j) + "] = " + std::to_string(x[j]) +
                              " outside its bounds");
    }
  }
}

inline ApproxCertificate certify(const StandardFormLp& lp, std::span<const double> x,
                                 std::optional<double> reference_objective = std::nullopt,
                                 ReferenceKind kind = ReferenceKind::user_supplied) {
  check_within_bounds(lp, x);
  ApproxCertificate cert;
  cert.eps = inf_norm(residual(lp, x));
  if (reference_objective) {
    if (*reference_objective == 0.0 || !std::isfinite(*reference_objective)) {
      throw PreconditionError("reference objective is zero or non-finite; relative gap undefined");
    }
    cert.reference = *reference_objective;
    cert.reference_kind = kind;
    cert.delta = std::abs(lp.objective(x) - *reference_objective) / std::abs(*reference_objective);
  }
  return cert;
}

/// A slack column: appears only in `row` with coefficient `coeff`.
struct SlackColumn {
  std::size_t col;
  std::size_t row;
  double coeff;
};

/// Sets every slack so its row residual is zero, clamped to the slack's bounds.
inline void fill_slacks(const StandardFormLp& lp, std::span<const SlackColumn> slacks,
                        std::span<double> x) {
  lp.check_dim(x);
  for (const auto& s : slacks) x[s.col] = 0.0;
  for (const auto& s : slacks) {
    const double rest = lp.matrix().row_dot(s.row, x) - lp.rhs()[s.row];
    x[s.col] = std::clamp(-rest / s.coeff, lp.lower()[s.col], lp.upper()[s.col]);
  }
}

/// Lagrangian lower bound on the minimization optimum:
///   b^T u + sum_j min_{lo_j <= x_j <= hi_j} (c_j - A_:j^T u) x_j.
///
/// Multipliers of rows owning an unbounded singleton column are first clipped
/// so that column's reduced cost has the bounded sign; any u yields a valid
/// bound, the clipping only avoids a useless -inf. Returned in the user's
/// sense (an upper bound for maximize instances).
inline double lagrangian_bound(const StandardFormLp& lp, std::span<const double> u_in) {
  if (u_in.size() != lp.rows()) throw DimensionError("multiplier length != rows");
  const auto& a = lp.matrix();
  std::vector<double> u(u_in.begin(), u_in.end());
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    const auto rows = a.col_rows(j);
    if (rows.size() != 1) continue;
    const double coef = a.col_values(j)[0];
    const double c = lp.cost()[j];
    double& ui = u[rows[0]];
    const double reduced = c - coef * ui;
    if (lp.upper()[j] == kInf && reduced < 0.0) ui = c / coef;
    if (lp.lower()[j] == -kInf && reduced > 0.0) ui = c / coef;
  }
  double bound = 0.0;
  for (std::size_t i = 0; i < lp.rows(); ++i) bound += lp.rhs()[i] * u[i];
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    const double reduced = lp.cost()[j] - a.col_dot(j, u);
    if (reduced > 0.0) {
      if (lp.lower()[j] == -kInf) return lp.sense() == Sense::maximize ? kInf : -kInf;
      bound += reduced * lp.lower()[j];
    } else if (reduced < 0.0) {
      if (lp.upper()[j] == kInf) return lp.sense() == Sense::maximize ? kInf : -kInf;
      bound += reduced * lp.upper()[j];
    }
  }
  return lp.sense() == Sense::maximize ? -bound : bound;
}

// ---------------------------------------------------------------------------
// Text format
//
//   m n nnz sense          sense is `min` or `max`
//   b_0 ... b_{m-1}
//   c_0 ... c_{n-1}
//   row col value          nnz lines, 0-indexed
//   lo hi                  n lines, `inf` / `-inf` allowed
//
// Tokens are whitespace separated; `#` starts a comment running to end of line.

namespace detail {

inline std::string format_real(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  bool next(std::string& tok) {
    while (true) {
      if (line_stream_ >> tok) return true;
      std::string line;
      if (!std::getline(in_, line)) return false;
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line_stream_.clear();
      line_stream_.str(line);
    }
  }

  std::string expect(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(std::string("unexpected end of input, expected ") + what, line_no_);
    return tok;
  }

  double real(const char* what) {
    const std::string tok = expect(what);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || std::isnan(v)) {
      throw ParseError(std::string("bad ") + what + " '" + tok + "'", line_no_);
    }
    return v;
  }

  std::size_t count(const char* what) {
    const std::string tok = expect(what);
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0' || v < 0) {
      throw ParseError(std::string("bad ") + what + " '" + tok + "'", line_no_);
    }
    return static_cast<std::size_t>(v);
  }

  std::size_t line() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::istringstream line_stream_;
  std::size_t line_no_ = 0;
};

}  // namespace detail

inline void write_lp(std::ostream& out, const StandardFormLp& lp) {
  const auto trip = lp.matrix().triplets();
  out << lp.rows() << ' ' << lp.cols() << ' ' << trip.size() << ' '
      << (lp.sense() == Sense::minimize ? "min" : "max") << '\n';
  for (std::size_t i = 0; i < lp.rows(); ++i) {
    out << (i ? " " : "") << detail::format_real(lp.rhs()[i]);
  }
  out << '\n';
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    out << (j ? " " : "") << detail::format_real(lp.user_cost()[j]);
  }
  out << '\n';
  for (const auto& t : trip) out << t.row << ' ' << t.col << ' ' << detail::format_real(t.value) << '\n';
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    out << detail::format_real(lp.lower()[j]) << ' ' << detail::format_real(lp.upper()[j]) << '\n';
  }
}

inline StandardFormLp read_lp(std::istream& in) {
  detail::TokenReader tr(in);
  const std::size_t m = tr.count("row count");
  const std::size_t n = tr.count("column count");
  const std::size_t nnz = tr.count("nonzero count");
  const std::string sense_tok = tr.expect("sense");
  Sense sense;
  if (sense_tok == "min" || sense_tok == "minimize") {
    sense = Sense::minimize;
  } else if (sense_tok == "max" || sense_tok == "maximize") {
    sense = Sense::maximize;
  } else {
    throw ParseError("sense must be min or max, got '" + sense_tok + "'", tr.line());
  }
  std::vector<double> b(m), c(n), lo(n), hi(n);
  for (auto& v : b) v = tr.real("rhs value");
  for (auto& v : c) v = tr.real("cost value");
  std::vector<Triplet> entries;
  entries.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    const std::size_t r = tr.count("row index");
    const std::size_t col = tr.count("column index");
    const double v = tr.real("matrix value");
    if (r >= m || col >= n) throw ParseError("matrix index out of range", tr.line());
    entries.push_back({r, col, v});
  }
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = tr.real("lower bound");
    hi[j] = tr.real("upper bound");
    if (!(lo[j] <= hi[j])) throw ParseError("lower bound exceeds upper bound", tr.line());
  }
  std::string extra;
  if (tr.next(extra)) throw ParseError("trailing token '" + extra + "'", tr.line());
  SparseMatrix a;
  try {
    a = SparseMatrix(m, n, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), tr.line());
  }
  return StandardFormLp(std::move(a), std::move(b), std::move(c), std::move(lo), std::move(hi), sense);
}

inline StandardFormLp load_lp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open LP file '" + path + "'");
  return read_lp(in);
}

inline void save_lp(const std::string& path, const StandardFormLp& lp) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write LP file '" + path + "'");
  write_lp(out, lp);
}

}  // namespace lpround
