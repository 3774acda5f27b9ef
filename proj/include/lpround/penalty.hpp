#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lpround/errors.hpp"
#include "lpround/lp.hpp"

namespace lpround {

/// Regularized quadratic penalty of an LP:
///
///   f(x) = c^T x - u^T (Ax - b) + (beta/2) ||Ax - b||^2 + (1/(2 beta)) ||x - x_bar||^2
///
/// minimized over the LP's box. `u` and `x_bar` are the dual and primal
/// anchors; u^T A_:j is cached per column since anchors are fixed for the
/// lifetime of the object.
class PenaltyProblem {
 public:
  PenaltyProblem(const StandardFormLp& lp, double beta, std::vector<double> u_bar,
                 std::vector<double> x_bar)
      : lp_(&lp), beta_(beta), u_bar_(std::move(u_bar)), x_bar_(std::move(x_bar)) {
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw ConfigError("beta must be positive and finite");
    if (u_bar_.size() != lp.rows()) throw DimensionError("u_bar length != rows");
    if (x_bar_.size() != lp.cols()) throw DimensionError("x_bar length != cols");
    offset_ = lp.matrix().multiply_transpose(u_bar_);
    for (std::size_t j = 0; j < offset_.size(); ++j) offset_[j] = lp.cost()[j] - offset_[j];
  }

  /// Zero anchors.
  PenaltyProblem(const StandardFormLp& lp, double beta)
      : PenaltyProblem(lp, beta, std::vector<double>(lp.rows(), 0.0),
                       std::vector<double>(lp.cols(), 0.0)) {}

  const StandardFormLp& lp() const noexcept { return *lp_; }
  double beta() const noexcept { return beta_; }
  const std::vector<double>& u_bar() const noexcept { return u_bar_; }
  const std::vector<double>& x_bar() const noexcept { return x_bar_; }

  /// f at x given its residual r = Ax - b.
  double objective(std::span<const double> x, std::span<const double> r) const {
    const auto& c = lp_->cost();
    double lin = 0.0, prox = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      lin += c[j] * x[j];
      const double d = x[j] - x_bar_[j];
      prox += d * d;
    }
    double dual = 0.0, pen = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      dual += u_bar_[i] * r[i];
      pen += r[i] * r[i];
    }
    return lin - dual + 0.5 * beta_ * pen + prox / (2.0 * beta_);
  }

  double objective(std::span<const double> x) const {
    lp_->check_dim(x);
    const auto r = residual(*lp_, x);
    return objective(x, r);
  }

  /// i-th partial derivative from the caller-maintained residual.
  double grad_component(std::span<const double> r, double x_i, std::size_t i) const noexcept {
    return grad_from_dot(lp_->matrix().col_dot(i, r), x_i, i);
  }

  /// Same as grad_component with A_:i^T r already computed.
  double grad_from_dot(double col_dot_r, double x_i, std::size_t i) const noexcept {
    return offset_[i] + beta_ * col_dot_r + (x_i - x_bar_[i]) / beta_;
  }

  /// c_i - u^T A_:i.
  double linear_offset(std::size_t i) const noexcept { return offset_[i]; }

  std::vector<double> gradient(std::span<const double> x, std::span<const double> r) const {
    std::vector<double> g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) g[j] = grad_component(r, x[j], j);
    return g;
  }

 private:
  const StandardFormLp* lp_;
  double beta_;
  std::vector<double> u_bar_;
  std::vector<double> x_bar_;
  std::vector<double> offset_;
};

struct LipschitzInfo {
  double l_max = 0.0;     ///< max diagonal of the Hessian
  double l_strong = 0.0;  ///< strong convexity modulus, 1/beta
  std::vector<double> diagonal;
};

inline LipschitzInfo lipschitz(const PenaltyProblem& p) {
  const auto& a = p.lp().matrix();
  const double beta = p.beta();
  LipschitzInfo info;
  info.l_strong = 1.0 / beta;
  info.diagonal.resize(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) info.diagonal[j] = beta * a.col_sq_norm(j) + 1.0 / beta;
  info.l_max = beta * a.max_col_sq_norm() + 1.0 / beta;
  return info;
}

}  // namespace lpround
