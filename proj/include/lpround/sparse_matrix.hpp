#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "lpround/errors.hpp"

namespace lpround {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse column matrix with a row-major mirror.
///
/// Coordinate descent touches one column per step, so columns are the
/// primary layout. The row-major copy exists for exact residual refreshes,
/// which are then embarrassingly parallel over rows.
class SparseMatrix {
 public:
  using RowIndex = std::uint32_t;

  SparseMatrix() = default;

  /// Builds from unordered triplets. Duplicate (row, col) pairs are rejected.
  /// Explicit zeros are dropped.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
      : rows_(rows), cols_(cols) {
    for (const auto& t : entries) {
      if (t.row >= rows || t.col >= cols) {
        throw DimensionError("sparse entry (" + std::to_string(t.row) + "," +
                             std::to_string(t.col) + ") outside " +
                             std::to_string(rows) + "x" + std::to_string(cols));
      }
      if (!std::isfinite(t.value)) {
        throw PreconditionError("non-finite matrix entry");
      }
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.col, a.row) < std::tie(b.col, b.row);
    });
    for (std::size_t k = 1; k < entries.size(); ++k) {
      if (entries[k].row == entries[k - 1].row && entries[k].col == entries[k - 1].col) {
        throw PreconditionError("duplicate matrix entry (" + std::to_string(entries[k].row) +
                                "," + std::to_string(entries[k].col) + ")");
      }
    }
    col_start_.assign(cols + 1, 0);
    for (const auto& t : entries) {
      if (t.value != 0.0) ++col_start_[t.col + 1];
    }
    for (std::size_t j = 0; j < cols; ++j) col_start_[j + 1] += col_start_[j];
    row_index_.reserve(col_start_[cols]);
    values_.reserve(col_start_[cols]);
    for (const auto& t : entries) {
      if (t.value == 0.0) continue;
      row_index_.push_back(static_cast<RowIndex>(t.row));
      values_.push_back(t.value);
    }
    col_sq_norm_.assign(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) s += values_[k] * values_[k];
      col_sq_norm_[j] = s;
    }
    build_row_major();
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const RowIndex> col_rows(std::size_t j) const noexcept {
    return {row_index_.data() + col_start_[j], col_start_[j + 1] - col_start_[j]};
  }
  std::span<const double> col_values(std::size_t j) const noexcept {
    return {values_.data() + col_start_[j], col_start_[j + 1] - col_start_[j]};
  }
  std::span<const std::size_t> row_cols(std::size_t i) const noexcept {
    return {row_col_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
  }
  std::span<const double> row_values(std::size_t i) const noexcept {
    return {row_value_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
  }

  /// Cached A_:j^T A_:j.
  double col_sq_norm(std::size_t j) const noexcept { return col_sq_norm_[j]; }

  double max_col_sq_norm() const noexcept {
    return col_sq_norm_.empty() ? 0.0 : *std::max_element(col_sq_norm_.begin(), col_sq_norm_.end());
  }

  double frobenius_sq() const noexcept {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return s;
  }

  /// A_:j^T y.
  double col_dot(std::size_t j, std::span<const double> y) const noexcept {
    double s = 0.0;
    const auto rows = col_rows(j);
    const auto vals = col_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) s += vals[k] * y[rows[k]];
    return s;
  }

  /// A_i: x.
  double row_dot(std::size_t i, std::span<const double> x) const noexcept {
    double s = 0.0;
    const auto cols = row_cols(i);
    const auto vals = row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * x[cols[k]];
    return s;
  }

  std::vector<double> multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw DimensionError("multiply: vector length mismatch");
    std::vector<double> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) y[i] = row_dot(i, x);
    return y;
  }

  std::vector<double> multiply_transpose(std::span<const double> y) const {
    if (y.size() != rows_) throw DimensionError("multiply_transpose: vector length mismatch");
    std::vector<double> x(cols_);
    for (std::size_t j = 0; j < cols_; ++j) x[j] = col_dot(j, y);
    return x;
  }

  double coeff(std::size_t i, std::size_t j) const noexcept {
    const auto rows = col_rows(j);
    const auto it = std::lower_bound(rows.begin(), rows.end(), static_cast<RowIndex>(i));
    if (it == rows.end() || *it != i) return 0.0;
    return col_values(j)[static_cast<std::size_t>(it - rows.begin())];
  }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t j = 0; j < cols_; ++j) {
      const auto rows = col_rows(j);
      const auto vals = col_values(j);
      for (std::size_t k = 0; k < rows.size(); ++k) out.push_back({rows[k], j, vals[k]});
    }
    return out;
  }

 private:
  void build_row_major() {
    row_start_.assign(rows_ + 1, 0);
    for (auto r : row_index_) ++row_start_[r + 1];
    for (std::size_t i = 0; i < rows_; ++i) row_start_[i + 1] += row_start_[i];
    row_col_.resize(nnz());
    row_value_.resize(nnz());
    std::vector<std::size_t> next(row_start_.begin(), row_start_.end() - 1);
    for (std::size_t j = 0; j < cols_; ++j) {
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        const std::size_t dst = next[row_index_[k]]++;
        row_col_[dst] = j;
        row_value_[dst] = values_[k];
      }
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> col_start_{0};
  std::vector<RowIndex> row_index_;
  std::vector<double> values_;
  std::vector<double> col_sq_norm_;

  std::vector<std::size_t> row_start_{0};
  std::vector<std::size_t> row_col_;
  std::vector<double> row_value_;
};

}  // namespace lpround
