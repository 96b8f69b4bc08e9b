#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace degflag {

using QVector = std::vector<Rational>;

/// Dense exact-rational matrix.  Row reduction uses positional pivoting only;
/// no numerical concerns arise over Q.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static QMatrix from_rows(std::vector<QVector> rows) {
    QMatrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.empty() ? 0 : rows.front().size();
    m.data_.reserve(m.rows_ * m.cols_);
    for (auto& r : rows) {
      if (r.size() != m.cols_) throw structural_error("ragged rows");
      for (auto& x : r) m.data_.push_back(std::move(x));
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  QVector row(std::size_t r) const {
    return QVector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
  }

  void append_row(const QVector& v) {
    if (cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw structural_error("row width mismatch");
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
  }

  bool operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  QMatrix operator*(const QMatrix& o) const {
    if (cols_ != o.rows_) throw structural_error("shape mismatch in product");
    QMatrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Rational& a = at(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out.at(i, j) += a * o.at(k, j);
      }
    return out;
  }

  /// In-place reduced row echelon form with the given left-to-right column
  /// priority (identity order by default).  Returns the rank; zero rows are
  /// dropped, so the result is the canonical basis of the row space.
  std::size_t rref(const std::vector<std::size_t>* column_order = nullptr) {
    std::vector<std::size_t> order;
    if (column_order) {
      order = *column_order;
    } else {
      order.resize(cols_);
      for (std::size_t c = 0; c < cols_; ++c) order[c] = c;
    }
    std::size_t pivot_row = 0;
    for (std::size_t oc = 0; oc < order.size() && pivot_row < rows_; ++oc) {
      std::size_t c = order[oc];
      std::size_t r = pivot_row;
      while (r < rows_ && at(r, c) == 0) ++r;
      if (r == rows_) continue;
      swap_rows(r, pivot_row);
      Rational inv = 1 / at(pivot_row, c);
      for (std::size_t j = 0; j < cols_; ++j) at(pivot_row, j) *= inv;
      for (std::size_t k = 0; k < rows_; ++k) {
        if (k == pivot_row || at(k, c) == 0) continue;
        Rational f = at(k, c);
        for (std::size_t j = 0; j < cols_; ++j) at(k, j) -= f * at(pivot_row, j);
      }
      ++pivot_row;
    }
    rows_ = pivot_row;
    data_.resize(rows_ * cols_);
    return pivot_row;
  }

  std::size_t rank() const {
    QMatrix copy = *this;
    return copy.rref();
  }

  /// Pivot columns of the echelon form under the given column priority.
  std::vector<std::size_t> pivot_columns(const std::vector<std::size_t>& column_order) const {
    QMatrix copy = *this;
    copy.rref(&column_order);
    std::vector<std::size_t> pivots;
    for (std::size_t r = 0; r < copy.rows(); ++r) {
      for (std::size_t c : column_order) {
        if (copy.at(r, c) != 0) {
          pivots.push_back(c);
          break;
        }
      }
    }
    std::sort(pivots.begin(), pivots.end());
    return pivots;
  }

  /// Does the row space contain v?
  bool row_space_contains(const QVector& v) const {
    QMatrix copy = *this;
    copy.append_row(v);
    return copy.rref() == rank();
  }

  /// Is span(other) a subspace of span(this)?
  bool row_space_contains_all(const QMatrix& other) const {
    QMatrix joint = *this;
    for (std::size_t r = 0; r < other.rows(); ++r) joint.append_row(other.row(r));
    return joint.rref() == rank();
  }

 private:
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Solve A x = b column-wise for x (A with independent columns).  Throws
/// precondition_error when b is outside the column space.
inline QMatrix solve_columns(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows()) throw structural_error("shape mismatch in solve");
  // Eliminate on [A | b] and read the coordinates off the echelon form.
  QMatrix aug(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) aug.at(i, a.cols() + j) = b.at(i, j);
  }
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_of_col(a.cols(), SIZE_MAX);
  for (std::size_t c = 0; c < a.cols() && pivot_row < aug.rows(); ++c) {
    std::size_t r = pivot_row;
    while (r < aug.rows() && aug.at(r, c) == 0) ++r;
    if (r == aug.rows()) continue;
    for (std::size_t j = 0; j < aug.cols(); ++j) std::swap(aug.at(r, j), aug.at(pivot_row, j));
    Rational inv = 1 / aug.at(pivot_row, c);
    for (std::size_t j = 0; j < aug.cols(); ++j) aug.at(pivot_row, j) *= inv;
    for (std::size_t k = 0; k < aug.rows(); ++k) {
      if (k == pivot_row || aug.at(k, c) == 0) continue;
      Rational f = aug.at(k, c);
      for (std::size_t j = 0; j < aug.cols(); ++j) aug.at(k, j) -= f * aug.at(pivot_row, j);
    }
    pivot_of_col[c] = pivot_row++;
  }
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (pivot_of_col[c] == SIZE_MAX) throw precondition_error("columns of A are dependent");
  for (std::size_t r = pivot_row; r < aug.rows(); ++r)
    for (std::size_t j = a.cols(); j < aug.cols(); ++j)
      if (aug.at(r, j) != 0) throw precondition_error("b outside the column space of A");
  QMatrix x(a.cols(), b.cols());
  for (std::size_t c = 0; c < a.cols(); ++c)
    for (std::size_t j = 0; j < b.cols(); ++j) x.at(c, j) = aug.at(pivot_of_col[c], a.cols() + j);
  return x;
}

/// Incrementally maintained row space over sparse coordinates.  Rows are kept
/// reduced with distinct leading indices; used by the module-closure code
/// where the ambient dimension runs into the thousands but each weight block
/// stays small.
class SparseRowSpace {
 public:
  using SparseVec = std::map<std::size_t, Rational>;

  /// Reduces v against the stored rows.  If a nonzero residual remains it is
  /// normalized, stored, and returned; otherwise nullptr (v was dependent).
  const SparseVec* insert(SparseVec v) {
    reduce(v);
    if (v.empty()) return nullptr;
    Rational inv = 1 / v.begin()->second;
    for (auto& [idx, coeff] : v) coeff *= inv;
    auto [it, _] = rows_.emplace(v.begin()->first, std::move(v));
    return &it->second;
  }

  bool contains(SparseVec v) const {
    reduce(v);
    return v.empty();
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  void reduce(SparseVec& v) const {
    while (!v.empty()) {
      auto it = rows_.find(v.begin()->first);
      if (it == rows_.end()) return;
      Rational f = v.begin()->second;
      for (const auto& [idx, coeff] : it->second) {
        auto [vit, inserted] = v.try_emplace(idx, 0);
        vit->second -= f * coeff;
        if (vit->second == 0) v.erase(vit);
      }
    }
  }

  std::map<std::size_t, SparseVec> rows_;  // keyed by leading index
};

}  // namespace degflag
