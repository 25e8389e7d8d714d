#pragma once

// Exact linear algebra over F_q: incremental row echelon basis and null vectors.

#include <span>
#include <vector>

#include "rmlt/error.hpp"
#include "rmlt/gf.hpp"

namespace rmlt {

/// Row space of a growing set of vectors. Each stored row has a leading 1 at
/// its pivot and zeros at the pivots of all earlier rows, so reducing in
/// insertion order is exact.
class EchelonBasis {
 public:
  EchelonBasis(Field field, std::size_t dim) : field_(std::move(field)), dim_(dim) {}

  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  /// Adds v to the span; true iff the rank grew.
  bool insert(std::span<const Element> v) {
    std::vector<Element> w = reduce(v);
    std::size_t pivot = 0;
    while (pivot < dim_ && w[pivot] == 0) ++pivot;
    if (pivot == dim_) return false;
    const Element scale = field_.inv(w[pivot]);
    for (auto& x : w) x = field_.mul(x, scale);
    rows_.push_back(std::move(w));
    pivots_.push_back(pivot);
    return true;
  }

  bool contains(std::span<const Element> v) const {
    for (Element x : reduce(v))
      if (x != 0) return false;
    return true;
  }

 private:
  std::vector<Element> reduce(std::span<const Element> v) const {
    if (v.size() != dim_) throw Error(ErrorCode::ArityMismatch, "vector length differs from basis dimension");
    std::vector<Element> w(v.begin(), v.end());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Element c = w[pivots_[r]];
      if (c == 0) continue;
      const Element neg_c = field_.neg(c);
      const auto& row = rows_[r];
      for (std::size_t i = pivots_[r]; i < dim_; ++i)
        if (row[i] != 0) w[i] = field_.add(w[i], field_.mul(neg_c, row[i]));
    }
    return w;
  }

  Field field_;
  std::size_t dim_;
  std::vector<std::vector<Element>> rows_;
  std::vector<std::size_t> pivots_;
};

/// A nonzero solution of M x = 0 (M given by rows of equal length cols);
/// the first free column is set to 1. Throws when M has full column rank.
inline std::vector<Element> null_vector(const Field& f, std::vector<std::vector<Element>> m, std::size_t cols) {
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t sel = r;
    while (sel < m.size() && m[sel][c] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[r], m[sel]);
    const Element inv = f.inv(m[r][c]);
    for (auto& x : m[r]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Element factor = f.neg(m[i][c]);
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = f.add(m[i][j], f.mul(factor, m[r][j]));
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (free_col < cols && is_pivot[free_col]) ++free_col;
  if (free_col == cols) throw Error(ErrorCode::OutOfRange, "matrix has trivial null space");
  std::vector<Element> x(cols, 0);
  x[free_col] = 1;
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) x[pivot_cols[i]] = f.neg(m[i][free_col]);
  return x;
}

}  // namespace rmlt
