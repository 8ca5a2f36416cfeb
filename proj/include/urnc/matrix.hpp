#pragma once

#include <cstddef>
#include <vector>

#include "urnc/rational.hpp"

namespace urnc {

/// Dense row-major matrix over F2(z).
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  PolyMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

  static PolyMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  PolyMatrix operator*(const PolyMatrix& rhs) const;
  PolyMatrix transpose() const;
  bool operator==(const PolyMatrix& rhs) const = default;

  /// True when some entry holds a sparse polynomial; such matrices go
  /// through the division-free routes below.
  bool has_sparse_entries() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Rank over F2(z). Gaussian elimination on Rational entries, pivot = first
/// nonzero entry in column order. Sparse matrices use a minor search instead.
std::size_t rank(const PolyMatrix& m);

/// Exact determinant; NonSquare error otherwise. Sparse matrices are
/// expanded over permutations (up to 8x8) to avoid sparse gcds.
Rational det(const PolyMatrix& m);

/// Gauss-Jordan inverse; SingularMatrix error when det = 0.
PolyMatrix inverse(const PolyMatrix& m);

}  // namespace urnc
