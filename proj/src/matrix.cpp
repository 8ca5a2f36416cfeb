#include "urnc/matrix.hpp"

#include <algorithm>
#include <numeric>

#include "urnc/error.hpp"

namespace urnc {

namespace {

constexpr std::size_t kMaxPermutationOrder = 8;

// Row-reduces `m` in place (forward elimination only). Returns the pivot
// column of each pivot row and the number of row swaps performed.
std::vector<std::size_t> forward_eliminate(PolyMatrix& m, std::size_t& swaps) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  swaps = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(p, c), m(row, c));
      ++swaps;
    }
    const Rational inv = m(row, col).inverse();
    for (std::size_t r = row + 1; r < m.rows(); ++r) {
      if (m(r, col).is_zero()) continue;
      const Rational factor = m(r, col) * inv;
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) += factor * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

Rational permutation_det(const PolyMatrix& m) {
  const std::size_t n = m.rows();
  if (n > kMaxPermutationOrder) {
    throw Error(Errc::SparseLimit, "sparse determinant limited to 8x8");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rational sum;
  // Over characteristic 2 the permutation sign is irrelevant.
  do {
    Rational term = Rational::one();
    for (std::size_t r = 0; r < n && !term.is_zero(); ++r) term *= m(r, perm[r]);
    sum += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

std::size_t minor_rank(const PolyMatrix& m) {
  const std::size_t k_max = std::min(m.rows(), m.cols());
  for (std::size_t k = k_max; k > 0; --k) {
    std::vector<bool> rsel(m.rows(), false), csel(m.cols(), false);
    std::fill(rsel.begin(), rsel.begin() + k, true);
    do {
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.begin(), csel.begin() + k, true);
      do {
        PolyMatrix sub(k, k);
        std::size_t i = 0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
          if (!rsel[r]) continue;
          std::size_t j = 0;
          for (std::size_t c = 0; c < m.cols(); ++c) {
            if (csel[c]) sub(i, j++) = m(r, c);
          }
          ++i;
        }
        if (!permutation_det(sub).is_zero()) return k;
      } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
  }
  return 0;
}

}  // namespace

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(Errc::ParameterOutOfRange, "matrix entry count does not match its shape");
  }
}

PolyMatrix PolyMatrix::identity(std::size_t n) {
  PolyMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational::one();
  return m;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error(Errc::ParameterOutOfRange, "matrix shapes do not multiply");
  PolyMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(r, k);
      if (a.is_zero()) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
    }
  }
  return out;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  }
  return out;
}

bool PolyMatrix::has_sparse_entries() const {
  return std::any_of(data_.begin(), data_.end(),
                     [](const Rational& q) { return !q.num().is_dense() || !q.den().is_dense(); });
}

std::size_t rank(const PolyMatrix& m) {
  if (m.has_sparse_entries()) return minor_rank(m);
  PolyMatrix work = m;
  std::size_t swaps = 0;
  return forward_eliminate(work, swaps).size();
}

Rational det(const PolyMatrix& m) {
  if (!m.is_square()) throw Error(Errc::NonSquare, "determinant of a non-square matrix");
  if (m.rows() == 0) return Rational::one();
  if (m.has_sparse_entries()) return permutation_det(m);
  PolyMatrix work = m;
  std::size_t swaps = 0;
  const auto pivots = forward_eliminate(work, swaps);
  if (pivots.size() < m.rows()) return Rational::zero();
  Rational d = Rational::one();
  for (std::size_t i = 0; i < m.rows(); ++i) d *= work(i, i);
  return d;
}

PolyMatrix inverse(const PolyMatrix& m) {
  if (!m.is_square()) throw Error(Errc::NonSquare, "inverse of a non-square matrix");
  if (m.has_sparse_entries()) {
    throw Error(Errc::SparseLimit, "inverse of a sparse matrix is not supported");
  }
  const std::size_t n = m.rows();
  PolyMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = Rational::one();
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && aug(p, col).is_zero()) ++p;
    if (p == n) throw Error(Errc::SingularMatrix, "matrix is singular over F2(z)");
    if (p != col) {
      for (std::size_t c = 0; c < 2 * n; ++c) std::swap(aug(p, c), aug(col, c));
    }
    const Rational inv = aug(col, col).inverse();
    for (std::size_t c = col; c < 2 * n; ++c) aug(col, c) *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || aug(r, col).is_zero()) continue;
      const Rational factor = aug(r, col);
      for (std::size_t c = col; c < 2 * n; ++c) aug(r, c) += factor * aug(col, c);
    }
  }
  PolyMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) = aug(r, n + c);
  }
  return out;
}

}  // namespace urnc
