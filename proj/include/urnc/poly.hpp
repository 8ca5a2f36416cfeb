#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urnc/bignat.hpp"

namespace urnc {

/// Degree of a binary polynomial. The zero polynomial has the distinguished
/// degree "minus infinity", which compares below every integer degree.
class Degree {
 public:
  Degree() = default;  // minus infinity
  explicit Degree(BigNat value) : value_(std::move(value)) {}

  static Degree minus_infinity() { return Degree(); }

  bool is_minus_infinity() const noexcept { return !value_.has_value(); }
  const BigNat& value() const;

  std::strong_ordering operator<=>(const Degree& rhs) const;
  bool operator==(const Degree& rhs) const = default;

  std::string to_string() const;

 private:
  std::optional<BigNat> value_;
};

/// Element of F2[z].
///
/// Two representations: a dense coefficient bitstring (bit i is the
/// coefficient of z^i) for moderate degrees, and a sparse sorted exponent set
/// with BigNat exponents for monomials like z^(2^K). Equality is
/// mathematical, independent of representation. Binary operations stay dense
/// when both operands are dense and switch to sparse otherwise.
class BinaryPoly {
 public:
  /// Largest dense degree + 1 that conversions and dense results accept.
  static constexpr std::uint64_t kDenseBitLimit = std::uint64_t{1} << 24;

  BinaryPoly() = default;  // zero, dense

  static BinaryPoly zero() { return {}; }
  static BinaryPoly one();
  static BinaryPoly monomial(std::uint64_t exponent);
  /// Sparse monomial z^e for arbitrary e.
  static BinaryPoly monomial(const BigNat& exponent);
  /// Dense polynomial from coefficient bits, low degree first.
  static BinaryPoly from_coeffs(const std::vector<bool>& coeffs);
  static BinaryPoly from_words(std::vector<std::uint64_t> words);
  /// "1011" -> 1 + z^2 + z^3 (character i is the coefficient of z^i).
  static BinaryPoly from_bitstring(std::string_view bits);
  /// Sparse polynomial from an exponent list; duplicate exponents cancel.
  static BinaryPoly from_exponents(std::vector<BigNat> exponents);

  bool is_dense() const noexcept { return !sparse_; }
  bool is_zero() const noexcept { return sparse_ ? exps_.empty() : words_.empty(); }
  bool is_one() const;

  Degree degree() const;
  /// Dense-only shortcut: -1 for zero.
  std::int64_t dense_degree() const;
  /// Lowest exponent with a nonzero coefficient; zero polynomial -> nullopt.
  std::optional<BigNat> low_degree() const;
  std::size_t term_count() const;
  bool coeff(std::uint64_t i) const;

  BinaryPoly to_sparse() const;
  /// Throws SparseLimit when the degree exceeds the dense bound.
  BinaryPoly to_dense() const;
  bool fits_dense() const;

  const std::vector<std::uint64_t>& words() const;  // dense only
  std::vector<BigNat> exponents() const;            // ascending

  /// Coefficient bits low-degree first, exactly `length` of them. Throws
  /// when a nonzero coefficient lies at or above `length`.
  std::string to_bitstring(std::size_t length) const;

  /// "0x<hex>" (most significant nibble first) when dense, "{e0,e1,...}" when
  /// sparse. Both forms are accepted by parse().
  std::string to_text() const;
  static BinaryPoly parse(std::string_view text);

  BinaryPoly operator+(const BinaryPoly& rhs) const;
  BinaryPoly operator*(const BinaryPoly& rhs) const;
  BinaryPoly& operator+=(const BinaryPoly& rhs) { return *this = *this + rhs; }
  BinaryPoly& operator*=(const BinaryPoly& rhs) { return *this = *this * rhs; }
  BinaryPoly shifted(const BigNat& k) const;  // multiply by z^k

  bool operator==(const BinaryPoly& rhs) const;

  /// Total order used for canonical sorting (by degree, then coefficients).
  static bool less(const BinaryPoly& a, const BinaryPoly& b);

 private:
  bool sparse_ = false;
  std::vector<std::uint64_t> words_;  // dense: trimmed, last word nonzero
  std::vector<BigNat> exps_;          // sparse: ascending, distinct

  void trim();
};

/// Quotient and remainder with a = q*b + r, deg r < deg b.
std::pair<BinaryPoly, BinaryPoly> divmod(const BinaryPoly& a, const BinaryPoly& b);
BinaryPoly gcd(const BinaryPoly& a, const BinaryPoly& b);

}  // namespace urnc
