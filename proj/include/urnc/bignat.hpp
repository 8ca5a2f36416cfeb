#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace urnc {

using BigInt = boost::multiprecision::cpp_int;

/// Non-negative integer stored as the sorted set of its one-bits.
///
/// Bit positions are themselves arbitrary precision, so values such as
/// 2^(2^500) are cheap to hold. Used as the exponent type of sparse
/// polynomials; sums of distinct powers of two never carry.
class BigNat {
 public:
  BigNat() = default;
  BigNat(std::uint64_t v);  // NOLINT(google-explicit-constructor)

  static BigNat from_int(const BigInt& v);
  static BigNat pow2(BigInt position);

  bool is_zero() const noexcept { return bits_.empty(); }
  const std::vector<BigInt>& bits() const noexcept { return bits_; }
  /// Index of the highest one-bit plus one; zero for zero.
  BigInt bit_length() const;

  bool fits_u64() const;
  std::uint64_t to_u64() const;
  /// Dense value, or nullopt when more than max_bits wide.
  std::optional<BigInt> to_int(std::size_t max_bits = 1u << 16) const;

  BigNat operator+(const BigNat& rhs) const;
  /// Throws SparseLimit when rhs > *this or the result has too many one-bits.
  BigNat operator-(const BigNat& rhs) const;

  std::strong_ordering operator<=>(const BigNat& rhs) const;
  bool operator==(const BigNat& rhs) const = default;

  /// Decimal when at most 4096 bits wide, otherwise "2^a+2^b+..." (ascending).
  std::string to_string() const;
  static BigNat parse(std::string_view text);

 private:
  std::vector<BigInt> bits_;  // ascending, distinct
};

}  // namespace urnc
