#pragma once

#include <string>
#include <string_view>

#include "urnc/poly.hpp"

namespace urnc {

/// Element of F2(z) kept in lowest terms: gcd(num, den) = 1, den != 0, and
/// zero is 0/1. Over F2 every nonzero polynomial is monic, so gcd reduction
/// is the whole normalization.
class Rational {
 public:
  Rational() : den_(BinaryPoly::one()) {}
  Rational(BinaryPoly num);  // NOLINT(google-explicit-constructor)
  Rational(BinaryPoly num, BinaryPoly den);

  static Rational zero() { return {}; }
  static Rational one() { return Rational(BinaryPoly::one()); }

  const BinaryPoly& num() const noexcept { return num_; }
  const BinaryPoly& den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  Rational operator+(const Rational& rhs) const;
  Rational operator-(const Rational& rhs) const { return *this + rhs; }
  Rational operator*(const Rational& rhs) const;
  Rational operator/(const Rational& rhs) const { return *this * rhs.inverse(); }
  Rational& operator+=(const Rational& rhs) { return *this = *this + rhs; }
  Rational& operator*=(const Rational& rhs) { return *this = *this * rhs; }
  Rational inverse() const;

  bool operator==(const Rational& rhs) const { return num_ == rhs.num_ && den_ == rhs.den_; }

  /// Largest of the numerator and denominator degrees (-inf only for zero).
  Degree max_degree() const;

  /// "num/den" using the polynomial text form.
  std::string to_text() const;
  static Rational parse(std::string_view text);

 private:
  struct Canonical {};
  Rational(BinaryPoly num, BinaryPoly den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}

  BinaryPoly num_;
  BinaryPoly den_;
};

}  // namespace urnc
