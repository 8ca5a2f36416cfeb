#include "urnc/rational.hpp"

#include "urnc/error.hpp"

namespace urnc {

namespace {

BinaryPoly exact_div(const BinaryPoly& a, const BinaryPoly& b) {
  if (b.is_one()) return a;
  return divmod(a, b).first;
}

}  // namespace

Rational::Rational(BinaryPoly num) : num_(std::move(num)), den_(BinaryPoly::one()) {}

Rational::Rational(BinaryPoly num, BinaryPoly den) {
  if (den.is_zero()) throw Error(Errc::DivisionByZero, "rational with zero denominator");
  if (num.is_zero()) {
    den_ = BinaryPoly::one();
    return;
  }
  if (den.is_one()) {
    num_ = std::move(num);
    den_ = std::move(den);
    return;
  }
  const BinaryPoly g = gcd(num, den);
  num_ = exact_div(num, g);
  den_ = exact_div(den, g);
}

Rational Rational::operator+(const Rational& rhs) const {
  if (is_zero()) return rhs;
  if (rhs.is_zero()) return *this;
  if (den_ == rhs.den_) return Rational(num_ + rhs.num_, den_);
  return Rational(num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_);
}

Rational Rational::operator*(const Rational& rhs) const {
  if (is_zero() || rhs.is_zero()) return {};
  if (den_.is_one() && rhs.den_.is_one()) return Rational(num_ * rhs.num_, BinaryPoly::one(), Canonical{});
  // Cross-cancel first so both products stay in lowest terms.
  const BinaryPoly g1 = rhs.den_.is_one() ? BinaryPoly::one() : gcd(num_, rhs.den_);
  const BinaryPoly g2 = den_.is_one() ? BinaryPoly::one() : gcd(rhs.num_, den_);
  return Rational(exact_div(num_, g1) * exact_div(rhs.num_, g2),
                  exact_div(den_, g2) * exact_div(rhs.den_, g1), Canonical{});
}

Rational Rational::inverse() const {
  if (is_zero()) throw Error(Errc::InverseOfZero, "inverse of zero in F2(z)");
  return Rational(den_, num_, Canonical{});
}

Degree Rational::max_degree() const { return std::max(num_.degree(), den_.degree()); }

std::string Rational::to_text() const { return num_.to_text() + "/" + den_.to_text(); }

Rational Rational::parse(std::string_view text) {
  const std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(BinaryPoly::parse(text));
  return Rational(BinaryPoly::parse(text.substr(0, slash)), BinaryPoly::parse(text.substr(slash + 1)));
}

}  // namespace urnc
