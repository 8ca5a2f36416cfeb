#include "urnc/poly.hpp"

#include <algorithm>
#include <bit>

#include "urnc/error.hpp"

namespace urnc {

namespace {

constexpr std::size_t kMaxSparseTerms = std::size_t{1} << 22;
constexpr std::size_t kMaxSparseDivisionSteps = std::size_t{1} << 16;

void xor_shifted(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src,
                 std::uint64_t shift) {
  const std::size_t word_shift = shift / 64;
  const unsigned bit_shift = shift % 64;
  const std::size_t need = src.size() + word_shift + 1;
  if (dst.size() < need) dst.resize(need, 0);
  if (bit_shift == 0) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i + word_shift] ^= src[i];
    return;
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i + word_shift] ^= src[i] << bit_shift;
    dst[i + word_shift + 1] ^= src[i] >> (64 - bit_shift);
  }
}

std::int64_t words_degree(const std::vector<std::uint64_t>& w) {
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] != 0) return static_cast<std::int64_t>(i * 64 + 63 - std::countl_zero(w[i]));
  }
  return -1;
}

// Sorts and removes pairs of equal exponents (coefficients are mod 2).
std::vector<BigNat> cancel_pairs(std::vector<BigNat> exps) {
  std::sort(exps.begin(), exps.end());
  std::vector<BigNat> out;
  out.reserve(exps.size());
  for (std::size_t i = 0; i < exps.size();) {
    std::size_t j = i;
    while (j < exps.size() && exps[j] == exps[i]) ++j;
    if ((j - i) & 1) out.push_back(exps[i]);
    i = j;
  }
  return out;
}

std::vector<BigNat> sym_diff(const std::vector<BigNat>& a, const std::vector<BigNat>& b) {
  std::vector<BigNat> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

const BigNat& Degree::value() const {
  if (!value_) throw Error(Errc::ParameterOutOfRange, "degree of the zero polynomial");
  return *value_;
}

std::strong_ordering Degree::operator<=>(const Degree& rhs) const {
  if (!value_ || !rhs.value_) {
    if (!value_ && !rhs.value_) return std::strong_ordering::equal;
    return !value_ ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return *value_ <=> *rhs.value_;
}

std::string Degree::to_string() const { return value_ ? value_->to_string() : "-inf"; }

BinaryPoly BinaryPoly::one() { return monomial(std::uint64_t{0}); }

BinaryPoly BinaryPoly::monomial(std::uint64_t exponent) {
  if (exponent >= kDenseBitLimit) return monomial(BigNat(exponent));
  BinaryPoly p;
  p.words_.assign(exponent / 64 + 1, 0);
  p.words_.back() = std::uint64_t{1} << (exponent % 64);
  return p;
}

BinaryPoly BinaryPoly::monomial(const BigNat& exponent) {
  BinaryPoly p;
  p.sparse_ = true;
  p.exps_.push_back(exponent);
  return p;
}

BinaryPoly BinaryPoly::from_coeffs(const std::vector<bool>& coeffs) {
  BinaryPoly p;
  p.words_.assign((coeffs.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i]) p.words_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  p.trim();
  return p;
}

BinaryPoly BinaryPoly::from_words(std::vector<std::uint64_t> words) {
  BinaryPoly p;
  p.words_ = std::move(words);
  p.trim();
  return p;
}

BinaryPoly BinaryPoly::from_bitstring(std::string_view bits) {
  std::vector<bool> coeffs(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw Error(Errc::ParameterOutOfRange, "bitstring may only contain 0 and 1");
    }
    coeffs[i] = bits[i] == '1';
  }
  return from_coeffs(coeffs);
}

BinaryPoly BinaryPoly::from_exponents(std::vector<BigNat> exponents) {
  BinaryPoly p;
  p.sparse_ = true;
  p.exps_ = cancel_pairs(std::move(exponents));
  return p;
}

void BinaryPoly::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

bool BinaryPoly::is_one() const {
  if (sparse_) return exps_.size() == 1 && exps_[0].is_zero();
  return words_.size() == 1 && words_[0] == 1;
}

Degree BinaryPoly::degree() const {
  if (is_zero()) return Degree::minus_infinity();
  if (sparse_) return Degree(exps_.back());
  return Degree(BigNat(static_cast<std::uint64_t>(words_degree(words_))));
}

std::int64_t BinaryPoly::dense_degree() const {
  if (sparse_) throw Error(Errc::SparseLimit, "dense_degree on a sparse polynomial");
  return words_degree(words_);
}

std::optional<BigNat> BinaryPoly::low_degree() const {
  if (is_zero()) return std::nullopt;
  if (sparse_) return exps_.front();
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] != 0) return BigNat(i * 64 + std::countr_zero(words_[i]));
  }
  return std::nullopt;
}

std::size_t BinaryPoly::term_count() const {
  if (sparse_) return exps_.size();
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

bool BinaryPoly::coeff(std::uint64_t i) const {
  if (sparse_) return std::binary_search(exps_.begin(), exps_.end(), BigNat(i));
  if (i / 64 >= words_.size()) return false;
  return (words_[i / 64] >> (i % 64)) & 1u;
}

std::vector<BigNat> BinaryPoly::exponents() const {
  if (sparse_) return exps_;
  std::vector<BigNat> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (std::uint64_t w = words_[i]; w != 0; w &= w - 1) {
      out.emplace_back(i * 64 + std::countr_zero(w));
    }
  }
  return out;
}

BinaryPoly BinaryPoly::to_sparse() const {
  if (sparse_) return *this;
  BinaryPoly p;
  p.sparse_ = true;
  p.exps_ = exponents();
  return p;
}

bool BinaryPoly::fits_dense() const {
  if (!sparse_) return true;
  return exps_.empty() || exps_.back() < BigNat(kDenseBitLimit);
}

BinaryPoly BinaryPoly::to_dense() const {
  if (!sparse_) return *this;
  if (!fits_dense()) throw Error(Errc::SparseLimit, "polynomial degree exceeds the dense bound");
  BinaryPoly p;
  if (exps_.empty()) return p;
  const std::uint64_t top = exps_.back().to_u64();
  p.words_.assign(top / 64 + 1, 0);
  for (const auto& e : exps_) {
    const std::uint64_t k = e.to_u64();
    p.words_[k / 64] |= std::uint64_t{1} << (k % 64);
  }
  return p;
}

const std::vector<std::uint64_t>& BinaryPoly::words() const {
  if (sparse_) throw Error(Errc::SparseLimit, "words() on a sparse polynomial");
  return words_;
}

std::string BinaryPoly::to_bitstring(std::size_t length) const {
  const BinaryPoly d = to_dense();
  if (d.dense_degree() >= static_cast<std::int64_t>(length)) {
    throw Error(Errc::DegreeOverflow, "polynomial does not fit " + std::to_string(length) + " bits");
  }
  std::string out(length, '0');
  for (std::size_t i = 0; i < length; ++i) {
    if (d.coeff(i)) out[i] = '1';
  }
  return out;
}

std::string BinaryPoly::to_text() const {
  if (sparse_) {
    std::string out = "{";
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (i) out += ',';
      out += exps_[i].to_string();
    }
    return out + "}";
  }
  static constexpr char kHex[] = "0123456789abcdef";
  if (words_.empty()) return "0x0";
  std::string out = "0x";
  bool leading = true;
  for (std::size_t i = words_.size(); i-- > 0;) {
    for (int nib = 15; nib >= 0; --nib) {
      const unsigned v = (words_[i] >> (nib * 4)) & 0xfu;
      if (leading && v == 0) continue;
      leading = false;
      out += kHex[v];
    }
  }
  return out;
}

BinaryPoly BinaryPoly::parse(std::string_view text) {
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    std::vector<std::uint64_t> words;
    std::size_t nibble = 0;
    if (text.size() == 2) throw Error(Errc::ParameterOutOfRange, "empty hex polynomial");
    for (std::size_t i = text.size(); i-- > 2; ++nibble) {
      const char c = text[i];
      unsigned v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else throw Error(Errc::ParameterOutOfRange, "bad hex digit in polynomial");
      if (nibble / 16 >= words.size()) words.push_back(0);
      words[nibble / 16] |= std::uint64_t{v} << ((nibble % 16) * 4);
    }
    return from_words(std::move(words));
  }
  if (text.size() >= 2 && text.front() == '{' && text.back() == '}') {
    std::vector<BigNat> exps;
    std::string_view body = text.substr(1, text.size() - 2);
    while (!body.empty()) {
      const std::size_t comma = body.find(',');
      exps.push_back(BigNat::parse(body.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    return from_exponents(std::move(exps));
  }
  throw Error(Errc::ParameterOutOfRange, "unrecognised polynomial text '" + std::string(text) + "'");
}

BinaryPoly BinaryPoly::operator+(const BinaryPoly& rhs) const {
  if (!sparse_ && !rhs.sparse_) {
    BinaryPoly out;
    const auto& big = words_.size() >= rhs.words_.size() ? words_ : rhs.words_;
    const auto& small = words_.size() >= rhs.words_.size() ? rhs.words_ : words_;
    out.words_ = big;
    for (std::size_t i = 0; i < small.size(); ++i) out.words_[i] ^= small[i];
    out.trim();
    return out;
  }
  BinaryPoly out;
  out.sparse_ = true;
  out.exps_ = sym_diff(exponents(), rhs.exponents());
  return out;
}

BinaryPoly BinaryPoly::operator*(const BinaryPoly& rhs) const {
  if (is_zero() || rhs.is_zero()) {
    return sparse_ || rhs.sparse_ ? BinaryPoly::from_exponents({}) : BinaryPoly{};
  }
  if (!sparse_ && !rhs.sparse_) {
    const std::int64_t deg = words_degree(words_) + words_degree(rhs.words_);
    if (static_cast<std::uint64_t>(deg) < kDenseBitLimit) {
      const bool swap = term_count() > rhs.term_count();
      const auto& sparse_side = swap ? rhs.words_ : words_;
      const auto& other = swap ? words_ : rhs.words_;
      BinaryPoly out;
      out.words_.assign(sparse_side.size() + other.size() + 1, 0);
      for (std::size_t i = 0; i < sparse_side.size(); ++i) {
        for (std::uint64_t w = sparse_side[i]; w != 0; w &= w - 1) {
          xor_shifted(out.words_, other, i * 64 + std::countr_zero(w));
        }
      }
      out.trim();
      return out;
    }
  }
  const auto a = exponents();
  const auto b = rhs.exponents();
  if (a.size() * b.size() > kMaxSparseTerms) {
    throw Error(Errc::SparseLimit, "sparse product has too many terms");
  }
  std::vector<BigNat> prod;
  prod.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) prod.push_back(x + y);
  }
  return from_exponents(std::move(prod));
}

BinaryPoly BinaryPoly::shifted(const BigNat& k) const {
  if (!sparse_ && k.fits_u64() && words_degree(words_) + k.to_u64() < kDenseBitLimit) {
    BinaryPoly out;
    xor_shifted(out.words_, words_, k.to_u64());
    out.trim();
    return out;
  }
  BinaryPoly out;
  out.sparse_ = true;
  for (const auto& e : exponents()) out.exps_.push_back(e + k);
  return out;
}

bool BinaryPoly::operator==(const BinaryPoly& rhs) const {
  if (!sparse_ && !rhs.sparse_) return words_ == rhs.words_;
  if (sparse_ && rhs.sparse_) return exps_ == rhs.exps_;
  return exponents() == rhs.exponents();
}

bool BinaryPoly::less(const BinaryPoly& a, const BinaryPoly& b) {
  const auto ea = a.exponents();
  const auto eb = b.exponents();
  return std::lexicographical_compare(ea.rbegin(), ea.rend(), eb.rbegin(), eb.rend());
}

std::pair<BinaryPoly, BinaryPoly> divmod(const BinaryPoly& a, const BinaryPoly& b) {
  if (b.is_zero()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
  if (a.is_dense() && b.is_dense()) {
    const std::int64_t db = b.dense_degree();
    std::vector<std::uint64_t> r = a.words();
    std::vector<std::uint64_t> q;
    for (std::int64_t dr = words_degree(r); dr >= db; dr = words_degree(r)) {
      const std::uint64_t s = static_cast<std::uint64_t>(dr - db);
      if (q.size() <= s / 64) q.resize(s / 64 + 1, 0);
      q[s / 64] |= std::uint64_t{1} << (s % 64);
      xor_shifted(r, b.words(), s);
    }
    return {BinaryPoly::from_words(std::move(q)), BinaryPoly::from_words(std::move(r))};
  }
  BinaryPoly r = a.to_sparse();
  std::vector<BigNat> q;
  const BigNat db = b.degree().value();
  for (std::size_t steps = 0; !r.is_zero() && r.degree().value() >= db; ++steps) {
    if (steps >= kMaxSparseDivisionSteps) {
      throw Error(Errc::SparseLimit, "sparse division exceeds the step limit");
    }
    BigNat s = r.degree().value() - db;
    r = r + b.shifted(s);
    q.push_back(std::move(s));
  }
  return {BinaryPoly::from_exponents(std::move(q)), r};
}

BinaryPoly gcd(const BinaryPoly& a, const BinaryPoly& b) {
  if (a.is_zero() && b.is_zero()) throw Error(Errc::GcdOfZeros, "gcd(0, 0) is undefined");
  BinaryPoly x = a;
  BinaryPoly y = b;
  while (!y.is_zero()) {
    BinaryPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x;
}

}  // namespace urnc
