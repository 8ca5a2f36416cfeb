#include "urnc/bignat.hpp"

#include <algorithm>
#include <set>

#include "urnc/error.hpp"

namespace urnc {

namespace {

constexpr std::size_t kMaxSubtractionBits = 1u << 20;
constexpr std::size_t kDecimalBitLimit = 4096;

}  // namespace

BigNat::BigNat(std::uint64_t v) {
  for (unsigned i = 0; v != 0; ++i, v >>= 1) {
    if (v & 1u) bits_.emplace_back(i);
  }
}

BigNat BigNat::from_int(const BigInt& v) {
  if (v < 0) throw Error(Errc::ParameterOutOfRange, "negative value for BigNat");
  BigNat out;
  if (v == 0) return out;
  const std::size_t top = boost::multiprecision::msb(v);
  for (std::size_t i = 0; i <= top; ++i) {
    if (boost::multiprecision::bit_test(v, static_cast<unsigned>(i))) out.bits_.emplace_back(i);
  }
  return out;
}

BigNat BigNat::pow2(BigInt position) {
  if (position < 0) throw Error(Errc::ParameterOutOfRange, "negative bit position");
  BigNat out;
  out.bits_.push_back(std::move(position));
  return out;
}

BigInt BigNat::bit_length() const { return bits_.empty() ? BigInt(0) : BigInt(bits_.back() + 1); }

bool BigNat::fits_u64() const { return bits_.empty() || bits_.back() < 64; }

std::uint64_t BigNat::to_u64() const {
  if (!fits_u64()) throw Error(Errc::SparseLimit, "value does not fit 64 bits");
  std::uint64_t v = 0;
  for (const auto& b : bits_) v |= std::uint64_t{1} << static_cast<unsigned>(b);
  return v;
}

std::optional<BigInt> BigNat::to_int(std::size_t max_bits) const {
  if (!bits_.empty() && bits_.back() >= max_bits) return std::nullopt;
  BigInt v = 0;
  for (const auto& b : bits_) boost::multiprecision::bit_set(v, static_cast<unsigned>(b));
  return v;
}

BigNat BigNat::operator+(const BigNat& rhs) const {
  BigNat out;
  out.bits_.reserve(bits_.size() + rhs.bits_.size() + 1);
  std::size_t i = 0, j = 0;
  std::optional<BigInt> carry;
  while (i < bits_.size() || j < rhs.bits_.size() || carry) {
    // Smallest pending position among the three streams.
    const BigInt* low = nullptr;
    if (i < bits_.size()) low = &bits_[i];
    if (j < rhs.bits_.size() && (!low || rhs.bits_[j] < *low)) low = &rhs.bits_[j];
    if (carry && (!low || *carry < *low)) low = &*carry;
    const BigInt pos = *low;
    int count = 0;
    if (i < bits_.size() && bits_[i] == pos) { ++count; ++i; }
    if (j < rhs.bits_.size() && rhs.bits_[j] == pos) { ++count; ++j; }
    if (carry && *carry == pos) { ++count; carry.reset(); }
    if (count & 1) out.bits_.push_back(pos);
    if (count >= 2) carry = pos + 1;
  }
  return out;
}

BigNat BigNat::operator-(const BigNat& rhs) const {
  if (*this < rhs) throw Error(Errc::SparseLimit, "BigNat subtraction would be negative");
  std::set<BigInt> acc(bits_.begin(), bits_.end());
  for (const auto& p : rhs.bits_) {
    auto it = acc.lower_bound(p);
    if (it != acc.end() && *it == p) {
      acc.erase(it);
      continue;
    }
    // Borrow from the next higher one-bit: q -> bits p..q-1.
    const BigInt q = *it;
    acc.erase(it);
    if (q - p > BigInt(kMaxSubtractionBits)) {
      throw Error(Errc::SparseLimit, "subtraction produces an over-long run of one-bits");
    }
    for (BigInt k = p; k < q; ++k) acc.insert(k);
    if (acc.size() > kMaxSubtractionBits) throw Error(Errc::SparseLimit, "subtraction too wide");
  }
  BigNat out;
  out.bits_.assign(acc.begin(), acc.end());
  return out;
}

std::strong_ordering BigNat::operator<=>(const BigNat& rhs) const {
  auto a = bits_.rbegin();
  auto b = rhs.bits_.rbegin();
  for (; a != bits_.rend() && b != rhs.bits_.rend(); ++a, ++b) {
    if (*a != *b) return *a < *b ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a == bits_.rend() && b == rhs.bits_.rend()) return std::strong_ordering::equal;
  return a == bits_.rend() ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::string BigNat::to_string() const {
  if (auto v = to_int(kDecimalBitLimit)) return v->str();
  std::string out;
  for (const auto& b : bits_) {
    if (!out.empty()) out += '+';
    out += "2^" + b.str();
  }
  return out;
}

BigNat BigNat::parse(std::string_view text) {
  if (text.empty()) throw Error(Errc::ParameterOutOfRange, "empty BigNat literal");
  auto parse_int = [](std::string_view s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(Errc::ParameterOutOfRange, "bad integer literal '" + std::string(s) + "'");
    }
    return BigInt(std::string(s));
  };
  if (text.find('^') == std::string_view::npos) return from_int(parse_int(text));
  BigNat out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t plus = text.find('+', start);
    const std::string_view term = text.substr(start, plus == std::string_view::npos ? text.npos : plus - start);
    if (term.size() < 3 || term.substr(0, 2) != "2^") {
      throw Error(Errc::ParameterOutOfRange, "bad power-sum term '" + std::string(term) + "'");
    }
    out = out + pow2(parse_int(term.substr(2)));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return out;
}

}  // namespace urnc
