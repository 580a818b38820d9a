#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

#include "trirem/errors.hpp"

namespace trirem {

/// Exact fraction with 128-bit numerator and denominator, always reduced and
/// with a positive denominator. Arithmetic throws OverflowError on overflow.
class Rational {
 public:
  using Int = __int128;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(Int num, Int den) : num_(num), den_(den) { normalize(); }

  Int num() const noexcept { return num_; }
  Int den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
  }
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b) {
    return {add(mul(a.num_, b.den_), mul(b.num_, a.den_)), mul(a.den_, b.den_)};
  }
  friend Rational operator-(const Rational& a) { return {-a.num_, a.den_}; }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return {mul(a.num_, b.num_), mul(a.den_, b.den_)};
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return {mul(a.num_, b.den_), mul(a.den_, b.num_)};
  }
  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const Int l = mul(a.num_, b.den_);
    const Int r = mul(b.num_, a.den_);
    return l < r ? std::strong_ordering::less
                 : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  static Int mul(Int a, Int b) {
    Int out;
    if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("rational overflow");
    return out;
  }
  static Int add(Int a, Int b) {
    Int out;
    if (__builtin_add_overflow(a, b, &out)) throw OverflowError("rational overflow");
    return out;
  }
  static Int gcd(Int a, Int b) noexcept {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const Int t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  void normalize() {
    if (den_ == 0) throw DomainError("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const Int g = gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  Int num_ = 0;
  Int den_ = 1;
};

inline std::string int128_to_string(__int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  return neg ? "-" + s : s;
}

inline std::string Rational::to_string() const {
  return den_ == 1 ? int128_to_string(num_) : int128_to_string(num_) + "/" + int128_to_string(den_);
}

}  // namespace trirem
