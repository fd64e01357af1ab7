#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bipolarity {

/// Exact rational number on 64-bit numerator/denominator.
///
/// All intermediate products run through 128-bit integers and every
/// narrowing back to 64 bits is checked, so a result is either exact or an
/// overflow_error -- never silently wrong. Denominator is kept positive and
/// the fraction reduced.
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                   i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                   i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return from128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  /// Representative of the class in Q/Z, reduced into [0, 1).
  Rational mod_one() const {
    std::int64_t r = num_ % den_;
    if (r < 0) r += den_;
    Rational out;
    out.assign(r, den_);
    return out;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

private:
  using i128 = __int128;

  static std::int64_t narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
      throw std::overflow_error("Rational: 64-bit overflow");
    return static_cast<std::int64_t>(v);
  }

  static Rational from128(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rational r;
    r.num_ = narrow(n);
    r.den_ = narrow(d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void assign(std::int64_t n, std::int64_t d) {
    Rational r = from128(n, d);
    num_ = r.num_;
    den_ = r.den_;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace bipolarity
