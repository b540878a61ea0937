// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "frobevo/errors.hpp"

namespace frobevo {

// Exact rational arithmetic on 64-bit numerator/denominator. Intermediates
// are computed in 128 bits and the normalized result must fit back into
// int64, otherwise Overflow is thrown; nothing ever wraps silently.
class Rational {
 public:
  Rational() = default;
  Rational(int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(int64_t n, int64_t d) { *this = make(n, d); }

  /// Parses "123", "1.0", "3.25" into an exact value (denominator a power of ten).
  static Rational from_decimal(std::string_view text) {
    if (text.empty()) throw ParseError("empty numeric literal");
    int64_t intpart = 0;
    size_t i = 0;
    bool any = false;
    for (; i < text.size() && text[i] != '.'; ++i) {
      if (text[i] < '0' || text[i] > '9') throw ParseError("bad numeric literal: " + std::string(text));
      intpart = check_fit(static_cast<__int128>(intpart) * 10 + (text[i] - '0'));
      any = true;
    }
    __int128 num = intpart;
    __int128 den = 1;
    if (i < text.size()) {  // fractional part
      ++i;
      if (i == text.size()) throw ParseError("bad numeric literal: " + std::string(text));
      for (; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') throw ParseError("bad numeric literal: " + std::string(text));
        if (den > static_cast<__int128>(std::numeric_limits<int64_t>::max()) / 10)
          throw ParseError("numeric literal too precise: " + std::string(text));
        num = num * 10 + (text[i] - '0');
        den *= 10;
        any = true;
      }
    }
    if (!any) throw ParseError("bad numeric literal: " + std::string(text));
    return normalized(num, den);
  }

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  /// Largest integer <= value (floor toward minus infinity).
  int64_t floor() const {
    int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  Rational abs() const { return num_ < 0 ? normalized(-static_cast<__int128>(num_), den_) : *this; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return normalized(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                      static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return normalized(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                      static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return normalized(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DivisionByZero("division by zero");
    return normalized(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return normalized(-static_cast<__int128>(num_), den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  /// "p" for integers, "p/q" otherwise.
  std::string to_string() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) s += "/" + std::to_string(den_);
    return s;
  }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

 private:
  static Rational make(int64_t n, int64_t d) {
    if (d == 0) throw DivisionByZero("rational with zero denominator");
    return normalized(n, d);
  }

  static int64_t check_fit(__int128 v) {
    if (v > std::numeric_limits<int64_t>::max() || v < std::numeric_limits<int64_t>::min())
      throw Overflow("rational arithmetic overflow");
    return static_cast<int64_t>(v);
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational normalized(__int128 n, __int128 d) {
    if (d == 0) throw DivisionByZero("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rational r;
    r.num_ = check_fit(n);
    r.den_ = check_fit(d);
    return r;
  }

  int64_t num_ = 0;
  int64_t den_ = 1;
};

}  // namespace frobevo
