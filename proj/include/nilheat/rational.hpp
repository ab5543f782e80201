#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "nilheat/errors.hpp"

namespace nilheat {

/// Exact rational arithmetic on 64-bit integers.  All coefficient tables in
/// this project (BCHD, Strichartz, simplex polynomials) live in a tiny range,
/// so int64 is plenty; operations reduce eagerly to keep magnitudes down.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw ArgumentError("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  Rational operator-() const { return Rational(-num, den); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    // cross-reduce before multiplying
    const std::int64_t g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
    const std::int64_t g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
    return Rational((a.num / g1) * (b.num / g2), (a.den / g2) * (b.den / g1));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw ArgumentError("Rational: division by zero");
    return a * Rational(b.den, b.num);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  bool is_zero() const { return num == 0; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }
};

inline std::int64_t factorial_i64(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline std::int64_t binomial_i64(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t b = 1;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

inline Rational rational_pow(const Rational& x, int e) {
  Rational r(1);
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace nilheat
