#pragma once

#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace orbitlab {

using cplx = std::complex<double>;
using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr double two_pi = 6.283185307179586476925286766559;

inline std::string to_string_u128(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), char('0' + int(v % 10)));
    v /= 10;
  }
  return s;
}

// Reduced fraction with a positive denominator. Small enough values that
// int64 arithmetic stays exact; construction reduces by gcd.
struct Rational {
  i64 num = 0;
  i64 den = 1;

  Rational() = default;
  Rational(i64 n, i64 d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    i64 g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }
  static Rational integer(i64 n) { return Rational(n, 1); }

  double value() const { return double(num) / double(den); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    i128 n = i128(a.num) * b.den + i128(b.num) * a.den;
    i128 d = i128(a.den) * b.den;
    i128 g = [](i128 x, i128 y) {
      if (x < 0) x = -x;
      while (y != 0) { i128 t = x % y; x = y; y = t; }
      return x;
    }(n, d);
    if (g > 1) { n /= g; d /= g; }
    if (n > i128(INT64_MAX) || n < i128(INT64_MIN) || d > i128(INT64_MAX))
      throw std::overflow_error("Rational: overflow in addition");
    return Rational(i64(n), i64(d));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + Rational(-b.num, b.den);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num) * b.den < i128(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return i128(a.num) * b.den <= i128(b.num) * a.den;
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

// frac(q * num/den) computed exactly in integer arithmetic, then mapped to
// [0,1). Safe while |q| * den' < 2^127 after reduction mod den.
inline double exact_frac_mul(i64 q, i64 num, i64 den) {
  if (den <= 0) throw std::invalid_argument("exact_frac_mul: den <= 0");
  i128 r = (i128(q) % den) * (i128(num) % den) % den;
  if (r < 0) r += den;
  return double(u64(u128(r))) / double(den);
}

// e^{2*pi*i * q * num/den} with the phase reduced exactly before any
// floating multiplication.
inline cplx unit_phase(i64 q, i64 num, i64 den) {
  double f = exact_frac_mul(q, num, den);
  return std::polar(1.0, two_pi * f);
}

// Same with a u128 denominator (late construction stages overflow int64
// partition counts). The reduced product q*num mod den must fit 128 bits;
// callers keep q below 2^53 and num below 2*den.
inline cplx unit_phase_u128(i64 q, u128 num, u128 den) {
  bool neg = q < 0;
  u128 qa = neg ? u128(-(q + 1)) + 1 : u128(q);
  u128 r = (qa % den) * (num % den) % den;
  long double f = (long double)(r) / (long double)(den);
  cplx z = std::polar(1.0, double(two_pi * f));
  return neg ? std::conj(z) : z;
}

inline int env_thread_count(const char* var = "ORBITLAB_THREADS") {
  const char* v = std::getenv(var);
  if (!v) return 1;
  int n = std::atoi(v);
  return n > 0 ? n : 1;
}

struct internal_check_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace orbitlab
