#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace orbitlab {

// Magnitude stored as log2. Products become sums, so quantities like
// 2^(9^(2n)) stay representable; the linear value is only materialized
// when it fits a double comfortably.
class LogMag {
 public:
  LogMag() : log2_(-std::numeric_limits<double>::infinity()) {}
  explicit LogMag(double log2_value) : log2_(log2_value) {}

  static LogMag zero() { return LogMag(); }
  static LogMag one() { return LogMag(0.0); }
  static LogMag from_linear(double x) {
    if (x < 0) throw std::domain_error("LogMag: negative magnitude");
    return x == 0 ? zero() : LogMag(std::log2(x));
  }

  double log2() const { return log2_; }
  bool is_zero() const { return std::isinf(log2_) && log2_ < 0; }

  // Linear-scale value; refuses to materialize outside 2^±512.
  double linear() const {
    if (is_zero()) return 0.0;
    if (std::fabs(log2_) > 512.0)
      throw std::domain_error("LogMag: linear value out of representable range");
    return std::exp2(log2_);
  }

  LogMag& operator*=(const LogMag& o) {
    if (is_zero() || o.is_zero()) { *this = zero(); return *this; }
    log2_ += o.log2_;
    return *this;
  }
  LogMag& operator/=(const LogMag& o) {
    if (o.is_zero()) throw std::domain_error("LogMag: divide by zero magnitude");
    if (!is_zero()) log2_ -= o.log2_;
    return *this;
  }
  friend LogMag operator*(LogMag a, const LogMag& b) { a *= b; return a; }
  friend LogMag operator/(LogMag a, const LogMag& b) { a /= b; return a; }

  LogMag pow(double e) const {
    if (is_zero()) return e > 0 ? zero() : LogMag(std::numeric_limits<double>::infinity());
    return LogMag(log2_ * e);
  }

  friend bool operator<(const LogMag& a, const LogMag& b) { return a.log2_ < b.log2_; }
  friend bool operator>(const LogMag& a, const LogMag& b) { return b < a; }
  friend bool operator<=(const LogMag& a, const LogMag& b) { return !(b < a); }
  friend bool operator>=(const LogMag& a, const LogMag& b) { return !(a < b); }

 private:
  double log2_;
};

// Stable log2(sum of 2^x_i) over log-domain terms.
class Log2SumAccumulator {
 public:
  void add(double log2_term) {
    if (std::isinf(log2_term) && log2_term < 0) return;
    terms_.push_back(log2_term);
  }
  void add(const LogMag& m) {
    if (!m.is_zero()) terms_.push_back(m.log2());
  }
  bool empty() const { return terms_.empty(); }
  double log2_sum() const {
    if (terms_.empty()) return -std::numeric_limits<double>::infinity();
    double m = *std::max_element(terms_.begin(), terms_.end());
    double s = 0.0;
    for (double t : terms_) s += std::exp2(t - m);
    return m + std::log2(s);
  }
  LogMag sum() const {
    return empty() ? LogMag::zero() : LogMag(log2_sum());
  }

 private:
  std::vector<double> terms_;
};

}  // namespace orbitlab
