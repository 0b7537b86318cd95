#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "orbitlab/common.hpp"
#include "orbitlab/log_domain.hpp"
#include "orbitlab/weight_sequence.hpp"

namespace orbitlab {

// Entry value split into log-domain magnitude and unit phase, so shift
// powers never overflow the linear scale.
struct LogComplex {
  LogMag mag;
  cplx phase{1.0, 0.0};

  static LogComplex from(cplx z) {
    double a = std::abs(z);
    if (a == 0.0) return {LogMag::zero(), {1.0, 0.0}};
    return {LogMag::from_linear(a), z / a};
  }
  cplx value() const { return mag.is_zero() ? cplx{0.0, 0.0} : mag.linear() * phase; }
};

// Finitely supported vector indexed by Z. Zero entries are never stored.
class ZVector {
 public:
  ZVector() = default;

  static ZVector basis(i64 n, cplx coeff = {1.0, 0.0}) {
    ZVector x;
    x.set(n, coeff);
    return x;
  }

  void set(i64 n, cplx v) {
    if (std::abs(v) == 0.0) { entries_.erase(n); return; }
    entries_[n] = LogComplex::from(v);
  }
  void set_log(i64 n, const LogComplex& v) {
    if (v.mag.is_zero()) { entries_.erase(n); return; }
    entries_[n] = v;
  }

  bool empty() const { return entries_.empty(); }
  size_t support_size() const { return entries_.size(); }
  const std::map<i64, LogComplex>& entries() const { return entries_; }

  cplx at(i64 n) const {
    auto it = entries_.find(n);
    return it == entries_.end() ? cplx{0.0, 0.0} : it->second.value();
  }
  LogMag magnitude_at(i64 n) const {
    auto it = entries_.find(n);
    return it == entries_.end() ? LogMag::zero() : it->second.mag;
  }

  // gamma(x) = max |n| over the support; 0 for the zero vector.
  i64 gamma() const {
    i64 g = 0;
    for (const auto& [n, v] : entries_) g = std::max(g, n < 0 ? -n : n);
    return g;
  }

  std::vector<i64> support() const {
    std::vector<i64> s;
    s.reserve(entries_.size());
    for (const auto& [n, v] : entries_) s.push_back(n);
    return s;
  }

  friend bool supports_disjoint(const ZVector& a, const ZVector& b) {
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() && ib != b.entries_.end()) {
      if (ia->first == ib->first) return false;
      if (ia->first < ib->first) ++ia; else ++ib;
    }
    return true;
  }

  ZVector& add_scaled(const ZVector& o, cplx c) {
    for (const auto& [n, v] : o.entries_) set(n, at(n) + c * v.value());
    return *this;
  }

  ZVector& scale(cplx c) {
    if (std::abs(c) == 0.0) { entries_.clear(); return *this; }
    LogComplex f = LogComplex::from(c);
    for (auto& [n, v] : entries_) { v.mag *= f.mag; v.phase *= f.phase; }
    return *this;
  }

 private:
  std::map<i64, LogComplex> entries_;
};

// T^n applied to x for the shift T e_m = w_m e_{m-1}; n < 0 is the inverse
// power. Coefficients move by -n and pick up the weight product in log
// domain: (T^n x)_k = x_{k+n} * 2^{S(k+n) - S(k)}.
inline ZVector apply_shift(const WeightSequence& w, const ZVector& x, i64 n) {
  ZVector out;
  for (const auto& [m, v] : x.entries()) {
    LogComplex e = v;
    e.mag *= LogMag(w.log_prefix(m) - w.log_prefix(m - n));
    out.set_log(m - n, e);
  }
  return out;
}

// (sum |x_n|^p)^{1/p}, or max |x_n| for p = inf, in log domain.
// The zero vector yields the distinguished LogMag::zero() marker.
inline LogMag pnorm(const ZVector& x, double p) {
  if (x.empty()) return LogMag::zero();
  if (std::isinf(p)) {
    LogMag m = LogMag::zero();
    for (const auto& [n, v] : x.entries()) m = std::max(m, v.mag);
    return m;
  }
  if (!(p >= 1.0)) throw std::domain_error("pnorm: requires p >= 1 or p = inf");
  Log2SumAccumulator acc;
  for (const auto& [n, v] : x.entries()) acc.add(v.mag.log2() * p);
  return LogMag(acc.log2_sum() / p);
}

// Bilinear pairing sum x_n y_n (the l_p x l_q duality used throughout).
inline cplx dual_pair(const ZVector& x, const ZVector& y) {
  cplx s = 0.0;
  const ZVector& small = x.support_size() <= y.support_size() ? x : y;
  const ZVector& big = x.support_size() <= y.support_size() ? y : x;
  for (const auto& [n, v] : small.entries()) s += v.value() * big.at(n);
  return s;
}

// Hilbert inner product sum x_n conj(y_n).
inline cplx inner2(const ZVector& x, const ZVector& y) {
  cplx s = 0.0;
  const ZVector& small = x.support_size() <= y.support_size() ? x : y;
  for (const auto& [n, v] : small.entries())
    s += (&small == &x) ? v.value() * std::conj(y.at(n)) : x.at(n) * std::conj(v.value());
  return s;
}

inline ZVector sub(const ZVector& a, const ZVector& b) {
  ZVector r = a;
  r.add_scaled(b, {-1.0, 0.0});
  return r;
}

}  // namespace orbitlab
