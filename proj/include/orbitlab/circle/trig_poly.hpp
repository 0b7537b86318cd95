#pragma once

#include <cmath>
#include <map>
#include <stdexcept>

#include "orbitlab/common.hpp"

namespace orbitlab {

// Trigonometric polynomial f(z) = sum_k c_k z^k on the circle, z = e^{2 pi i t}.
class TrigPoly {
 public:
  TrigPoly() = default;

  static TrigPoly constant(cplx c) {
    TrigPoly f;
    f.set(0, c);
    return f;
  }
  static TrigPoly monomial(i64 k, cplx c = {1.0, 0.0}) {
    TrigPoly f;
    f.set(k, c);
    return f;
  }

  void set(i64 k, cplx c) {
    if (std::abs(c) == 0.0) coef_.erase(k);
    else coef_[k] = c;
  }
  cplx coef(i64 k) const {
    auto it = coef_.find(k);
    return it == coef_.end() ? cplx{0, 0} : it->second;
  }
  const std::map<i64, cplx>& coefs() const { return coef_; }
  bool zero() const { return coef_.empty(); }

  i64 degree() const {
    i64 d = 0;
    for (const auto& [k, c] : coef_) d = std::max(d, k < 0 ? -k : k);
    return d;
  }

  // sup-norm upper bound: sum of coefficient moduli
  double coef_abs_sum() const {
    double s = 0.0;
    for (const auto& [k, c] : coef_) s += std::abs(c);
    return s;
  }

  // derivative bound per turn: |f'(t)| <= 2 pi sum |k c_k|
  double slope_bound() const {
    double s = 0.0;
    for (const auto& [k, c] : coef_) s += std::fabs(double(k)) * std::abs(c);
    return two_pi * s;
  }

  cplx eval(double t) const {
    cplx s = 0.0;
    for (const auto& [k, c] : coef_) s += c * std::polar(1.0, two_pi * double(k) * t);
    return s;
  }
  cplx eval(const Rational& t) const {
    cplx s = 0.0;
    for (const auto& [k, c] : coef_) s += c * unit_phase(k, t.num, t.den);
    return s;
  }

  TrigPoly conjugated() const {
    TrigPoly g;
    for (const auto& [k, c] : coef_) g.set(-k, std::conj(c));
    return g;
  }

  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly p;
    for (const auto& [k1, c1] : a.coef_)
      for (const auto& [k2, c2] : b.coef_) p.set(k1 + k2, p.coef(k1 + k2) + c1 * c2);
    return p;
  }
  friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly p = a;
    for (const auto& [k, c] : b.coef_) p.set(k, p.coef(k) + c);
    return p;
  }
  friend TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly p = a;
    for (const auto& [k, c] : b.coef_) p.set(k, p.coef(k) - c);
    return p;
  }
  TrigPoly scaled(cplx c) const {
    TrigPoly p;
    for (const auto& [k, v] : coef_) p.set(k, c * v);
    return p;
  }

  // [sup-norm lower, upper] from a grid plus the slope margin
  std::pair<double, double> sup_norm_bracket(int grid = 4096) const {
    double m = 0.0;
    for (int i = 0; i < grid; ++i)
      m = std::max(m, std::abs(eval(double(i) / double(grid))));
    double margin = slope_bound() / (2.0 * double(grid));
    return {m, std::min(m + margin, coef_abs_sum())};
  }

 private:
  std::map<i64, cplx> coef_;
};

}  // namespace orbitlab
