#pragma once

#include <stdexcept>
#include <vector>

#include "orbitlab/common.hpp"

namespace orbitlab {

// Half-open arc [lo, hi) in normalized circle coordinates, 0 <= lo < hi <= 1.
// Endpoints are exact rationals so partition refinements nest exactly.
struct Arc {
  Rational lo, hi;

  Arc(Rational l, Rational h) : lo(l), hi(h) {
    if (!(Rational(0, 1) <= lo) || !(lo < hi) || !(hi <= Rational(1, 1)))
      throw std::invalid_argument("Arc: need 0 <= lo < hi <= 1");
  }
  double length() const { return hi.value() - lo.value(); }
  Rational midpoint() const { return Rational(lo.num * hi.den + hi.num * lo.den, 2 * lo.den * hi.den); }
  bool contains(double t) const { return lo.value() <= t && t < hi.value(); }
};

// Arcs [(k-1)/n, k/n), k = 1..n.
inline std::vector<Arc> uniform_partition(i64 n) {
  if (n < 1) throw std::invalid_argument("uniform_partition: n >= 1");
  std::vector<Arc> arcs;
  arcs.reserve(size_t(n));
  for (i64 k = 1; k <= n; ++k) arcs.emplace_back(Rational(k - 1, n), Rational(k, n));
  return arcs;
}

inline std::vector<Arc> split_arc(const Arc& a, i64 parts) {
  if (parts < 1) throw std::invalid_argument("split_arc: parts >= 1");
  std::vector<Arc> out;
  out.reserve(size_t(parts));
  for (i64 k = 1; k <= parts; ++k) {
    auto point = [&](i64 i) {
      // lo + i*(hi-lo)/parts as an exact rational
      Rational len = a.hi - a.lo;
      return a.lo + Rational(len.num * i, len.den * parts);
    };
    out.emplace_back(point(k - 1), point(k));
  }
  return out;
}

inline std::vector<Arc> refine_partition(const std::vector<Arc>& arcs, i64 parts_each) {
  std::vector<Arc> out;
  out.reserve(arcs.size() * size_t(parts_each));
  for (const Arc& a : arcs)
    for (const Arc& s : split_arc(a, parts_each)) out.push_back(s);
  return out;
}

}  // namespace orbitlab
