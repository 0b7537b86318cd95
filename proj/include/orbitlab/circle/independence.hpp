#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "orbitlab/circle/arc.hpp"
#include "orbitlab/common.hpp"
#include "orbitlab/target_schedule.hpp"  // is_prime / next_prime_above

namespace orbitlab {

// A circle point t = anchor + eps*sqrt(prime) with rational anchor and eps
// and a prime distinct within its batch. Nonzero integer combinations
// sum n_j t_j = (rational) + eps * sum n_j sqrt(p_j) are irrational because
// square roots of distinct primes are linearly independent over Q, so the
// points are independent exactly, by construction.
struct IndependentPoint {
  Rational anchor{0, 1};
  i64 prime = 2;
  Rational eps{0, 1};
  double value = 0.0;
};

// Anchor placement hint: pick anchors q_j with K q_j = m_j + s_j / 2^20 so
// that the K-th powers of the points land near prescribed phases. This only
// steers where the anchors sit inside their arcs; independence is untouched.
struct PhaseHint {
  i64 K = 0;
  std::vector<double> target_turns;        // one per arc, in [0,1)
  double phase_slack_turns = 1.0 / (1 << 21);  // budget for K * eps * sqrt(p)
};

inline std::vector<IndependentPoint> independent_points(
    const std::vector<Arc>& arcs, const std::optional<PhaseHint>& hint = std::nullopt) {
  if (arcs.empty()) throw std::invalid_argument("independent_points: no arcs");
  if (hint && hint->target_turns.size() != arcs.size())
    throw std::invalid_argument("independent_points: hint size mismatch");
  std::vector<IndependentPoint> pts(arcs.size());
  double min_headroom = 1.0;  // distance from anchor to its arc's right end
  i64 prime = 1;
  constexpr i64 kHintDen = 1 << 20;
  for (size_t j = 0; j < arcs.size(); ++j) {
    const Arc& a = arcs[j];
    if (!(a.length() > 0)) throw std::invalid_argument("independent_points: degenerate arc");
    Rational anchor{0, 1};
    if (hint) {
      double s_turn = hint->target_turns[j] - std::floor(hint->target_turns[j]);
      i64 s = i64(std::llround(s_turn * double(kHintDen))) % kHintDen;
      i64 K = hint->K;
      if (K < 1) throw std::invalid_argument("independent_points: hint K must be >= 1");
      bool placed = false;
      i64 m_lo = i64(std::floor(a.lo.value() * double(K))) - 1;
      i64 m_hi = i64(std::ceil(a.hi.value() * double(K))) + 1;
      for (i64 m = m_lo; m <= m_hi && !placed; ++m) {
        Rational q(m * kHintDen + s, K * kHintDen);
        Rational margin(1, 8 * std::max<i64>(1, i64(1.0 / a.length()) + 1));
        if (a.lo < q && q + margin <= a.hi) {
          anchor = q;
          placed = true;
        }
      }
      if (!placed)
        throw std::invalid_argument(
            "independent_points: hint K too small for an arc (no anchor slot)");
    } else {
      // rationalized midpoint with a power-of-two denominator
      double mid = 0.5 * (a.lo.value() + a.hi.value());
      i64 den = 2;
      while (4.0 / double(den) > a.length() && den < (i64(1) << 60)) den *= 2;
      i64 num = i64(std::llround(mid * double(den)));
      Rational q(num, den);
      if (!(a.lo < q) || !(q < a.hi)) q = a.midpoint();
      anchor = q;
    }
    prime = next_prime_above(prime);
    pts[j].anchor = anchor;
    pts[j].prime = prime;
    min_headroom = std::min(min_headroom, a.hi.value() - anchor.value());
  }
  // one shared rational eps small enough that every point stays interior
  // (and, under a hint, that the K-th power phases keep their slack)
  double sqrt_pmax = std::sqrt(double(prime));
  double need = 4.0 * sqrt_pmax / std::max(min_headroom, 1e-300);
  if (hint)
    need = std::max(need, 2.0 * double(hint->K) * sqrt_pmax /
                              std::max(hint->phase_slack_turns, 1e-300));
  i64 eden = 2;
  while (double(eden) < need && eden < (i64(1) << 62)) eden *= 2;
  Rational eps(1, eden);
  for (auto& pt : pts) {
    pt.eps = eps;
    pt.value = pt.anchor.value() + eps.value() * std::sqrt(double(pt.prime));
  }
  for (size_t j = 0; j < arcs.size(); ++j)
    if (!(arcs[j].lo.value() < pts[j].value) || !(pts[j].value < arcs[j].hi.value()))
      throw internal_check_error("independent point escaped its arc");
  return pts;
}

// The decision rule behind independence, made inspectable: an integer
// combination sum n_j t_j splits into an exact rational part and
// eps * sum_r c_r sqrt(r) over distinct primes r. It is an integer only if
// every sqrt coefficient vanishes and the rational part is integral.
struct CombinationCheck {
  double rational_part = 0.0;
  std::map<i64, i64> sqrt_coeffs;
  bool is_integer = false;
};

inline CombinationCheck check_combination(const std::vector<IndependentPoint>& pts,
                                          const std::vector<i64>& coeffs) {
  if (pts.size() != coeffs.size())
    throw std::invalid_argument("check_combination: size mismatch");
  CombinationCheck out;
  long double rat = 0.0L;
  for (size_t j = 0; j < pts.size(); ++j) {
    if (coeffs[j] == 0) continue;
    rat += (long double)(coeffs[j]) * (long double)(pts[j].anchor.num) /
           (long double)(pts[j].anchor.den);
    out.sqrt_coeffs[pts[j].prime] += coeffs[j];
  }
  out.rational_part = double(rat);
  bool sqrt_free = true;
  for (const auto& [p, c] : out.sqrt_coeffs) sqrt_free = sqrt_free && c == 0;
  // distinct primes per batch make sqrt_free equivalent to all coeffs zero
  out.is_integer = sqrt_free && std::fabs(rat - std::llround((double)rat)) < 1e-15;
  return out;
}

}  // namespace orbitlab
