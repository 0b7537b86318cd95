#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitlab/circle/arc.hpp"
#include "orbitlab/circle/independence.hpp"
#include "orbitlab/circle/trig_poly.hpp"
#include "orbitlab/common.hpp"

namespace orbitlab {

// Finite non-negative measure on the circle: atoms plus piecewise-constant
// density segments, all integrals in closed form. Segments are half-open
// [lo, hi); an atom on a partition boundary belongs to the arc starting
// there, so arc masses are always exact.
class CircleMeasure {
 public:
  struct Atom {
    double t = 0.0;
    double mass = 0.0;
    std::optional<IndependentPoint> meta;
  };
  struct Segment {
    double lo = 0.0, hi = 0.0;
    double height = 0.0;
  };

  CircleMeasure() = default;

  static CircleMeasure lebesgue() {
    CircleMeasure m;
    m.add_segment(0.0, 1.0, 1.0);
    return m;
  }

  void add_atom(double t, double mass, std::optional<IndependentPoint> meta = std::nullopt) {
    if (!(mass > 0)) throw std::invalid_argument("CircleMeasure: atom mass must be > 0");
    if (!(0.0 <= t && t < 1.0)) throw std::invalid_argument("CircleMeasure: atom t in [0,1)");
    atoms_.push_back({t, mass, std::move(meta)});
  }
  void add_segment(double lo, double hi, double height) {
    if (!(0.0 <= lo && lo < hi && hi <= 1.0))
      throw std::invalid_argument("CircleMeasure: segment needs 0 <= lo < hi <= 1");
    if (!(height >= 0)) throw std::invalid_argument("CircleMeasure: height must be >= 0");
    if (height > 0) segments_.push_back({lo, hi, height});
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Segment>& segments() const { return segments_; }

  double total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.mass;
    for (const auto& s : segments_) m += s.height * (s.hi - s.lo);
    return m;
  }
  bool is_probability(double tol = 1e-12) const {
    return std::fabs(total_mass() - 1.0) <= tol;
  }

  // mu^(k) = integral of z^k: atoms contribute mass * e^{2 pi i k t}, a
  // segment of height h contributes h (e^{2 pi i k hi} - e^{2 pi i k lo}) /
  // (2 pi i k) for k != 0 and h (hi - lo) for k = 0.
  cplx fourier(i64 k) const {
    cplx s = 0.0;
    for (const auto& a : atoms_) s += a.mass * std::polar(1.0, two_pi * double(k) * a.t);
    for (const auto& seg : segments_) {
      if (k == 0) {
        s += seg.height * (seg.hi - seg.lo);
      } else {
        cplx num = std::polar(1.0, two_pi * double(k) * seg.hi) -
                   std::polar(1.0, two_pi * double(k) * seg.lo);
        s += seg.height * num / (cplx(0.0, two_pi * double(k)));
      }
    }
    return s;
  }

  // [mu, f] = sum_k fhat(k) mu^(k)
  cplx pair(const TrigPoly& f) const {
    cplx s = 0.0;
    for (const auto& [k, c] : f.coefs()) s += c * fourier(k);
    return s;
  }

  CircleMeasure restrict(double lo, double hi) const {
    if (!(0.0 <= lo && lo < hi && hi <= 1.0))
      throw std::invalid_argument("restrict: needs 0 <= lo < hi <= 1");
    CircleMeasure r;
    for (const auto& a : atoms_)
      if (lo <= a.t && a.t < hi) r.atoms_.push_back(a);
    for (const auto& s : segments_) {
      double l = std::max(lo, s.lo), h = std::min(hi, s.hi);
      if (l < h) r.segments_.push_back({l, h, s.height});
    }
    return r;
  }
  CircleMeasure restrict(const Arc& a) const { return restrict(a.lo.value(), a.hi.value()); }

  double arc_mass(const Arc& a) const { return restrict(a).total_mass(); }

  // total variation of the density as a circle function (jump sizes at
  // segment boundaries); used for the analytic Fourier tail bound
  // |mu^(l)| <= V / (pi |l|) of step densities.
  double density_jump_variation() const {
    if (segments_.empty()) return 0.0;
    std::vector<std::pair<double, double>> jumps;  // (t, delta height)
    for (const auto& s : segments_) {
      jumps.emplace_back(s.lo, s.height);
      jumps.emplace_back(s.hi >= 1.0 ? 0.0 : s.hi, -s.height);
    }
    std::sort(jumps.begin(), jumps.end());
    double v = 0.0;
    size_t i = 0;
    while (i < jumps.size()) {
      double t = jumps[i].first, d = 0.0;
      while (i < jumps.size() && jumps[i].first == t) d += jumps[i++].second;
      v += std::fabs(d);
    }
    return v;
  }

  friend CircleMeasure mix(const CircleMeasure& a, double wa, const CircleMeasure& b,
                           double wb) {
    CircleMeasure m;
    for (const auto& at : a.atoms_)
      if (wa * at.mass > 0) m.atoms_.push_back({at.t, wa * at.mass, at.meta});
    for (const auto& at : b.atoms_)
      if (wb * at.mass > 0) m.atoms_.push_back({at.t, wb * at.mass, at.meta});
    for (const auto& s : a.segments_)
      if (wa * s.height > 0) m.segments_.push_back({s.lo, s.hi, wa * s.height});
    for (const auto& s : b.segments_)
      if (wb * s.height > 0) m.segments_.push_back({s.lo, s.hi, wb * s.height});
    return m;
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<Segment> segments_;
};

// Step-density approximation matching every arc mass exactly.
inline CircleMeasure discretize_ac(const CircleMeasure& mu, const std::vector<Arc>& arcs) {
  CircleMeasure out;
  for (const Arc& a : arcs) {
    double mass = mu.arc_mass(a);
    if (mass > 0) out.add_segment(a.lo.value(), a.hi.value(), mass / a.length());
  }
  return out;
}

// Atomic approximation: one independent point per arc of positive mass.
inline CircleMeasure discretize_atomic(const CircleMeasure& mu, const std::vector<Arc>& arcs,
                                       const std::optional<PhaseHint>& hint = std::nullopt) {
  std::vector<IndependentPoint> pts = independent_points(arcs, hint);
  CircleMeasure out;
  for (size_t j = 0; j < arcs.size(); ++j) {
    double mass = mu.arc_mass(arcs[j]);
    if (mass > 0) out.add_atom(pts[j].value, mass, pts[j]);
  }
  return out;
}

// Near-uniform partition whose interior boundaries avoid the atoms of mu
// (the atom-set branch of the discretization lemma; half-open arcs already
// keep arc masses exact, but atom-free boundaries are still useful). An
// atom exactly at 0 stays a boundary atom: the origin cannot move.
inline std::vector<Arc> partition_avoiding_atoms(const CircleMeasure& mu, i64 n,
                                                 i64 max_tries = 64) {
  std::vector<Rational> bounds;
  bounds.emplace_back(0, 1);
  for (i64 k = 1; k < n; ++k) {
    Rational b(k, n);
    i64 t = 0;
    auto hits_atom = [&mu](const Rational& r) {
      for (const auto& a : mu.atoms())
        if (a.t == r.value()) return true;
      return false;
    };
    while (hits_atom(b) && t < max_tries) b = Rational(k, n) + Rational(++t, 4 * n * max_tries);
    if (hits_atom(b)) throw std::runtime_error("partition_avoiding_atoms: no boundary slot");
    bounds.push_back(b);
  }
  bounds.emplace_back(1, 1);
  std::vector<Arc> arcs;
  for (size_t i = 0; i + 1 < bounds.size(); ++i) arcs.emplace_back(bounds[i], bounds[i + 1]);
  return arcs;
}

}  // namespace orbitlab
