#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/common.hpp"
#include "orbitlab/sequences.hpp"
#include "orbitlab/weight_sequence.hpp"
#include "orbitlab/zvector.hpp"

namespace orbitlab {

// d = sup norms, c = sum_{m<n} |<g_n,g_m>|^2; the family is then a
// 2-sequence with constant (d^2 + sqrt(2c))^{1/2}.
struct GramStats {
  double d = 0.0;
  double c = 0.0;
  size_t count = 0;
  double bound() const { return std::sqrt(d * d + std::sqrt(2.0 * c)); }
};

inline GramStats gram_two_sequence_bound(size_t count,
                                         const std::function<cplx(size_t, size_t)>& inner) {
  GramStats g;
  g.count = count;
  for (size_t n = 0; n < count; ++n) {
    double nn = std::real(inner(n, n));
    g.d = std::max(g.d, std::sqrt(std::max(nn, 0.0)));
    for (size_t m = 0; m < n; ++m) g.c += std::norm(inner(n, m));
  }
  return g;
}

inline GramStats gram_two_sequence_bound(const std::vector<ZVector>& gs) {
  return gram_two_sequence_bound(gs.size(),
                                 [&gs](size_t i, size_t j) { return inner2(gs[i], gs[j]); });
}

// Perturbation transfer: a p-sequence with constant c stays a p-sequence
// under perturbations whose norm gaps lie in l_q; the new constant is
// c + ||deltas||_q. Without q-summability at the horizon (or a declared
// tail bound) there is no certificate.
struct PerturbationBound {
  bool certified = false;
  double constant = 0.0;
  double deltas_q_norm = 0.0;
  std::string detail;
};

inline PerturbationBound p_sequence_perturbation_bound(
    double c, const std::function<double(i64)>& deltas, i64 horizon, double q,
    std::function<TailBound(i64)> tail = nullptr) {
  PerturbationBound out;
  SeriesRule r{[&deltas, q](i64 n) { return std::pow(std::fabs(deltas(n)), q); },
               std::move(tail), "||deltas||_q^q"};
  DivergenceVerdict v = evaluate_series(r, horizon);
  double qsum = v.partial_sum + (v.tail && std::isfinite(v.tail->upper) ? v.tail->upper : 0.0);
  out.deltas_q_norm = std::pow(qsum, 1.0 / q);
  if (v.trend == Trend::diverging_at_horizon ||
      (v.trend == Trend::inconclusive && !v.certified)) {
    out.detail = "delta series not q-summable at horizon and no tail bound supplied";
    return out;
  }
  out.certified = true;
  out.constant = c + out.deltas_q_norm;
  out.detail = v.certified ? "tail bound" : "at horizon";
  return out;
}

enum class SpaceKind { hilbert, lp, banach };

// Norm-growth weak-closedness certificate for a sequence {x_n}: convergence
// of sum ||x_n||^{-a} with the maximal admissible exponent for the space
// (2 in Hilbert space, anything below min{2,q} in l_p, 1 in a general
// Banach space).
struct ClosednessVerdict {
  double exponent_a = 0.0;
  DivergenceVerdict series;
  bool certificate = false;
  bool certified_tail = false;
};

inline ClosednessVerdict closedness_certificate(const std::function<double(i64)>& norms,
                                                SpaceKind space, i64 horizon, double p = 2.0,
                                                std::function<TailBound(i64)> tail = nullptr) {
  double a;
  switch (space) {
    case SpaceKind::hilbert: a = 2.0; break;
    case SpaceKind::banach: a = 1.0; break;
    case SpaceKind::lp: {
      if (!(p > 1.0) || std::isinf(p))
        throw std::domain_error("closedness_certificate: l_p case requires 1 < p < inf");
      double q = p / (p - 1.0);
      a = std::min(2.0, q) * (1.0 - 1e-6);
      break;
    }
  }
  SeriesRule r{[&norms, a](i64 n) {
                 double x = norms(n);
                 if (!(x > 0)) throw std::domain_error("closedness_certificate: norms must be > 0");
                 return std::pow(x, -a);
               },
               std::move(tail), "sum ||x_n||^-a"};
  ClosednessVerdict v;
  v.exponent_a = a;
  v.series = evaluate_series(r, horizon);
  v.certificate = v.series.trend == Trend::converging_at_horizon;
  v.certified_tail = v.series.certified;
  return v;
}

// Row sums of a non-negative matrix with max{a_ij, a_ji} >= 1 for every
// pair: the j-th smallest row sum is >= j/2, making sum S^{-r} finite for
// r > 1.
struct RowSumReport {
  std::vector<double> sorted_sums;
  double min_ratio = std::numeric_limits<double>::infinity();  // min over j of S_(j) / (j/2)
  double inverse_power_sum = 0.0;                              // sum S_(j)^{-r}
  bool half_index_bound_ok = true;
};

inline RowSumReport row_sum_check(const std::vector<std::vector<double>>& a, double r) {
  if (!(r > 1.0)) throw std::domain_error("row_sum_check: requires r > 1");
  size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("row_sum_check: matrix must be square");
    for (size_t j = 0; j < n; ++j) {
      if (!(a[i][j] >= 0)) throw std::domain_error("row_sum_check: entries must be >= 0");
      if (std::max(a[i][j], a[j][i]) < 1.0)
        throw std::domain_error("row_sum_check: hypothesis max{a(i,j),a(j,i)} >= 1 fails at (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  RowSumReport rep;
  rep.sorted_sums.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (size_t j = 0; j < n; ++j) s += a[i][j];
    rep.sorted_sums[i] = s;
  }
  std::sort(rep.sorted_sums.begin(), rep.sorted_sums.end());
  for (size_t j = 0; j < n; ++j) {
    double need = double(j + 1) / 2.0;
    rep.min_ratio = std::min(rep.min_ratio, rep.sorted_sums[j] / need);
    if (rep.sorted_sums[j] < need - 1e-12) rep.half_index_bound_ok = false;
    rep.inverse_power_sum += std::pow(rep.sorted_sums[j], -r);
  }
  return rep;
}

// n -> |<T^n f, y>| / ||T^n f||_p for the weighted shift; n < 0 runs the
// inverse. Entries where T^n f = 0 cannot occur for nonzero f since the
// weights never vanish.
inline std::vector<std::pair<i64, double>> antisupercyclicity_stat_shift(
    const WeightSequence& w, const ZVector& f, const ZVector& y, i64 n_lo, i64 n_hi,
    double p) {
  if (f.empty()) throw std::domain_error("antisupercyclicity stat: f must be nonzero");
  std::vector<std::pair<i64, double>> out;
  for (i64 n = n_lo; n <= n_hi; ++n) {
    ZVector tf = apply_shift(w, f, n);
    double num = std::abs(dual_pair(tf, y));
    double den_log2 = pnorm(tf, p).log2();
    out.emplace_back(n, num == 0.0 ? 0.0 : std::exp2(std::log2(num) - den_log2));
  }
  return out;
}

// Evidence that a difference family {beta(k) T^{gamma(k)} u - alpha(k) x}
// is a p-sequence, by one of the admissible routes.
struct PseqEvidence {
  enum class Kind { zero_family, disjoint_bounded, gram, declared } kind = Kind::declared;
  bool ok = false;
  double constant = 0.0;
  std::string detail;
};

inline PseqEvidence pseq_from_disjoint(const std::vector<ZVector>& xs, double p) {
  PseqEvidence e;
  e.kind = PseqEvidence::Kind::disjoint_bounded;
  bool all_zero = true;
  double sup = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!xs[i].empty()) all_zero = false;
    sup = std::max(sup, pnorm(xs[i], p).is_zero() ? 0.0 : pnorm(xs[i], p).linear());
    for (size_t j = i + 1; j < xs.size(); ++j)
      if (!supports_disjoint(xs[i], xs[j])) {
        e.detail = "supports not pairwise disjoint";
        return e;
      }
  }
  if (all_zero) {
    e.kind = PseqEvidence::Kind::zero_family;
    e.ok = true;
    e.constant = 0.0;
    e.detail = "zero family";
    return e;
  }
  e.ok = true;
  e.constant = sup;
  e.detail = "bounded disjoint supports";
  return e;
}

inline PseqEvidence pseq_from_gram(const GramStats& g) {
  PseqEvidence e;
  e.kind = PseqEvidence::Kind::gram;
  e.ok = std::isfinite(g.c);
  e.constant = g.bound();
  e.detail = "gram bound, c = " + std::to_string(g.c);
  return e;
}

// One sampled target of the orbit-density certificate: (C1) p-sequence
// evidence for the difference family, (C2) divergence of sum |alpha_k|^q.
struct OrbitTargetReport {
  std::string label;
  PseqEvidence c1;
  DivergenceVerdict c2;
  bool pass() const { return c1.ok && c2.trend == Trend::diverging_at_horizon; }
};

struct OrbitDensityCertificate {
  std::vector<OrbitTargetReport> targets;
  bool hypercyclic_mode = false;  // alpha == beta and the target set itself flagged dense
  bool pass = false;
  std::string conclusion;
};

inline OrbitDensityCertificate make_orbit_density_certificate(
    std::vector<OrbitTargetReport> targets, bool hypercyclic_mode) {
  OrbitDensityCertificate c;
  c.targets = std::move(targets);
  c.hypercyclic_mode = hypercyclic_mode;
  c.pass = !c.targets.empty();
  for (const auto& t : c.targets) c.pass = c.pass && t.pass();
  c.conclusion = !c.pass ? "inconclusive: a sampled target lacks evidence"
                 : hypercyclic_mode
                     ? "weak hypercyclicity certificate over the sampled targets"
                     : "weak supercyclicity certificate over the sampled targets";
  return c;
}

// Shift-flavored family data for one target x: indices k, maps alpha, beta,
// gamma, and the dual exponent q for (C2).
struct OrbitFamilySpec {
  std::string label;
  std::vector<i64> indices;
  std::function<cplx(i64)> alpha;
  std::function<cplx(i64)> beta_coef;
  std::function<i64(i64)> gamma_pow;
  double q = 2.0;
  std::function<TailBound(i64)> alpha_tail;  // optional, over index positions
};

inline OrbitTargetReport check_orbit_family(const WeightSequence& w, const ZVector& u,
                                            const ZVector& x, const OrbitFamilySpec& spec,
                                            double p) {
  OrbitTargetReport rep;
  rep.label = spec.label;
  std::vector<ZVector> fam;
  fam.reserve(spec.indices.size());
  for (i64 k : spec.indices) {
    ZVector g = apply_shift(w, u, spec.gamma_pow(k));
    g.scale(spec.beta_coef(k));
    g.add_scaled(x, -spec.alpha(k));
    fam.push_back(std::move(g));
  }
  rep.c1 = pseq_from_disjoint(fam, p);
  if (!rep.c1.ok && p == 2.0) {
    std::vector<ZVector> copy = fam;
    rep.c1 = pseq_from_gram(gram_two_sequence_bound(copy));
  }
  SeriesRule r{[&spec](i64 i) {
                 return std::pow(std::abs(spec.alpha(spec.indices[size_t(i)])), spec.q);
               },
               spec.alpha_tail, "sum |alpha|^q over " + spec.label};
  rep.c2 = evaluate_series(r, i64(spec.indices.size()) - 1);
  rep.c2.exponent_q = spec.q;
  return rep;
}

}  // namespace orbitlab
