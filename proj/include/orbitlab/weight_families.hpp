#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitlab/weight_sequence.hpp"

namespace orbitlab {

// phi(t) = (t+1)^{1/p} (log2(t+2))^{2/p}, the growth function of the
// symmetric family below; kept in log2 domain.
inline double log2_phi(double t, double p) {
  return (std::log2(t + 1.0) + 2.0 * std::log2(std::log2(t + 2.0))) / p;
}

namespace detail {

inline double pow9(int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= 9.0;
  return v;
}

// prop18 band layout. Positive side, k even: weight 2 on (7*9^k, 9^{k+1}],
// weight 1/2 on (9^{k+1}, 11*9^k]. Negative side, k odd: weight 2 on
// [-11*9^k, -9^{k+1}), weight 1/2 on [-9^{k+1}, -7*9^k). Each band pair has
// 2*9^k entries of each kind, so products over complete pairs cancel and
// beta(1,a) = 2^{a-7*9^k} holds exactly on the even bands (and on the odd
// bands for the inverse family).
inline double prop18_log_weight(double m) {
  if (m == 0) return 0.0;
  double t = std::fabs(m);
  int k0 = m > 0 ? 0 : 1;
  for (int k = k0;; k += 2) {
    double b = pow9(k);
    if (7.0 * b >= t) return 0.0;
    if (t <= 9.0 * b) return m > 0 ? 1.0 : -1.0;
    if (t <= 11.0 * b) return m > 0 ? -1.0 : 1.0;
  }
}

// Complete band pairs cancel exactly and must contribute an exact zero:
// computing the two counts separately at magnitudes like 9^59 would leave
// ulp-scale residues that dwarf the true value.
inline double prop18_pos_sum(double a) {  // sum of log2 w_j over j = 1..a
  double s = 0.0;
  for (int k = 0; ; k += 2) {
    double b = pow9(k);
    if (7.0 * b >= a) break;
    if (a <= 9.0 * b) s += a - 7.0 * b;            // inside the 2-band
    else if (a < 11.0 * b) s += 11.0 * b - a;      // inside the 1/2-band
    // complete pair: zero
  }
  return s;
}

inline double prop18_neg_sum(double m) {  // sum of log2 w_j over j = -m..-1
  double s = 0.0;
  for (int k = 1; ; k += 2) {
    double b = pow9(k);
    if (7.0 * b >= m) break;
    if (m <= 9.0 * b) s -= m - 7.0 * b;            // inside the 1/2-band
    else if (m < 11.0 * b) s += m - 11.0 * b;      // inside the 2-band
  }
  return s;
}

inline double prop18_prefix(double n) {
  if (n >= 0) return prop18_pos_sum(n);
  return -prop18_neg_sum(-n - 1);
}

struct Prop19Layout {
  double p;
  double band1(int k) const {
    return 0.5 * std::pow(3.0, -k) * (log2_phi(k + 1, p) - log2_phi(k, p));
  }
  double band2(int n) const {
    return std::pow(3.0, -n) * (log2_phi(n + 1, p) - 2.0 * log2_phi(n, p));
  }
  static double pow3(int n) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= 3.0;
    return v;
  }
  double log_weight_abs(double t) const {  // t = |m| >= 1
    int n0 = 0;
    while (pow3(n0 + 1) <= t) ++n0;
    if (pow3(n0) == t) return 0.0;                 // |m| = 3^n
    if (t <= 2.0 * pow3(n0)) return band2(n0);     // (3^n, 2*3^n]
    double d = pow3(n0 + 1) - t;                    // t in (2*3^{n0}, 3^{n0+1})
    int k = 0;
    while (pow3(k + 1) <= d) ++k;                   // 3^k <= d < 3^{k+1}
    return band1(k);
  }
  // Complete bands contribute their telescoped closed forms, so the prefix
  // stays accurate at indices like 3^120 where raw counts would drown in
  // floating noise.
  double pos_sum(double a) const {  // sum over j = 1..a
    if (a <= 0) return 0.0;
    double s = 0.0;
    for (int n = 0; pow3(n) < a; ++n) {
      double lo = pow3(n), hi = 2.0 * pow3(n);
      if (a >= hi) s += log2_phi(n + 1, p) - 2.0 * log2_phi(n, p);  // full band
      else s += (a - lo) * band2(n);
    }
    for (int n = 2;; ++n) {
      double hi_n = pow3(n);
      if (hi_n - pow3(n - 1) >= a) break;
      if (hi_n <= a) {  // whole block telescopes to phi(n-1)
        s += log2_phi(n - 1, p);
        continue;
      }
      for (int k = 0; k + 2 <= n; ++k) {
        double lo = hi_n - pow3(k + 1);  // band is (lo, hi]
        double hi = hi_n - pow3(k);
        if (a >= hi) s += log2_phi(k + 1, p) - log2_phi(k, p);  // full band
        else if (a > lo) s += (a - lo) * band1(k);
      }
    }
    return s;
  }
  double prefix(double n) const {
    if (n >= 0) return pos_sum(n);
    return -pos_sum(-n - 1);  // symmetric, log2 w_0 = 0
  }
};

}  // namespace detail

inline WeightSequence unweighted_shift() {
  WeightSequence w([](double) { return 0.0; }, 1.0, 1.0, "unweighted");
  w.with_closed_prefix([](double) { return 0.0; });
  w.declare_symmetric();
  w.declare_hyper_floor(0.0, "every weight product equals one");
  w.declare_super_floor(0.0, "every weight product equals one");
  return w;
}

// w_n = 2 for n >= 0, w_n = 1 for n < 0.
inline WeightSequence chan_sanders_shift() {
  WeightSequence w([](double n) { return n >= 0 ? 1.0 : 0.0; }, 1.0, 2.0, "chan_sanders");
  w.with_closed_prefix([](double n) { return n >= 0 ? n : -1.0; });
  w.declare_hyper_floor(0.0, "all weights are >= 1, so backward products never fall below one");
  return w;
}

// The invertible {1/2, 1, 2}-valued family with 9^k bands.
inline WeightSequence prop18_shift() {
  WeightSequence w(detail::prop18_log_weight, 0.5, 2.0, "prop18");
  w.with_closed_prefix(detail::prop18_prefix);
  w.declare_hyper_floor(
      0.0, "band pairs cancel: at every n one of beta(-n,0), beta(0,n) equals one");
  return w;
}

// Weights of the inverse shift: w~_n = 1 / w_{-n}, with the prefix derived
// from the base family's prefix.
inline WeightSequence inverse_shift_weights(const WeightSequence& base) {
  WeightSequence src = base;
  WeightSequence w([src](double n) { return -src.log_weight(-n); },
                   1.0 / base.upper_bound(), 1.0 / base.lower_bound(),
                   base.name() + "_inverse");
  if (base.has_closed_prefix()) {
    w.with_closed_prefix([src](double n) {
      if (n >= 0) return src.log_prefix(-n) - src.log_weight(-n) + src.log_weight(0);
      return src.log_prefix(-n - 1) + src.log_weight(0);
    });
  }
  if (base.symmetric()) w.declare_symmetric();
  return w;
}

inline WeightSequence prop18_inverse_shift() {
  WeightSequence w = inverse_shift_weights(prop18_shift());
  w.declare_hyper_floor(0.0, "odd-band analog of the prop18 cancellation");
  return w;
}

// Symmetric family w_n = w_{-n} -> 1 built from phi; requires p > 2.
inline WeightSequence prop19_shift(double p) {
  if (!(p > 2.0)) throw std::domain_error("prop19 weights require p > 2");
  detail::Prop19Layout lay{p};
  double lo = 1.0, hi = 1.0;
  for (int k = 0; k < 48; ++k) {
    double b1 = std::exp2(lay.band1(k));
    double b2 = std::exp2(lay.band2(k));
    lo = std::min({lo, b1, b2});
    hi = std::max({hi, b1, b2});
  }
  WeightSequence w([lay](double m) { return m == 0 ? 0.0 : lay.log_weight_abs(std::fabs(m)); },
                   lo, hi, "prop19(p=" + std::to_string(p) + ")");
  w.with_closed_prefix([lay](double n) { return lay.prefix(n); });
  w.declare_symmetric();
  w.declare_super_floor(-std::log2(hi),
                        "symmetric weights pin the k=0 statistic at w_0/w_n");
  return w;
}

inline WeightSequence custom_shift(std::function<double(double)> log_weight, double lower,
                                   double upper, std::string name = "custom") {
  return WeightSequence(std::move(log_weight), lower, upper, std::move(name));
}

inline WeightSequence weight_family_by_name(const std::string& tag, double p = 3.0) {
  if (tag == "unweighted") return unweighted_shift();
  if (tag == "chan-sanders" || tag == "chan_sanders") return chan_sanders_shift();
  if (tag == "prop18") return prop18_shift();
  if (tag == "prop18-inverse" || tag == "prop18_inverse") return prop18_inverse_shift();
  if (tag == "prop19") return prop19_shift(p);
  throw std::invalid_argument("unknown weight family: " + tag);
}

struct IdentityCheck {
  std::string label;
  double max_abs_log2_error = 0.0;
  i64 cases = 0;
};

// Exhaustive check of the closed-form product identities of the named
// families over a bounded range; returns the worst log2 error per identity.
inline std::vector<IdentityCheck> verify_weight_identities(const std::string& family,
                                                           int k_or_n_max, double p = 3.0) {
  std::vector<IdentityCheck> out;
  if (family == "prop18" || family == "prop18_inverse") {
    WeightSequence w = family == "prop18" ? prop18_shift() : prop18_inverse_shift();
    int k0 = family == "prop18" ? 0 : 1;
    IdentityCheck fwd{family + ": log2 beta(1,a) = a - 7*9^k on the band", 0.0, 0};
    IdentityCheck bwd{family + ": beta(-a+1,0) = 1 on the band", 0.0, 0};
    for (int k = k0; k <= k_or_n_max; k += 2) {
      i64 b = 1;
      for (int i = 0; i < k; ++i) b *= 9;
      for (i64 a = 7 * b + 1; a <= 9 * b; ++a) {
        fwd.max_abs_log2_error = std::max(
            fwd.max_abs_log2_error,
            std::fabs(log2_beta(w, 1, double(a)) - double(a - 7 * b)));
        ++fwd.cases;
        bwd.max_abs_log2_error =
            std::max(bwd.max_abs_log2_error, std::fabs(log2_beta(w, double(-a + 1), 0)));
        ++bwd.cases;
      }
    }
    out.push_back(fwd);
    out.push_back(bwd);
    return out;
  }
  if (family == "prop19") {
    WeightSequence w = prop19_shift(p);
    IdentityCheck be1{"prop19: log2 beta(1,3^n-3^k) = log2(phi(n)/phi(k))", 0.0, 0};
    IdentityCheck be2{"prop19: log2 beta(1,3^n) = log2 phi(n)", 0.0, 0};
    auto p3 = [](int n) { return detail::Prop19Layout::pow3(n); };
    for (int n = 0; n <= k_or_n_max; ++n) {
      be2.max_abs_log2_error = std::max(
          be2.max_abs_log2_error, std::fabs(log2_beta(w, 1, p3(n)) - log2_phi(n, p)));
      ++be2.cases;
      for (int k = 0; k < n; ++k) {
        double lhs = log2_beta(w, 1, p3(n) - p3(k));
        double rhs = log2_phi(n, p) - log2_phi(k, p);
        be1.max_abs_log2_error = std::max(be1.max_abs_log2_error, std::fabs(lhs - rhs));
        ++be1.cases;
      }
    }
    out.push_back(be1);
    out.push_back(be2);
    return out;
  }
  throw std::invalid_argument("verify_weight_identities: no identities for " + family);
}

}  // namespace orbitlab
