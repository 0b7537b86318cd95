#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "orbitlab/common.hpp"
#include "orbitlab/log_domain.hpp"
#include "orbitlab/sequences.hpp"
#include "orbitlab/weight_sequence.hpp"

namespace orbitlab {

// Parameters of the weak supercyclicity / hypercyclicity certificate for an
// invertible shift: a return-time sequence r_n (kept as log2 since valid
// choices grow at least geometrically), growth weights alpha_n, scaling
// weights rho_n, and the exponent p > 1. rho == 1 upgrades the certified
// property from weak supercyclicity to weak hypercyclicity.
struct ShiftCertificate {
  std::function<double(i64)> log2_r;
  std::function<double(i64)> alpha;
  std::function<double(i64)> rho;
  double p = 2.0;
  std::function<TailBound(i64)> w3_tail;  // optional: tail of the W3 term series
  // optional exact r_n evaluator; presets tied to a banded weight family
  // share its power tables so band-edge classification stays exact at any
  // magnitude (exp2(log2_r) alone drifts by ulps from the true powers)
  std::function<double(i64)> r_fn;
  std::string name;

  double r(i64 n) const { return r_fn ? r_fn(n) : std::exp2(log2_r(n)); }
  bool rho_is_one = false;
};

// alpha_n = ln(n+2), rho_n = (n+1)^{-1/p} ln(n+2)^{-2}, r_n = 2^n.
// The standard data certifying the unweighted shift on l_p for p > 2.
inline ShiftCertificate lnlog_certificate(double p) {
  if (!(p > 1.0)) throw std::domain_error("certificate requires p > 1");
  ShiftCertificate c;
  c.p = p;
  c.name = "lnlog(p=" + std::to_string(p) + ")";
  c.log2_r = [](i64 n) { return double(n); };
  c.alpha = [](i64 n) { return std::log(double(n) + 2.0); };
  c.rho = [p](i64 n) {
    return std::pow(double(n) + 1.0, -1.0 / p) / std::pow(std::log(double(n) + 2.0), 2.0);
  };
  // W3 terms for beta == 1 are (n+1)^{-1} ln(n+2)^{-p}; integral comparison.
  c.w3_tail = [p](i64 N) {
    TailBound tb;
    tb.lower = 0.0;
    tb.upper = 2.0 / ((p - 1.0) * std::pow(std::log(double(N) + 2.0), p - 1.0));
    return tb;
  };
  return c;
}

// rho == 1, r_n = 9^{2n+1}, alpha_n = ln ln(n+4); pairs with the prop18
// family, whose products make the W3 terms collapse super-exponentially.
inline ShiftCertificate prop18_certificate(double p = 2.0) {
  ShiftCertificate c;
  c.p = p;
  c.name = "prop18_cert(p=" + std::to_string(p) + ")";
  c.log2_r = [](i64 n) { return double(2 * n + 1) * std::log2(9.0); };
  c.r_fn = [](i64 n) {
    double v = 9.0;
    for (i64 i = 0; i < n; ++i) v *= 81.0;
    return v;
  };
  c.alpha = [](i64 n) { return std::log(std::log(double(n) + 4.0)); };
  c.rho = [](i64) { return 1.0; };
  c.rho_is_one = true;
  c.w3_tail = [p](i64 N) {
    // terms <= alpha^p * 2^{-2p*9^{2n}}, ratio far below 1/2 from n = 0 on
    double n1 = double(N + 1);
    double log2_term =
        p * std::log2(std::log(std::log(n1 + 4.0))) - 2.0 * p * std::pow(9.0, 2.0 * n1);
    TailBound tb;
    tb.lower = 0.0;
    tb.upper = log2_term < -1000 ? 0.0 : 2.0 * std::exp2(log2_term);
    return tb;
  };
  return c;
}

// rho == 1, r_n = 3^n, alpha_n = ln ln(n+4); pairs with the prop19 family.
inline ShiftCertificate prop19_certificate(double p) {
  if (!(p > 2.0)) throw std::domain_error("prop19 certificate requires p > 2");
  ShiftCertificate c;
  c.p = p;
  c.name = "prop19_cert(p=" + std::to_string(p) + ")";
  c.log2_r = [](i64 n) { return double(n) * std::log2(3.0); };
  c.r_fn = [](i64 n) {
    double v = 1.0;
    for (i64 i = 0; i < n; ++i) v *= 3.0;
    return v;
  };
  c.alpha = [](i64 n) { return std::log(std::log(double(n) + 4.0)); };
  c.rho = [](i64) { return 1.0; };
  c.rho_is_one = true;
  return c;
}

enum class ConditionStatus { pass, fail, inconclusive };

inline const char* to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::pass: return "pass";
    case ConditionStatus::fail: return "fail";
    default: return "inconclusive";
  }
}

struct WConditionReport {
  std::string id;
  ConditionStatus status = ConditionStatus::inconclusive;
  bool certified = false;
  std::string detail;
  std::vector<std::pair<i64, double>> series;  // checkpoint series
};

struct WReport {
  double p = 0.0;
  i64 horizon = 0;
  std::vector<WConditionReport> conditions;
  bool overall_pass = false;
  // W2: the raw gap condition only needs r_{n+2}-r_{n+1}-r_n -> inf; the
  // stronger r_n > r_{n-1}+r_{n-2} used downstream holds from this offset on.
  i64 reindex_offset = 0;
  double w3_sum = 0.0;
  double w3_last_decade_relative_increment = 0.0;
  double w4_sum = 0.0;
  double w4_decade_ratio = 0.0;   // S(horizon) / S(horizon/10)
  double w4_century_ratio = 0.0;  // S(horizon) / S(horizon/100), the W4 trend estimate
  const WConditionReport& condition(const std::string& id) const {
    for (const auto& c : conditions)
      if (c.id == id) return c;
    throw std::out_of_range("no condition " + id);
  }
};

namespace detail {

inline std::vector<i64> decade_checkpoints(i64 horizon) {
  std::vector<i64> cps;
  for (i64 c = 1; c < horizon; c *= 10) cps.push_back(c);
  cps.push_back(horizon);
  return cps;
}

// log2 of r_{n+2} - r_{n+1} - r_n, or -inf when the difference is <= 0.
inline double log2_w2_gap(const ShiftCertificate& cert, i64 n) {
  double l2 = cert.log2_r(n + 2), l1 = cert.log2_r(n + 1), l0 = cert.log2_r(n);
  double inner = 1.0 - std::exp2(l1 - l2) - std::exp2(l0 - l2);
  if (inner <= 0.0) return -std::numeric_limits<double>::infinity();
  return l2 + std::log2(inner);
}

}  // namespace detail

// Evaluates the four certificate conditions against a weight sequence at a
// finite horizon. W1/W2 are trend checks on sampled values, W3/W4 are
// partial-sum verdicts; a certificate-supplied tail bound upgrades W3 to a
// certified verdict. For weights without a closed-form prefix the W4 double
// sum is O(horizon^2) and the horizon is capped.
inline WReport check_shift_certificate(const WeightSequence& w, const ShiftCertificate& cert,
                                       i64 horizon) {
  if (!(cert.p > 1.0)) throw std::domain_error("check_shift_certificate: p must be > 1");
  WReport rep;
  rep.p = cert.p;
  rep.horizon = horizon;
  const double p = cert.p;
  auto cps = detail::decade_checkpoints(horizon);

  // W1: alpha increasing beyond every previously sampled bound.
  {
    WConditionReport c;
    c.id = "W1";
    double best = -std::numeric_limits<double>::infinity();
    bool mono = true;
    for (i64 cp : cps) {
      double a = cert.alpha(cp);
      c.series.emplace_back(cp, a);
      if (a <= best) mono = false;
      best = std::max(best, a);
    }
    c.status = mono ? ConditionStatus::pass : ConditionStatus::fail;
    c.detail = mono ? "alpha strictly increases across sampled checkpoints"
                    : "alpha failed to exceed an earlier sampled value";
    rep.conditions.push_back(std::move(c));
  }

  // W2: r_{n+2}-r_{n+1}-r_n positive and growing; also locate the offset
  // from which the re-indexed form r_n > r_{n-1}+r_{n-2} holds.
  {
    WConditionReport c;
    c.id = "W2";
    bool pos = true, grow = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (i64 cp : cps) {
      double g = detail::log2_w2_gap(cert, cp);
      c.series.emplace_back(cp, g);
      if (std::isinf(g) && g < 0) pos = false;
      if (g <= prev) grow = false;
      prev = g;
    }
    i64 scan_cap = std::min<i64>(horizon, 4096);
    i64 last_fail = -1;
    for (i64 n = 2; n <= scan_cap; ++n) {
      double ln = cert.log2_r(n);
      double inner = 1.0 - std::exp2(cert.log2_r(n - 1) - ln) - std::exp2(cert.log2_r(n - 2) - ln);
      if (inner <= 0.0) last_fail = n;
    }
    rep.reindex_offset = last_fail + 1;
    c.status = (pos && grow) ? ConditionStatus::pass : ConditionStatus::fail;
    c.detail = "log2 gap series; re-indexed form holds from offset " +
               std::to_string(rep.reindex_offset);
    rep.conditions.push_back(std::move(c));
  }

  // W3: sum over n of (rho_n alpha_n / beta(1,r_n))^p.
  std::vector<double> w3_terms(size_t(horizon) + 1);
  {
    WConditionReport c;
    c.id = "W3";
    for (i64 n = 0; n <= horizon; ++n) {
      double log2_term = p * (std::log2(cert.rho(n)) + std::log2(cert.alpha(n)));
      if (!w.constant_one()) log2_term -= p * log2_beta(w, 1.0, cert.r(n));
      w3_terms[size_t(n)] = log2_term < -1060 ? 0.0 : std::exp2(log2_term);
    }
    SeriesRule rule{[&w3_terms](i64 n) { return w3_terms[size_t(n)]; }, cert.w3_tail, "W3"};
    DivergenceVerdict v = evaluate_series(rule, horizon);
    rep.w3_sum = v.partial_sum;
    rep.w3_last_decade_relative_increment = v.last_decade_relative_increment();
    c.certified = v.certified;
    c.status = v.trend == Trend::converging_at_horizon ? ConditionStatus::pass
               : v.trend == Trend::diverging_at_horizon ? ConditionStatus::fail
                                                        : ConditionStatus::inconclusive;
    c.series = v.checkpoints;
    c.detail = std::string("trend ") + to_string(v.trend) +
               (v.certified ? " (tail bound)" : " (at horizon)");
    rep.conditions.push_back(std::move(c));
  }

  // W4: sum over k of (max_{1<=m<=k} xi_m)^{-1/(p-1)} where xi_m collects
  // the two shifted W3-type sums relative to stage m.
  {
    WConditionReport c;
    c.id = "W4";
    std::vector<double> xi_log2(size_t(horizon) + 1, 0.0);
    if (w.constant_one()) {
      // beta == 1: xi_m = (sum_{n != m} (alpha_n rho_n)^p + tail) / rho_m^p
      double total = 0.0;
      for (i64 n = 0; n <= horizon; ++n) total += w3_terms[size_t(n)];
      if (cert.w3_tail) total += cert.w3_tail(horizon).upper;  // pessimistic
      for (i64 m = 1; m <= horizon; ++m) {
        double num = std::max(total - w3_terms[size_t(m)], 0.0);
        xi_log2[size_t(m)] = std::log2(num) - p * std::log2(cert.rho(m));
      }
    } else {
      if (horizon > 3000)
        throw std::domain_error(
            "check_shift_certificate: W4 horizon capped at 3000 for weighted families");
      for (i64 m = 1; m <= horizon; ++m) {
        Log2SumAccumulator acc;
        double lrm = p * std::log2(cert.rho(m));
        double rm = cert.r(m);
        if (!(rm < 1e300))
          throw std::domain_error("check_shift_certificate: r_m overflows; lower the horizon");
        for (i64 n = 0; n <= horizon; ++n) {
          if (n == m) continue;
          double base = p * (std::log2(cert.alpha(n)) + std::log2(cert.rho(n))) - lrm;
          if (n < m) {
            acc.add(base + p * log2_beta(w, cert.r(n) - rm + 1.0, 0.0));
          } else {
            double rn = cert.r(n);
            if (!(rn < 1e300)) continue;  // beta^{-p} underflows to zero
            acc.add(base - p * log2_beta(w, 1.0, rn - rm));
          }
        }
        xi_log2[size_t(m)] = acc.log2_sum();
      }
    }
    double running_max = -std::numeric_limits<double>::infinity();
    double sum = 0.0, sum_decade = 0.0, sum_century = 0.0;
    for (i64 k = 1; k <= horizon; ++k) {
      running_max = std::max(running_max, xi_log2[size_t(k)]);
      double log2_term = -running_max / (p - 1.0);
      sum += log2_term < -1060 ? 0.0 : std::exp2(log2_term);
      if (k == horizon / 10) sum_decade = sum;
      if (k == horizon / 100) sum_century = sum;
      bool cp = false;
      for (i64 x : cps) cp = cp || (x == k);
      if (cp) c.series.emplace_back(k, sum);
    }
    rep.w4_sum = sum;
    rep.w4_decade_ratio = sum_decade > 0 ? sum / sum_decade
                                         : std::numeric_limits<double>::infinity();
    rep.w4_century_ratio = sum_century > 0 ? sum / sum_century
                                           : std::numeric_limits<double>::infinity();
    Trend t = classify_trend(sum, sum_decade);
    c.status = t == Trend::diverging_at_horizon ? ConditionStatus::pass
               : t == Trend::converging_at_horizon ? ConditionStatus::fail
                                                   : ConditionStatus::inconclusive;
    c.detail = std::string("trend ") + to_string(t) + ", decade ratio " +
               std::to_string(rep.w4_decade_ratio);
    rep.conditions.push_back(std::move(c));
  }

  rep.overall_pass = true;
  for (const auto& c : rep.conditions) rep.overall_pass &= c.status == ConditionStatus::pass;
  return rep;
}

}  // namespace orbitlab
