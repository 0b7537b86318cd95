#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/common.hpp"
#include "orbitlab/log_domain.hpp"
#include "orbitlab/sequences.hpp"
#include "orbitlab/shift_certificate.hpp"
#include "orbitlab/target_schedule.hpp"
#include "orbitlab/weight_sequence.hpp"
#include "orbitlab/zvector.hpp"

namespace orbitlab {

// The support-size caps a_n for the candidate construction, derived
// greedily as the largest non-decreasing integer sequence satisfying
//   (an1) 2 a_{m_k} < r_k - r_{k-1} whenever the W3 tail index m_k is known,
//   (an2) a_n c^{2 a_n} <= alpha_n,
//   (an3) a_n + a_{n-1} < r_n - r_{n-1} - r_{n-2} for n >= 2,
// scanned left to right against suffix-propagated feasibility caps.
struct SupportCaps {
  std::vector<i64> a;
  // m_k: first index from which the W3 tail relative to stage k fits the
  // 2^{-pk} rho_k^p budget; often far beyond any desk horizon, in which
  // case only the log2 estimate is reported and (an1) does not bind.
  std::vector<std::optional<i64>> m_k;
  std::vector<double> m_k_log2_estimate;
  std::vector<std::string> notes;
};

namespace detail {

inline double w3_term_log2(const WeightSequence& w, const ShiftCertificate& cert, i64 n,
                           double r_k) {
  double t = cert.p * (std::log2(cert.alpha(n)) + std::log2(cert.rho(n)));
  if (!w.constant_one()) {
    double r = cert.r(n);
    if (!(r < 1e300)) return -std::numeric_limits<double>::infinity();
    t -= cert.p * log2_beta(w, 1.0, r - r_k);
  }
  return t;
}

}  // namespace detail

inline SupportCaps derive_support_caps(const WeightSequence& w, const ShiftCertificate& cert,
                                       i64 stages, i64 horizon = 100000) {
  SupportCaps caps;
  const double p = cert.p;
  const double c = std::max(w.upper_bound(), 1.0 / w.lower_bound());

  // m_k per stage k: scan the suffix sums of the k-shifted W3 terms.
  for (i64 k = 0; k < stages; ++k) {
    double budget_log2 = p * std::log2(cert.rho(k)) - p * double(k);
    std::optional<i64> mk;
    double estimate = std::numeric_limits<double>::quiet_NaN();
    if (w.constant_one() && cert.w3_tail) {
      // beta == 1 makes the shifted tail equal the plain W3 tail.
      double sum_beyond = cert.w3_tail(horizon).upper;
      std::vector<double> suffix;
      double s = sum_beyond;
      for (i64 n = horizon; n > k; --n) {
        s += std::exp2(detail::w3_term_log2(w, cert, n, 0.0));
        if (std::log2(s) < budget_log2) { mk = n; }
      }
      if (!mk) {
        // closed-form estimate from the lnlog-style tail: ln m ~ (2/((p-1)b))^{1/(p-1)}
        double b = std::exp2(budget_log2);
        double lnm = std::pow(2.0 / ((p - 1.0) * b), 1.0 / (p - 1.0));
        estimate = lnm / std::log(2.0);
        caps.notes.push_back("m_" + std::to_string(k) +
                             " beyond horizon; log2 estimate " + std::to_string(estimate));
      }
    } else {
      // direct scan; certify the cutoff only when the terms visibly collapse
      double rk = cert.r(k);
      i64 scan = std::min<i64>(horizon, 256);
      std::vector<double> tl(size_t(scan) + 1, 0.0);
      for (i64 n = k + 1; n <= scan; ++n)
        tl[size_t(n)] = detail::w3_term_log2(w, cert, n, rk);
      bool collapsing = scan > k + 2 && tl[size_t(scan)] < tl[size_t(scan - 1)] - 1.0;
      if (collapsing) {
        double s = 2.0 * std::exp2(std::max(tl[size_t(scan)], -1060.0));
        for (i64 n = scan; n > k; --n) {
          s += std::exp2(std::max(tl[size_t(n)], -1060.0));
          if (std::log2(s) < budget_log2) mk = n;
        }
      }
      if (!mk)
        caps.notes.push_back("m_" + std::to_string(k) + " not certified within horizon");
    }
    caps.m_k.push_back(mk);
    caps.m_k_log2_estimate.push_back(estimate);
  }

  // pointwise caps, then suffix-min feasibility, then the exact greedy pass
  auto gap = [&cert](i64 n) {  // r_n - r_{n-1} - r_{n-2}, n >= 2
    double g = std::exp2(detail::log2_w2_gap(cert, n - 2));
    return g;
  };
  const double INF = std::numeric_limits<double>::infinity();
  std::vector<double> pc(size_t(stages), INF);
  for (i64 n = 0; n < stages; ++n) {
    i64 amax = 0;
    while (double(amax + 1) * std::pow(c, 2.0 * double(amax + 1)) <= cert.alpha(n))
      ++amax;
    pc[size_t(n)] = std::min(pc[size_t(n)], double(amax));
    for (i64 m : {n, n + 1})
      if (m >= 2 && m < stages)
        pc[size_t(n)] = std::min(pc[size_t(n)], std::floor((gap(m) - 1.0) / 2.0));
  }
  for (i64 k = 1; k < stages; ++k) {
    if (caps.m_k[size_t(k)] && *caps.m_k[size_t(k)] < stages) {
      double lim = std::floor((cert.r(k) - cert.r(k - 1) - 1.0) / 2.0);
      i64 idx = *caps.m_k[size_t(k)];
      pc[size_t(idx)] = std::min(pc[size_t(idx)], lim);
    }
  }
  std::vector<double> scap = pc;
  for (i64 n = stages - 2; n >= 0; --n)
    scap[size_t(n)] = std::min(scap[size_t(n)], scap[size_t(n + 1)]);

  caps.a.resize(size_t(stages), 0);
  for (i64 n = 0; n < stages; ++n) {
    double cap = scap[size_t(n)];
    if (n >= 2) cap = std::min(cap, gap(n) - double(caps.a[size_t(n - 1)]) - 1.0);
    i64 v = cap >= 0 ? i64(cap) : 0;
    if (n >= 1 && v < caps.a[size_t(n - 1)])
      throw internal_check_error("support caps lost monotonicity; gap data inconsistent");
    caps.a[size_t(n)] = v;
  }
  return caps;
}

struct CandidateBuild {
  ZVector u;
  std::vector<i64> active_stages;   // n < stages with kappa(n) != 0
  std::vector<ZVector> summands;    // rho_n T^{-r_n} kappa(n) for active n
  double norm_log2 = 0.0;           // log2 ||u||_p
  double norm_identity_gap = 0.0;   // | log2 ||u|| - log2 (sum rho^p ||kappa||^p)^{1/p} |
  double omitted_tail_log2 = -std::numeric_limits<double>::infinity();
  bool yz_disjoint_ok = true;
  std::vector<std::string> notes;
};

struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The truncated candidate u = sum_{n < stages} rho_n T^{-r_n} kappa(n).
// Summand supports must come out pairwise disjoint ((an3) gaps); any
// collision is an error, never silently merged. Also verifies the
// decomposition bookkeeping: the parts of T^{r_k} u away from the center,
// y_k (stages below k) + z_k (small stages above k), have pairwise
// disjoint supports across k.
inline CandidateBuild build_shift_candidate(const WeightSequence& w,
                                            const ShiftCertificate& cert,
                                            const TargetSchedule& kappa,
                                            const SupportCaps& caps, i64 stages) {
  CandidateBuild out;
  const double p = cert.p;
  std::vector<ZVector> kap(static_cast<size_t>(stages));
  for (i64 n = 0; n < stages; ++n) {
    kap[size_t(n)] = kappa.value_at(n);
    if (kap[size_t(n)].empty()) continue;
    if (kap[size_t(n)].gamma() > caps.a[size_t(n)] ||
        pnorm(kap[size_t(n)], p).linear() > double(caps.a[size_t(n)]) + 1e-12)
      throw construction_error("target at stage " + std::to_string(n) +
                               " exceeds its support cap a_n");
  }

  auto r_int = [&cert](i64 n) {
    double r = cert.r(n);
    if (!(r < 9.0e15))
      throw construction_error("r_n too large for explicit shifting");
    return i64(std::llround(r));
  };

  Log2SumAccumulator norm_acc;  // sum rho^p ||kappa||^p
  for (i64 n = 0; n < stages; ++n) {
    if (kap[size_t(n)].empty()) continue;
    ZVector s = apply_shift(w, kap[size_t(n)], -r_int(n));
    s.scale(cert.rho(n));
    for (const ZVector& prev : out.summands)
      if (!supports_disjoint(prev, s))
        throw construction_error("summand support collision at stage " + std::to_string(n) +
                                 " ((an3) gap violated)");
    norm_acc.add(p * (std::log2(cert.rho(n)) + pnorm(kap[size_t(n)], p).log2()));
    out.active_stages.push_back(n);
    out.summands.push_back(std::move(s));
  }

  for (const ZVector& s : out.summands)
    for (const auto& [idx, v] : s.entries()) out.u.set_log(idx, v);

  if (!out.u.empty()) {
    out.norm_log2 = pnorm(out.u, p).log2();
    double rhs = norm_acc.log2_sum() / p;
    out.norm_identity_gap = std::fabs(out.norm_log2 - rhs);
  }

  // omitted tail: remaining W3 mass past the truncation, reported as a
  // log2 bound on its p-th power
  {
    Log2SumAccumulator tail;
    i64 probe = stages + 256;
    for (i64 n = stages; n < probe; ++n)
      tail.add(detail::w3_term_log2(w, cert, n, 0.0));
    if (cert.w3_tail) {
      double beyond = cert.w3_tail(probe - 1).upper;
      if (beyond > 0) tail.add(std::log2(beyond));
    }
    out.omitted_tail_log2 = tail.log2_sum();
  }

  // y_k + z_k supports disjoint across k (the small-stage parts of T^{r_k} u)
  std::vector<ZVector> yz;
  for (i64 k = 1; k < stages; ++k) {
    double half_gap = (cert.r(k) - cert.r(k - 1)) / 2.0;
    ZVector agg;
    for (i64 n = 0; n < stages; ++n) {
      if (n == k || kap[size_t(n)].empty()) continue;
      if (n > k && double(caps.a[size_t(n)]) >= half_gap) continue;  // v_k part
      ZVector t = apply_shift(w, kap[size_t(n)], r_int(k) - r_int(n));
      t.scale(cert.rho(n));
      for (const auto& [idx, v] : t.entries()) agg.set_log(idx, v);
    }
    yz.push_back(std::move(agg));
  }
  for (size_t i = 0; i < yz.size() && out.yz_disjoint_ok; ++i)
    for (size_t j = i + 1; j < yz.size(); ++j)
      if (!supports_disjoint(yz[i], yz[j])) {
        out.yz_disjoint_ok = false;
        out.notes.push_back("y+z support collision between k=" + std::to_string(i + 1) +
                            " and k=" + std::to_string(j + 1));
        break;
      }
  return out;
}

}  // namespace orbitlab
