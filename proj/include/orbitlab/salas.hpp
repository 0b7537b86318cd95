#pragma once

#include <algorithm>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/common.hpp"
#include "orbitlab/log_domain.hpp"
#include "orbitlab/weight_sequence.hpp"

namespace orbitlab {

// The four weight-product statistics behind the shift criteria. The
// hypercyclicity / supercyclicity characterizations ask for liminf_n = 0
// of these at every k; log2 domain throughout.

inline double salas_hyper_log2(const WeightSequence& w, i64 k, i64 n) {
  if (n < 1 || k < 0) throw std::domain_error("salas statistic: need n >= 1, k >= 0");
  double max_back = -std::numeric_limits<double>::infinity();
  double min_fwd = std::numeric_limits<double>::infinity();
  for (i64 j = -k; j <= k; ++j) {
    max_back = std::max(max_back, log2_beta(w, double(j - n), double(j)));
    min_fwd = std::min(min_fwd, log2_beta(w, double(j), double(j + n)));
  }
  return std::max(max_back, -min_fwd);
}

inline double salas_super_log2(const WeightSequence& w, i64 k, i64 n) {
  if (n < 1 || k < 0) throw std::domain_error("salas statistic: need n >= 1, k >= 0");
  double max_back = -std::numeric_limits<double>::infinity();
  double min_fwd = std::numeric_limits<double>::infinity();
  for (i64 j = -k; j <= k; ++j) {
    max_back = std::max(max_back, log2_beta(w, double(j - n), double(j)));
    min_fwd = std::min(min_fwd, log2_beta(w, double(j), double(j + n)));
  }
  return max_back - min_fwd;
}

// Single-window forms centered at k: hyper = max{beta(k-n+1,k), beta(k+1,k+n)^-1},
// super = beta(k-n+1,k) / beta(k+1,k+n).
inline std::pair<double, double> salas_simplified_log2(const WeightSequence& w, i64 k, i64 n) {
  if (n < 1 || k < 0) throw std::domain_error("salas statistic: need n >= 1, k >= 0");
  double back = log2_beta(w, double(k - n + 1), double(k));
  double fwd = log2_beta(w, double(k + 1), double(k + n));
  return {std::max(back, -fwd), back - fwd};
}

inline LogMag salas_hyper_stat(const WeightSequence& w, i64 k, i64 n) {
  return LogMag(salas_hyper_log2(w, k, n));
}
inline LogMag salas_super_stat(const WeightSequence& w, i64 k, i64 n) {
  return LogMag(salas_super_log2(w, k, n));
}
inline std::pair<LogMag, LogMag> salas_simplified_stats(const WeightSequence& w, i64 k, i64 n) {
  auto [h, s] = salas_simplified_log2(w, k, n);
  return {LogMag(h), LogMag(s)};
}

enum class StatKind { hyper, super, hyper_simplified, super_simplified };

inline const char* to_string(StatKind k) {
  switch (k) {
    case StatKind::hyper: return "hyper";
    case StatKind::super: return "super";
    case StatKind::hyper_simplified: return "hyper_simplified";
    case StatKind::super_simplified: return "super_simplified";
  }
  return "?";
}

// A statistic rule plus whatever floor the weight family can prove for it.
struct StatRule {
  std::function<double(i64 k, i64 n)> log2_stat;
  std::optional<DeclaredFloor> floor;
  std::string name;
};

inline StatRule make_salas_rule(const WeightSequence& w, StatKind kind) {
  StatRule r;
  r.name = std::string(to_string(kind)) + "[" + w.name() + "]";
  switch (kind) {
    case StatKind::hyper:
      r.log2_stat = [w](i64 k, i64 n) { return salas_hyper_log2(w, k, n); };
      r.floor = w.hyper_floor();
      break;
    case StatKind::super:
      r.log2_stat = [w](i64 k, i64 n) { return salas_super_log2(w, k, n); };
      r.floor = w.super_floor();
      break;
    case StatKind::hyper_simplified:
      r.log2_stat = [w](i64 k, i64 n) { return salas_simplified_log2(w, k, n).first; };
      r.floor = w.hyper_floor();
      break;
    case StatKind::super_simplified:
      r.log2_stat = [w](i64 k, i64 n) { return salas_simplified_log2(w, k, n).second; };
      r.floor = w.super_floor();
      break;
  }
  return r;
}

enum class CriterionOutcome { consistent_at_horizon, violated, inconclusive };

inline const char* to_string(CriterionOutcome o) {
  switch (o) {
    case CriterionOutcome::consistent_at_horizon: return "consistent_at_horizon";
    case CriterionOutcome::violated: return "violated";
    default: return "inconclusive";
  }
}

struct PerKMinimum {
  i64 k = 0;
  double min_log2 = 0.0;
  i64 argmin_n = 0;
};

// Finite-horizon verdict for a liminf criterion. "violated" is only issued
// on the strength of a declared floor (symmetry, constant weights, one-sided
// band cancellation), and the observed minima are checked against it.
struct CriterionVerdict {
  std::vector<PerKMinimum> per_k;
  double running_min_log2 = std::numeric_limits<double>::infinity();
  i64 k_max = 0;
  i64 horizon = 0;
  double tol_log2 = 0.0;
  CriterionOutcome verdict = CriterionOutcome::inconclusive;
  std::optional<DeclaredFloor> floor_evidence;
};

// series_sink, when given, receives every (k, n, log2 stat) in order.
inline CriterionVerdict evaluate_criterion(
    const StatRule& stat, i64 k_max, i64 horizon, double tol_log2 = -20.0,
    const std::function<void(i64, i64, double)>& series_sink = nullptr) {
  if (horizon < 1) throw std::domain_error("evaluate_criterion: horizon >= 1");
  CriterionVerdict v;
  v.k_max = k_max;
  v.horizon = horizon;
  v.tol_log2 = tol_log2;
  int threads = env_thread_count();
  for (i64 k = 0; k <= k_max; ++k) {
    PerKMinimum pk;
    pk.k = k;
    pk.min_log2 = std::numeric_limits<double>::infinity();
    if (series_sink || threads <= 1) {
      for (i64 n = 1; n <= horizon; ++n) {
        double s = stat.log2_stat(k, n);
        if (series_sink) series_sink(k, n, s);
        if (s < pk.min_log2) { pk.min_log2 = s; pk.argmin_n = n; }
      }
    } else {
      i64 chunk = (horizon + threads - 1) / threads;
      std::vector<std::future<PerKMinimum>> futs;
      for (int t = 0; t < threads; ++t) {
        i64 lo = 1 + t * chunk, hi = std::min(horizon, lo + chunk - 1);
        if (lo > hi) break;
        futs.push_back(std::async(std::launch::async, [&stat, k, lo, hi] {
          PerKMinimum m{k, std::numeric_limits<double>::infinity(), 0};
          for (i64 n = lo; n <= hi; ++n) {
            double s = stat.log2_stat(k, n);
            if (s < m.min_log2) { m.min_log2 = s; m.argmin_n = n; }
          }
          return m;
        }));
      }
      for (auto& f : futs) {
        PerKMinimum m = f.get();  // merged in fixed chunk order
        if (m.min_log2 < pk.min_log2) { pk.min_log2 = m.min_log2; pk.argmin_n = m.argmin_n; }
      }
    }
    v.running_min_log2 = std::min(v.running_min_log2, pk.min_log2);
    v.per_k.push_back(pk);
  }

  if (stat.floor) {
    if (v.running_min_log2 < stat.floor->log2_floor - 1e-9)
      throw internal_check_error("declared floor contradicted by observed statistics for " +
                                 stat.name);
    v.verdict = CriterionOutcome::violated;
    v.floor_evidence = stat.floor;
    return v;
  }
  bool all_small = true;
  for (const auto& pk : v.per_k) all_small = all_small && pk.min_log2 < tol_log2;
  v.verdict = all_small ? CriterionOutcome::consistent_at_horizon
                        : CriterionOutcome::inconclusive;
  return v;
}

}  // namespace orbitlab
