#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "orbitlab/circle/construction.hpp"
#include "orbitlab/sequences.hpp"
#include "orbitlab/weak_closure.hpp"

namespace orbitlab {

// Fixed enumeration of unit-sup-norm trigonometric polynomials: constants,
// monomials, cosines and sines of increasing degree. Each has sup norm
// exactly 1.
inline std::vector<TrigPoly> standard_test_functions(int count) {
  std::vector<TrigPoly> h;
  h.reserve(size_t(count));
  auto cos_d = [](i64 d) {
    TrigPoly f;
    f.set(d, 0.5);
    f.set(-d, 0.5);
    return f;
  };
  auto sin_d = [](i64 d) {
    TrigPoly f;
    f.set(d, cplx{0.0, -0.5});
    f.set(-d, cplx{0.0, 0.5});
    return f;
  };
  for (int i = 1; i <= count; ++i) {
    switch (i) {
      case 1: h.push_back(TrigPoly::constant(1.0)); break;
      case 2: h.push_back(TrigPoly::monomial(1)); break;
      case 3: h.push_back(TrigPoly::monomial(-1)); break;
      case 4: h.push_back(cos_d(1)); break;
      case 5: h.push_back(sin_d(1)); break;
      default: {
        i64 d = (i - 2) / 4 + 1;
        switch ((i - 6) % 4) {
          case 0: h.push_back(TrigPoly::monomial(d + 1)); break;
          case 1: h.push_back(TrigPoly::monomial(-(d + 1))); break;
          case 2: h.push_back(cos_d(d + 1)); break;
          default: h.push_back(sin_d(d + 1)); break;
        }
      }
    }
  }
  return h;
}

// Bijection n >= 1 -> (i, j), i in [1, h_count], j >= 1: diagonal order by
// (i + j), then by i.
inline std::pair<int, int> diagonal_pairing(int n, int h_count) {
  int count = 0;
  for (int s = 2;; ++s) {
    for (int i = 1; i <= std::min(h_count, s - 1); ++i) {
      if (++count == n) return {i, s - i};
    }
  }
}

struct RajchmanConfig {
  int h_count = 4;
  int stages = 6;
  double delta_log2 = 1.0;  // delta_n = 2^{-delta_log2 * n}
  i64 family_horizon = 4000;
  ConstructionOptions options;
};

struct DecaySnapshot {
  int n = 0;
  i64 j = 0;
  double max_abs = 0.0;  // max |mu^(l)| over j_n <= |l| <= 2 j_n
};

struct RajchmanResult {
  RajchmanConfig config;
  ConstructionResult construction;
  double gram_sum = 0.0;  // sum_{n > m} |<g_n, g_m>|^2 in L2(mu)
  GramStats gram;
  std::vector<std::pair<int, DivergenceVerdict>> family_divergence;
  std::vector<DecaySnapshot> decay;
  std::vector<std::pair<i64, double>> coefficient_windows;  // dyadic sup snapshots
  bool pass = false;
};

// The full program: enumerate test functions, pair them into the drift
// sequence f_n = 2^{-i} j^{-1/2} h_i, run the staged construction with
// delta_n = 2^{-n}, then verify the downstream certificates: the Gram sum
// against its geometric bound, the per-family coefficient divergence
// (harmonic sums), and the Fourier-decay snapshots.
inline RajchmanResult run_rajchman_program(const RajchmanConfig& cfg) {
  if (cfg.h_count < 1 || cfg.stages < 1)
    throw std::invalid_argument("rajchman program: h_count, stages >= 1");
  RajchmanResult out;
  out.config = cfg;

  std::vector<TrigPoly> h = standard_test_functions(cfg.h_count);
  std::vector<TrigPoly> f(size_t(cfg.stages) + 2);
  for (int n = 1; n <= cfg.stages + 1; ++n) {
    auto [i, j] = diagonal_pairing(n, cfg.h_count);
    f[size_t(n)] = h[size_t(i - 1)].scaled(std::exp2(-double(i)) / std::sqrt(double(j)));
  }
  auto delta = [&cfg](int n) { return std::exp2(-cfg.delta_log2 * double(n)); };

  out.construction = run_measure_induction(f, delta, cfg.stages, cfg.options);
  const SpectralDensity& mu = out.construction.final_measure();

  for (const auto& [n, d, v] : out.construction.final_pairings) out.gram_sum += v * v;
  out.gram = gram_two_sequence_bound(size_t(cfg.stages), [&](size_t a, size_t b) {
    TrigPoly prod = out.construction.g[a + 1] * out.construction.g[b + 1].conjugated();
    return mu.pair(prod);
  });

  for (int i = 1; i <= cfg.h_count; ++i) {
    // indices m with phi_1(m) = i enumerate phi_2 over all of N, so the
    // coefficient series is 4^{-i} * sum_j 1/j: divergent with a harmonic
    // tail certificate
    SeriesRule r;
    r.name = "family " + std::to_string(i);
    double scale = std::exp2(-2.0 * double(i));
    r.term = [scale](i64 jj) { return scale / double(jj + 1); };
    r.tail = [](i64) {
      return TailBound{std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()};
    };
    out.family_divergence.emplace_back(i, evaluate_series(r, cfg.family_horizon));
  }

  for (const auto& st : out.construction.stage) {
    DecaySnapshot s;
    s.n = st.n;
    s.j = st.j;
    for (const auto& [q, c] : mu.lines()) {
      i64 aq = q < 0 ? -q : q;
      if (aq >= st.j && aq <= 2 * st.j) s.max_abs = std::max(s.max_abs, std::abs(c));
    }
    out.decay.push_back(s);
  }
  for (i64 w = 1; w <= mu.max_freq() * 2; w *= 2) {
    double mx = 0.0;
    for (const auto& [q, c] : mu.lines()) {
      i64 aq = q < 0 ? -q : q;
      if (aq >= w && aq < 2 * w) mx = std::max(mx, std::abs(c));
    }
    out.coefficient_windows.emplace_back(w, mx);
  }

  bool families_ok = true;
  for (const auto& [i, v] : out.family_divergence)
    families_ok = families_ok && v.trend == Trend::diverging_at_horizon;
  out.pass = out.construction.all_checks_pass && families_ok &&
             out.gram_sum <= 1.0 / 9.0 + 1e-6;
  return out;
}

}  // namespace orbitlab
