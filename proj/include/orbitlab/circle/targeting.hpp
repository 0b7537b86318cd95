#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitlab/circle/arc.hpp"
#include "orbitlab/circle/kronecker.hpp"
#include "orbitlab/circle/measure.hpp"
#include "orbitlab/circle/trig_poly.hpp"
#include "orbitlab/common.hpp"

namespace orbitlab {

struct StepCheck {
  std::string id;
  bool pass = false;
  double observed = 0.0;
  double bound = 0.0;
  double slack() const { return bound - observed; }
};

struct TargetingStepResult {
  CircleMeasure nu;
  i64 k = 0;
  i64 decay_index = 0;  // restricted coefficients below eps/3 from here on
  std::vector<StepCheck> checks;
  const StepCheck& check(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return c;
    throw std::out_of_range("no step check " + id);
  }
};

struct TargetingOptions {
  i64 kmax_slack = 16;
  size_t atom_cap = 200000;
  int b4_samples = 64;
  unsigned seed = 20240811;
};

// One measure-adjustment step: given a step-density probability measure mu
// carried by disjoint arcs, per-arc targets c_j (0 < max|c_j| = a <= 1) and
// test functions, produce nu with the same arc masses whose restricted
// Fourier coefficient at some k > k0 lands near c_j mu(I_j), while all test
// pairings move by less than eps and the coefficient sup moves by at most
// 2a. Pipeline: decay index for the restricted coefficients, an atomic
// approximation gamma on independent points, a Kronecker scan toward the
// target phases, and a step-density approximation eta of gamma; then
// nu = sum_j (1-|c_j|) mu|_j + |c_j| eta|_j.
inline TargetingStepResult fourier_targeting_step(const CircleMeasure& mu,
                                                  const std::vector<Arc>& arcs,
                                                  const std::vector<cplx>& c, i64 k0,
                                                  double eps,
                                                  const std::vector<TrigPoly>& tests,
                                                  const TargetingOptions& opts = {}) {
  if (arcs.empty() || arcs.size() != c.size())
    throw std::invalid_argument("fourier_targeting_step: arcs/targets mismatch");
  if (!(eps > 0)) throw std::invalid_argument("fourier_targeting_step: eps must be > 0");
  const size_t m = arcs.size();
  double a = 0.0;
  for (const cplx& cj : c) {
    if (std::abs(cj) == 0.0)
      throw std::invalid_argument("fourier_targeting_step: targets must be nonzero");
    a = std::max(a, std::abs(cj));
  }
  if (a > 1.0 + 1e-12) throw std::invalid_argument("fourier_targeting_step: max |c_j| <= 1");
  double on_arcs = 0.0;
  for (const Arc& arc : arcs) on_arcs += mu.arc_mass(arc);
  if (std::fabs(on_arcs - 1.0) > 1e-9)
    throw std::invalid_argument("fourier_targeting_step: arc masses must sum to 1");

  // decay index: |mu|_j^(l)| <= V_j / (pi l) <= eps/3
  double vmax = 0.0;
  for (const Arc& arc : arcs) vmax = std::max(vmax, mu.restrict(arc).density_jump_variation());
  i64 k1 = i64(std::ceil(3.0 * vmax / (M_PI * eps))) + 1;

  // refinement for gamma: oscillation of each test over a cell stays below
  // eps/(2m) per unit mass
  double slope = 0.0;
  for (const TrigPoly& h : tests) slope = std::max(slope, h.slope_bound());
  double delta1 = slope > 0 ? eps / (2.0 * double(m) * slope) : 1.0;
  std::vector<Arc> cells;
  std::vector<size_t> cell_owner;
  double min_cell = 1.0;
  for (size_t j = 0; j < m; ++j) {
    i64 parts = std::max<i64>(1, i64(std::ceil(arcs[j].length() / delta1)));
    for (const Arc& s : split_arc(arcs[j], parts)) {
      cells.push_back(s);
      cell_owner.push_back(j);
      min_cell = std::min(min_cell, s.length());
    }
  }
  if (cells.size() > opts.atom_cap)
    throw std::runtime_error("fourier_targeting_step: refinement explosion (" +
                             std::to_string(cells.size()) + " cells)");

  // independent atoms, anchored so that a modest k already meets the targets
  PhaseHint hint;
  hint.K = std::max<i64>({i64(std::ceil(2.0 / min_cell)), k0 + 1, k1});
  hint.phase_slack_turns = eps / (24.0 * M_PI);
  hint.target_turns.resize(cells.size());
  for (size_t i = 0; i < cells.size(); ++i) {
    double ang = std::arg(c[cell_owner[i]]) / two_pi;
    hint.target_turns[i] = ang - std::floor(ang);
  }
  CircleMeasure gamma = discretize_atomic(mu, cells, hint);

  std::vector<double> pts;
  std::vector<cplx> thetas;
  for (const auto& at : gamma.atoms()) {
    pts.push_back(at.t);
    size_t j = 0;  // owner arc of this atom
    for (size_t i = 0; i < m; ++i)
      if (arcs[i].contains(at.t)) j = i;
    thetas.push_back(c[j] / std::abs(c[j]));
  }
  KroneckerResult kr = kronecker_search(pts, thetas, std::max(k0, k1), eps / 3.0,
                                        4 * hint.K + opts.kmax_slack);

  // eta: spread each atom over a sub-cell of width <= eps / (6 pi k); only
  // atom-carrying sub-cells have mass, so eta stays small
  double delta2 = std::min(eps / (6.0 * M_PI * double(kr.k)), delta1);
  CircleMeasure eta;
  for (size_t i = 0; i < gamma.atoms().size(); ++i) {
    const auto& at = gamma.atoms()[i];
    const Arc* cell = nullptr;
    for (size_t q = 0; q < cells.size(); ++q)
      if (cells[q].contains(at.t)) { cell = &cells[q]; break; }
    if (!cell) throw internal_check_error("atom lost its cell");
    i64 parts = std::max<i64>(1, i64(std::ceil(cell->length() / delta2)));
    double plen = cell->length() / double(parts);
    i64 idx = std::min<i64>(parts - 1, i64((at.t - cell->lo.value()) / plen));
    double lo = cell->lo.value() + double(idx) * plen;
    double hi = lo + plen;
    // height from the stored endpoints, so the mass reconstructs exactly
    eta.add_segment(lo, hi, at.mass / (hi - lo));
  }

  // nu per arc
  TargetingStepResult out;
  out.k = kr.k;
  out.decay_index = k1;
  for (size_t j = 0; j < m; ++j) {
    double cj = std::abs(c[j]);
    CircleMeasure part = mix(mu.restrict(arcs[j]), 1.0 - cj, eta.restrict(arcs[j]), cj);
    for (const auto& at : part.atoms()) out.nu.add_atom(at.t, at.mass, at.meta);
    for (const auto& s : part.segments()) out.nu.add_segment(s.lo, s.hi, s.height);
  }

  // B1: arc masses exact
  {
    StepCheck ck{"B1", true, 0.0, 1e-12};
    for (size_t j = 0; j < m; ++j)
      ck.observed = std::max(ck.observed,
                             std::fabs(out.nu.arc_mass(arcs[j]) - mu.arc_mass(arcs[j])));
    ck.pass = ck.observed <= ck.bound;
    out.checks.push_back(ck);
  }
  // B2: test pairings
  {
    StepCheck ck{"B2", true, 0.0, eps};
    for (const TrigPoly& h : tests)
      ck.observed = std::max(ck.observed, std::abs(mu.pair(h) - out.nu.pair(h)));
    ck.pass = ck.observed < ck.bound;
    out.checks.push_back(ck);
  }
  // B3: restricted coefficient at k vs c_j mu(I_j)
  {
    StepCheck ck{"B3", true, 0.0, eps};
    for (size_t j = 0; j < m; ++j) {
      cplx got = out.nu.restrict(arcs[j]).fourier(kr.k);
      ck.observed = std::max(ck.observed, std::abs(got - c[j] * mu.arc_mass(arcs[j])));
    }
    ck.pass = ck.observed < ck.bound;
    out.checks.push_back(ck);
  }
  // B4: coefficient sup distance on sampled frequencies
  {
    StepCheck ck{"B4", true, 0.0, 2.0 * a + 1e-9};
    std::mt19937 rng(opts.seed);
    std::vector<i64> freqs;
    for (i64 l = -8; l <= 8; ++l) freqs.push_back(l);
    for (i64 d = -2; d <= 2; ++d) freqs.push_back(kr.k + d);
    freqs.push_back(2 * kr.k);
    freqs.push_back(3 * kr.k);
    std::uniform_int_distribution<i64> pick(-4 * kr.k, 4 * kr.k);
    for (int i = 0; i < opts.b4_samples; ++i) freqs.push_back(pick(rng));
    for (i64 l : freqs)
      ck.observed = std::max(ck.observed, std::abs(mu.fourier(l) - out.nu.fourier(l)));
    ck.pass = ck.observed <= ck.bound;
    out.checks.push_back(ck);
  }
  return out;
}

}  // namespace orbitlab
