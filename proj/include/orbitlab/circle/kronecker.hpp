#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitlab/common.hpp"

namespace orbitlab {

// chordal distance |e^{2 pi i x} - e^{2 pi i y}| from the turn difference
inline double chordal_from_turns(double dturns) {
  double d = dturns - std::floor(dturns);
  if (d > 0.5) d = 1.0 - d;
  return 2.0 * std::sin(M_PI * d);
}

struct KroneckerResult {
  i64 k = 0;
  double max_defect = 0.0;  // max_s |e^{2 pi i k t_s} - theta_s|
};

struct kronecker_exhausted : std::runtime_error {
  i64 best_k;
  double best_defect;
  kronecker_exhausted(i64 k, double d)
      : std::runtime_error("kronecker_search: no k <= kmax reaches the tolerance "
                           "(best k = " + std::to_string(k) +
                           ", defect = " + std::to_string(d) + ")"),
        best_k(k), best_defect(d) {}
};

// Smallest k in (k0, kmax] with max_s |e^{2 pi i k t_s} - theta_s| < tol,
// by linear scan (which also certifies minimality); the winner is
// re-verified from scratch before returning.
inline KroneckerResult kronecker_search(const std::vector<double>& points,
                                        const std::vector<cplx>& targets, i64 k0, double tol,
                                        i64 kmax) {
  if (points.empty()) throw std::invalid_argument("kronecker_search: no points");
  if (points.size() != targets.size())
    throw std::invalid_argument("kronecker_search: targets size mismatch");
  if (!(tol > 0)) throw std::invalid_argument("kronecker_search: tol must be > 0");
  const size_t N = points.size();
  std::vector<double> target_turns(N);
  for (size_t s = 0; s < N; ++s) {
    double a = std::arg(targets[s]) / two_pi;
    target_turns[s] = a - std::floor(a);
  }
  auto defect_at = [&](i64 k) {
    double d = 0.0;
    for (size_t s = 0; s < N; ++s) {
      double f = std::fmod(double(k) * points[s], 1.0);
      d = std::max(d, chordal_from_turns(f - target_turns[s]));
    }
    return d;
  };
  i64 best_k = k0 + 1;
  double best = std::numeric_limits<double>::infinity();
  for (i64 k = k0 + 1; k <= kmax; ++k) {
    double d = defect_at(k);
    if (d < best) { best = d; best_k = k; }
    if (d < tol) {
      double verify = defect_at(k);
      if (!(verify < tol))
        throw internal_check_error("kronecker_search: verification failed after scan");
      return {k, verify};
    }
  }
  throw kronecker_exhausted(best_k, best);
}

}  // namespace orbitlab
