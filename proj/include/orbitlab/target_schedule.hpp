#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitlab/common.hpp"
#include "orbitlab/zvector.hpp"

namespace orbitlab {

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline i64 next_prime_above(i64 n) {
  i64 p = n + 1;
  while (!is_prime(p)) ++p;
  return p;
}

// kappa: Z>=0 -> finitely supported vectors. Target j recurs on the
// arithmetic progression A_j = { P_{j-1} (t p_j + 1) : t >= 1 } with
// P_{j-1} = p_0 ... p_{j-1} and distinct primes p_j chosen above the first
// index where the size cap a(.) admits the target. The progressions are
// disjoint by divisibility and each has density 1 / (P_{j-1} p_j); kappa
// is zero off their union, so gamma(kappa(m)) <= a_m and the p-norm of
// kappa(m) is <= a_m everywhere.
class TargetSchedule {
 public:
  struct Entry {
    ZVector target;
    double need = 0.0;   // max(gamma, p-norm)
    i64 first_index = 0; // m_j: a(m) >= need from here on
    i64 prime = 0;
    i64 prefix_product = 1;  // P_{j-1}
    double density = 0.0;
  };

  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<size_t>& unassigned() const { return unassigned_; }

  std::optional<size_t> target_index_at(i64 m) const {
    if (m < 2) return std::nullopt;
    for (size_t j = 0; j < entries_.size(); ++j) {
      const Entry& e = entries_[j];
      if (m % e.prefix_product != 0) continue;
      i64 q = m / e.prefix_product;
      if (q > 1 && q % e.prime == 1) return j;
    }
    return std::nullopt;
  }

  ZVector value_at(i64 m) const {
    auto j = target_index_at(m);
    return j ? entries_[*j].target : ZVector{};
  }

  friend TargetSchedule build_target_schedule(const std::vector<ZVector>& targets,
                                              const std::function<double(i64)>& a, double p,
                                              i64 probe_cap);

 private:
  std::vector<Entry> entries_;
  std::vector<size_t> unassigned_;
};

inline TargetSchedule build_target_schedule(const std::vector<ZVector>& targets,
                                            const std::function<double(i64)>& a, double p,
                                            i64 probe_cap = 1 << 20) {
  TargetSchedule s;
  i64 prev_prime = 1;
  i64 prefix = 1;
  for (size_t j = 0; j < targets.size(); ++j) {
    const ZVector& x = targets[j];
    if (x.empty()) throw std::invalid_argument("target schedule: targets must be nonzero");
    for (size_t i = 0; i < j; ++i)
      if (!supports_disjoint(targets[i], x) && sub(targets[i], x).empty())
        throw std::invalid_argument("target schedule: targets must be pairwise distinct");
    double need = std::max(double(x.gamma()), pnorm(x, p).linear());
    i64 m = -1;
    double prev_a = -std::numeric_limits<double>::infinity();
    for (i64 cand = 0; cand <= probe_cap; ++cand) {
      double av = a(cand);
      if (av < prev_a - 1e-12)
        throw std::invalid_argument("target schedule: a must be non-decreasing");
      prev_a = av;
      if (av >= need) { m = cand; break; }
    }
    if (m < 0) {
      s.unassigned_.push_back(j);
      continue;
    }
    i64 prime = next_prime_above(std::max(m, prev_prime));
    TargetSchedule::Entry e;
    e.target = x;
    e.need = need;
    e.first_index = m;
    e.prime = prime;
    e.prefix_product = prefix;
    e.density = 1.0 / (double(prefix) * double(prime));
    s.entries_.push_back(std::move(e));
    if (prefix > INT64_MAX / prime)
      throw std::overflow_error("target schedule: prime prefix product overflow");
    prefix *= prime;
    prev_prime = prime;
  }
  return s;
}

}  // namespace orbitlab
