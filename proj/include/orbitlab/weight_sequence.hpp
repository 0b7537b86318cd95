#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitlab/common.hpp"
#include "orbitlab/log_domain.hpp"

namespace orbitlab {

// A proven lower bound on a criterion statistic, attached to a weight
// family together with the reason it holds.
struct DeclaredFloor {
  double log2_floor = 0.0;
  std::string rationale;
};

// Bilateral weight magnitudes |w_n|, n in Z, with c^-1 <= |w_n| <= c.
// Everything lives in log2 domain. The central quantity is the prefix
//   S(n) = sum_{j=1..n} log2|w_j|      (n >= 0, S(0) = 0)
//   S(n) = -sum_{j=n+1..0} log2|w_j|   (n < 0)
// so that log2 beta(a,b) = S(b) - S(a-1). Indices are passed as doubles:
// the named families admit closed-form prefixes at indices like 9^59 that
// no scan could reach, while custom rules fall back to a lazily scanned,
// memoized prefix (thread-safe, idempotent fills) over an integer window.
class WeightSequence {
 public:
  WeightSequence(std::function<double(double)> log_weight, double lower, double upper,
                 std::string name)
      : impl_(std::make_shared<Impl>()) {
    if (!(lower > 0) || !(upper >= lower))
      throw std::invalid_argument("WeightSequence: bounds must satisfy 0 < lower <= upper");
    impl_->log_weight = std::move(log_weight);
    impl_->lower = lower;
    impl_->upper = upper;
    impl_->name = std::move(name);
  }

  double log_weight(double n) const { return impl_->log_weight(n); }
  double weight(double n) const { return std::exp2(log_weight(n)); }

  double lower_bound() const { return impl_->lower; }
  double upper_bound() const { return impl_->upper; }
  const std::string& name() const { return impl_->name; }
  bool symmetric() const { return impl_->symmetric; }
  bool constant_one() const { return impl_->lower == 1.0 && impl_->upper == 1.0; }

  const std::optional<DeclaredFloor>& hyper_floor() const { return impl_->hyper_floor; }
  const std::optional<DeclaredFloor>& super_floor() const { return impl_->super_floor; }

  WeightSequence& declare_symmetric() { impl_->symmetric = true; return *this; }
  WeightSequence& declare_hyper_floor(double log2_floor, std::string why) {
    impl_->hyper_floor = DeclaredFloor{log2_floor, std::move(why)};
    return *this;
  }
  WeightSequence& declare_super_floor(double log2_floor, std::string why) {
    impl_->super_floor = DeclaredFloor{log2_floor, std::move(why)};
    return *this;
  }
  WeightSequence& with_closed_prefix(std::function<double(double)> prefix) {
    impl_->closed_prefix = std::move(prefix);
    return *this;
  }
  WeightSequence& with_scan_cap(i64 cap) { impl_->scan_cap = cap; return *this; }

  bool has_closed_prefix() const { return bool(impl_->closed_prefix); }

  // S(n) as above.
  double log_prefix(double n) const {
    if (impl_->closed_prefix) return impl_->closed_prefix(n);
    return scanned_prefix(n);
  }

 private:
  struct Impl {
    std::function<double(double)> log_weight;
    std::function<double(double)> closed_prefix;  // optional
    double lower = 1.0, upper = 1.0;
    bool symmetric = false;
    std::string name;
    std::optional<DeclaredFloor> hyper_floor, super_floor;
    i64 scan_cap = 8'000'000;

    mutable std::shared_mutex mu;
    mutable std::vector<double> pos;  // pos[n] = S(n), n >= 0
    mutable std::vector<double> neg;  // neg[m] = S(-m), m >= 0
  };

  double scanned_prefix(double nd) const {
    Impl& im = *impl_;
    if (!(std::fabs(nd) <= double(im.scan_cap)) || nd != std::floor(nd))
      throw std::domain_error("WeightSequence: prefix scan beyond cap for family '" +
                              im.name + "' (closed-form prefix required)");
    i64 n = i64(nd);
    {
      std::shared_lock lk(im.mu);
      if (n >= 0 && i64(im.pos.size()) > n) return im.pos[size_t(n)];
      if (n < 0 && i64(im.neg.size()) > -n) return im.neg[size_t(-n)];
    }
    std::unique_lock lk(im.mu);
    if (im.pos.empty()) im.pos.push_back(0.0);
    if (im.neg.empty()) im.neg.push_back(0.0);
    if (n >= 0) {
      while (i64(im.pos.size()) <= n) {
        i64 j = i64(im.pos.size());
        im.pos.push_back(im.pos.back() + im.log_weight(double(j)));
      }
      return im.pos[size_t(n)];
    }
    while (i64(im.neg.size()) <= -n) {
      i64 m = i64(im.neg.size());  // computing S(-m) from S(-(m-1))
      im.neg.push_back(im.neg.back() - im.log_weight(double(-(m - 1))));
    }
    return im.neg[size_t(-n)];
  }

  std::shared_ptr<Impl> impl_;
};

// beta(a,b) = prod_{j=a..b} |w_j| in log2 domain. Requires a <= b.
inline double log2_beta(const WeightSequence& w, double a, double b) {
  if (!(a <= b)) throw std::domain_error("beta: requires a <= b");
  return w.log_prefix(b) - w.log_prefix(a - 1);
}

inline LogMag beta(const WeightSequence& w, i64 a, i64 b) {
  return LogMag(log2_beta(w, double(a), double(b)));
}

}  // namespace orbitlab
