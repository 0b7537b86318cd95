#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "orbitlab/circle/arc.hpp"
#include "orbitlab/circle/trig_poly.hpp"
#include "orbitlab/common.hpp"

namespace orbitlab {

// Absolutely continuous measure whose density is a trigonometric polynomial
// rho(t) = sum_q c_q e^{2 pi i q t} (hermitian lines, c_0 = total mass).
// Fourier coefficients, arc masses and pairings are all exact finite sums,
// which is what keeps the late construction stages computable: their
// partition counts m reach 10^14 and step densities could never be stored.
class SpectralDensity {
 public:
  SpectralDensity() = default;

  static SpectralDensity lebesgue() {
    SpectralDensity d;
    d.lines_[0] = 1.0;
    return d;
  }

  const std::map<i64, cplx>& lines() const { return lines_; }
  size_t line_count() const { return lines_.size(); }

  cplx line(i64 q) const {
    auto it = lines_.find(q);
    return it == lines_.end() ? cplx{0, 0} : it->second;
  }
  void add_line(i64 q, cplx c) {
    cplx v = line(q) + c;
    if (std::abs(v) == 0.0) lines_.erase(q);
    else lines_[q] = v;
  }

  i64 max_freq() const {
    i64 m = 0;
    for (const auto& [q, c] : lines_) m = std::max(m, q < 0 ? -q : q);
    return m;
  }
  double line_abs_sum_offcenter() const {
    double s = 0.0;
    for (const auto& [q, c] : lines_)
      if (q != 0) s += std::abs(c);
    return s;
  }

  // mu^(k) = integral z^k rho dt = c_{-k}
  cplx fourier(i64 k) const { return line(-k); }
  double total_mass() const { return std::real(line(0)); }

  cplx pair(const TrigPoly& f) const {
    cplx s = 0.0;
    for (const auto& [k, c] : f.coefs()) s += c * fourier(k);
    return s;
  }

  double eval(double t) const {
    cplx s = 0.0;
    for (const auto& [q, c] : lines_) s += c * std::polar(1.0, two_pi * double(q) * t);
    return std::real(s);
  }

  // integral of e^{2 pi i q t} over I_j = [(j-1)/m, j/m), exact phases
  static cplx arc_unit_integral(i64 q, u128 j, u128 m) {
    if (q == 0) return cplx{1.0 / double(m), 0.0};
    cplx step = unit_phase_u128(q, 1, m) - cplx{1.0, 0.0};
    if (std::abs(step) == 0.0) return cplx{0.0, 0.0};  // q a multiple of m
    cplx base = unit_phase_u128(q, j - 1, m);
    return base * step / cplx{0.0, two_pi * double(q)};
  }

  double arc_mass(u128 j, u128 m) const {
    cplx s = 0.0;
    for (const auto& [q, c] : lines_) s += c * arc_unit_integral(q, j, m);
    return std::real(s);
  }

  // integral of e^{2 pi i k t} rho over I_j (restricted Fourier coefficient)
  cplx arc_fourier(u128 j, u128 m, i64 k) const {
    cplx s = 0.0;
    for (const auto& [q, c] : lines_) s += c * arc_unit_integral(q + k, j, m);
    return s;
  }

  // integral of f rho over I_j
  cplx arc_pair(u128 j, u128 m, const TrigPoly& f) const {
    cplx s = 0.0;
    for (const auto& [k, fc] : f.coefs()) s += fc * arc_fourier(j, m, k);
    return s;
  }

  // rho *= (1 + conj(f)(z) e^{2 pi i freq t} + f(z) e^{-2 pi i freq t});
  // the factor is 1 + Re(2 conj(f) e^{2 pi i freq t}), nonnegative whenever
  // ||f||_inf <= 1/2.
  void modulate(const TrigPoly& f, i64 freq) {
    std::map<i64, cplx> out = lines_;
    for (const auto& [q, c] : lines_) {
      for (const auto& [d, fd] : f.coefs()) {
        auto add = [&out](i64 key, cplx v) {
          cplx nv = (out.count(key) ? out[key] : cplx{0, 0}) + v;
          if (std::abs(nv) == 0.0) out.erase(key);
          else out[key] = nv;
        };
        add(q + freq - d, c * std::conj(fd));
        add(q - freq + d, c * fd);
      }
    }
    lines_ = std::move(out);
  }

  void check_hermitian(double tol = 1e-9) const {
    for (const auto& [q, c] : lines_)
      if (std::abs(c - std::conj(line(-q))) > tol)
        throw internal_check_error("spectral density lost hermitian symmetry");
  }

 private:
  std::map<i64, cplx> lines_;
};

}  // namespace orbitlab
