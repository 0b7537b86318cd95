#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "orbitlab/circle/measure.hpp"
#include "orbitlab/circle/spectral.hpp"

namespace orbitlab {

inline std::string fmt_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using StoredMeasure = std::variant<CircleMeasure, SpectralDensity>;

// Text format, one record per line:
//   atom <t> <mass>
//   segment <lo> <hi> <height>
//   mode <freq> <re> <im>        (spectral density line)
// A file holds either atom/segment records or mode records, not both.
inline void save_measure(std::ostream& os, const StoredMeasure& m) {
  os << "# orbitlab measure v1\n";
  if (std::holds_alternative<CircleMeasure>(m)) {
    const CircleMeasure& mu = std::get<CircleMeasure>(m);
    for (const auto& a : mu.atoms())
      os << "atom " << fmt_full(a.t) << " " << fmt_full(a.mass) << "\n";
    for (const auto& s : mu.segments())
      os << "segment " << fmt_full(s.lo) << " " << fmt_full(s.hi) << " "
         << fmt_full(s.height) << "\n";
  } else {
    const SpectralDensity& d = std::get<SpectralDensity>(m);
    for (const auto& [q, c] : d.lines())
      os << "mode " << q << " " << fmt_full(c.real()) << " " << fmt_full(c.imag()) << "\n";
  }
}

inline void save_measure_file(const std::string& path, const StoredMeasure& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  save_measure(os, m);
}

inline StoredMeasure load_measure(std::istream& is) {
  CircleMeasure mu;
  SpectralDensity sd;
  bool saw_pc = false, saw_modes = false;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "atom") {
      double t, mass;
      ls >> t >> mass;
      if (!ls) throw std::runtime_error("bad atom record: " + line);
      mu.add_atom(t, mass);
      saw_pc = true;
    } else if (kind == "segment") {
      double lo, hi, h;
      ls >> lo >> hi >> h;
      if (!ls) throw std::runtime_error("bad segment record: " + line);
      mu.add_segment(lo, hi, h);
      saw_pc = true;
    } else if (kind == "mode") {
      long long q;
      double re, im;
      ls >> q >> re >> im;
      if (!ls) throw std::runtime_error("bad mode record: " + line);
      sd.add_line(q, {re, im});
      saw_modes = true;
    } else {
      throw std::runtime_error("unknown measure record: " + line);
    }
  }
  if (saw_pc && saw_modes)
    throw std::runtime_error("measure file mixes atom/segment and mode records");
  if (saw_modes) return sd;
  return mu;
}

inline StoredMeasure load_measure_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return load_measure(is);
}

inline cplx stored_fourier(const StoredMeasure& m, i64 k) {
  if (std::holds_alternative<CircleMeasure>(m)) return std::get<CircleMeasure>(m).fourier(k);
  return std::get<SpectralDensity>(m).fourier(k);
}

}  // namespace orbitlab
