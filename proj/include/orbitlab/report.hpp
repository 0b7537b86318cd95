#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitlab/circle/measure_io.hpp"  // fmt_full
#include "orbitlab/common.hpp"

namespace orbitlab {

// Machine-parseable text report: named sections of key = value lines,
// emitted in insertion order. Identical runs produce byte-identical output
// except for the timestamp entry, which callers add explicitly.
class Report {
 public:
  explicit Report(std::string title) : title_(std::move(title)) {}

  void section(const std::string& name) { rows_.push_back({"[" + name + "]", "", true}); }
  void kv(const std::string& key, const std::string& value) {
    rows_.push_back({key, value, false});
  }
  void kv(const std::string& key, double value) { kv(key, fmt_full(value)); }
  void kv(const std::string& key, i64 value) { kv(key, std::to_string(value)); }
  void kv(const std::string& key, bool value) { kv(key, std::string(value ? "true" : "false")); }

  std::string text() const {
    std::ostringstream os;
    os << "# " << title_ << "\n";
    for (const auto& r : rows_) {
      if (r.is_section) os << "\n" << r.key << "\n";
      else os << r.key << " = " << r.value << "\n";
    }
    return os.str();
  }

  void write(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << text();
  }

 private:
  struct Row {
    std::string key, value;
    bool is_section = false;
  };
  std::string title_;
  std::vector<Row> rows_;
};

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : os_(path) {
    if (!os_) throw std::runtime_error("cannot open " + path);
    for (size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
  }

 private:
  std::ofstream os_;
};

}  // namespace orbitlab
