#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hn/error.hpp"

namespace hn {

// Shortest exact text form for doubles (round-trips via strtod).
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Energies and other measured reals: 15 significant digits, plain decimal.
inline std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

// Comma-separated, LF line endings, header row first. Fields must not
// contain commas (paths within cells use spaces).
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw ParameterError("cannot open for writing: " + path);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace hn
