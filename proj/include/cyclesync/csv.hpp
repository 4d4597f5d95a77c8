#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "cyclesync/error.hpp"

namespace cyclesync::csv {

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& cell, const std::string& where) {
  std::string s = strip(cell);
  require(!s.empty(), errc::missing_value, "empty cell at " + where);
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  require(end == begin + s.size(), errc::missing_value,
          "non-numeric cell '" + s + "' at " + where);
  require(std::isfinite(v), errc::missing_value, "non-finite cell at " + where);
  return v;
}

// Pinned output format: 17 significant digits, enough to round-trip a double.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace cyclesync::csv
