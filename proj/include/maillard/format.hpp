#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace maillard {

// All file outputs print reals with 12 significant digits.
inline constexpr int kOutputDigits = 12;

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", kOutputDigits, x);
  return buf;
}

// Rounds to the value `format_real` would print, so JSON emitters that use a
// shortest round-trip representation print the same digits.
inline double round_output(double x) { return std::strtod(format_real(x).c_str(), nullptr); }

}  // namespace maillard
