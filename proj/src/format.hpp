#pragma once

#include <cstdio>
#include <string>

namespace consim::detail {

// Shortest round-trippable decimal form; used by every CSV writer so that
// repeated runs of the same binary emit identical bytes.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace consim::detail
