#pragma once

#include <cstdio>
#include <string>

namespace qtmlab {

// locale-independent significant-digit formatting
inline std::string format_sig(double v, int digits) {
  if (v == 0.0) v = 0.0;  // normalise -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// probabilities and report numbers: 12 significant digits
inline std::string g12(double v) { return format_sig(v, 12); }

// round-trippable doubles (machine files): 17 significant digits
inline std::string g17(double v) { return format_sig(v, 17); }

}  // namespace qtmlab
