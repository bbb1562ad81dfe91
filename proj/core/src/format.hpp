#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace acem::detail {

/// Shortest decimal text that parses back to exactly `v`.
inline std::string shortest(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

}  // namespace acem::detail
