#pragma once

#include <charconv>
#include <string>

namespace pitd {

/// 17 significant digits, the same text as printf("%.17g"); round-trips a double.
inline std::string format_real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace pitd
