#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include "eal/error.hpp"

namespace eal {

// Shortest decimal form that round-trips the exact double value.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    fail(errc::parse_error, context + ": bad number '" + std::string(text) + "'");
  return v;
}

inline long long parse_int(std::string_view text, const std::string& context) {
  long long v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    fail(errc::parse_error, context + ": bad integer '" + std::string(text) + "'");
  return v;
}

}  // namespace eal
