#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <type_traits>

namespace flipmix::csv {

/// Shortest-round-trip-safe decimal form ("%.17g").
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T>
std::string num(T x)
  requires std::is_integral_v<T>
{
  return std::to_string(x);
}

/// Writes fields joined by commas and a trailing newline.
template <typename... Fields>
void row(std::ostream& out, const Fields&... fields) {
  bool first = true;
  ((out << (first ? "" : ",") << fields, first = false), ...);
  out << '\n';
}

}  // namespace flipmix::csv
