#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace tflow::detail {

// Shortest round-trip decimal form of a double (to_chars general format):
// reloading the text reproduces the bits.
inline std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

}  // namespace tflow::detail
