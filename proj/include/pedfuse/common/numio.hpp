#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "pedfuse/common/errors.hpp"

// Locale-independent number <-> text conversions for the text file formats.
// Shortest round-trip formatting guarantees write -> read -> write stability.
namespace pedfuse::numio {

inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

inline std::string format_fixed(double v, int precision) {
  char buf[512];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
    throw DataError("could not parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

inline std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
    throw DataError("could not parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace pedfuse::numio
