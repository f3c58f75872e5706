/*
 * Copyright 2026 The dkr authors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */

#ifndef DKR_TEXT_UTIL_HPP
#define DKR_TEXT_UTIL_HPP

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dkr::detail {

// Shortest round-trip decimal encoding, locale independent.
inline std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::runtime_error("bad number: " + std::string(text));
  return value;
}

}  // namespace dkr::detail

#endif  // DKR_TEXT_UTIL_HPP
