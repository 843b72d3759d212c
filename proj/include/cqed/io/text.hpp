#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cqed/error.hpp"

namespace cqed::io {

/// 17 significant digits: enough for every double to round-trip exactly.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Strict decimal parse: the whole token must be consumed and finite.
inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

inline bool parse_int(std::string_view s, long long& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Field {
  std::string_view text;
  std::size_t column;  // 1-based character column of the field start
};

/// Split on `sep`, trimming blanks around each field.
inline std::vector<Field> split_fields(std::string_view line, char sep) {
  std::vector<Field> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    const auto raw = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    const auto lead = raw.find_first_not_of(" \t");
    out.push_back({trim(raw), start + 1 + (lead == std::string_view::npos ? 0 : lead)});
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Split on runs of whitespace.
inline std::vector<Field> split_whitespace(std::string_view line) {
  std::vector<Field> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t b = i;
    while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    out.push_back({line.substr(b, i - b), b + 1});
  }
  return out;
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace cqed::io
