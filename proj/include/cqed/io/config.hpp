#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqed/io/text.hpp"

namespace cqed::io {

/// Flat `key = value` run configuration. `#` starts a comment. Keys are
/// unique; which keys are allowed is decided by the consumer.
class RunConfig {
 public:
  struct Entry {
    std::string value;
    std::string source;
    std::size_t line = 0;    // 0 for command-line overrides
    std::size_t column = 0;  // column of the value
  };

  static RunConfig parse(std::istream& in, const std::string& source) {
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      strip_cr(line);
      std::string_view body(line);
      if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
      if (trim(body).empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) throw ParseError(source, lineno, 1, "expected 'key = value'");
      const std::string key(trim(body.substr(0, eq)));
      const auto raw_value = body.substr(eq + 1);
      const std::string value(trim(raw_value));
      const auto lead = raw_value.find_first_not_of(" \t");
      const std::size_t vcol = eq + 2 + (lead == std::string_view::npos ? 0 : lead);
      if (key.empty()) throw ParseError(source, lineno, 1, "empty key");
      if (key.find_first_of(" \t") != std::string::npos) throw ParseError(source, lineno, 1, "key contains whitespace");
      if (value.empty()) throw ParseError(source, lineno, vcol, "empty value for '" + key + "'");
      if (cfg.entries_.count(key)) throw ParseError(source, lineno, 1, "duplicate key '" + key + "'");
      cfg.entries_[key] = {value, source, lineno, vcol};
    }
    return cfg;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, 0, "cannot open config file");
    return parse(in, path);
  }

  /// Command-line override; replaces any value from the file.
  void set(const std::string& key, const std::string& value) {
    entries_[key] = {value, "<command line>", 0, 0};
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  /// Reject any key that is not in `allowed`. Keys are also accepted if they
  /// start with one of `allowed_prefixes` (e.g. "init.").
  void require_known(const std::set<std::string>& allowed, const std::vector<std::string>& allowed_prefixes = {}) const {
    for (const auto& [key, e] : entries_) {
      if (allowed.count(key)) continue;
      const bool prefixed = std::any_of(allowed_prefixes.begin(), allowed_prefixes.end(),
                                        [&](const std::string& p) { return key.rfind(p, 0) == 0; });
      if (prefixed) continue;
      if (e.line == 0) throw ConfigError("unknown key '" + key + "' given on the command line");
      throw ParseError(e.source, e.line, 1, "unknown key '" + key + "'");
    }
  }

  std::optional<std::string> get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

  std::string require_string(const std::string& key) const {
    if (auto v = get_string(key)) return *v;
    throw ConfigError("missing required key '" + key + "'");
  }

  std::optional<double> get_double(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    double v;
    if (!parse_double(it->second.value, v)) {
      throw ParseError(it->second.source, it->second.line, it->second.column,
                       "'" + key + "' is not a finite number: '" + it->second.value + "'");
    }
    return v;
  }

  double get_double(const std::string& key, double fallback) const { return get_double(key).value_or(fallback); }

  double require_double(const std::string& key) const {
    if (auto v = get_double(key)) return *v;
    throw ConfigError("missing required key '" + key + "'");
  }

  std::optional<long long> get_int(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    long long v;
    if (!parse_int(it->second.value, v)) {
      throw ParseError(it->second.source, it->second.line, it->second.column,
                       "'" + key + "' is not an integer: '" + it->second.value + "'");
    }
    return v;
  }

  long long get_int(const std::string& key, long long fallback) const { return get_int(key).value_or(fallback); }

  /// Comma-separated list of numbers.
  std::optional<std::vector<double>> get_double_list(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    std::vector<double> out;
    for (const auto& f : split_fields(it->second.value, ',')) {
      double v;
      if (!parse_double(f.text, v)) {
        throw ParseError(it->second.source, it->second.line, it->second.column + f.column - 1,
                         "'" + key + "' entry is not a finite number: '" + std::string(f.text) + "'");
      }
      out.push_back(v);
    }
    return out;
  }

  /// Comma-separated list of words.
  std::vector<std::string> get_list(const std::string& key) const {
    std::vector<std::string> out;
    if (auto v = get_string(key)) {
      for (const auto& f : split_fields(*v, ',')) {
        if (!f.text.empty()) out.emplace_back(f.text);
      }
    }
    return out;
  }

  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

}  // namespace cqed::io
