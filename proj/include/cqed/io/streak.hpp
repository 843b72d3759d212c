#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "cqed/dynamics.hpp"
#include "cqed/io/text.hpp"

namespace cqed {

/// Time x wavelength count image. Row r is time t0 + r dt, column c is
/// wavelength lambda0 + c dlambda (bin centres).
struct StreakImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double t0_ns = 0.0;
  double dt_ns = 0.0;
  double lambda0_nm = 0.0;
  double dlambda_nm = 0.0;
  std::vector<double> counts;  // row-major, rows * cols

  double at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return counts[r * cols + c]; }
  double wavelength(std::size_t c) const { return lambda0_nm + static_cast<double>(c) * dlambda_nm; }

  double total() const {
    double s = 0.0;
    for (double v : counts) s += v;
    return s;
  }

  void validate() const {
    if (rows == 0 || cols == 0) throw ConfigError("StreakImage: empty image");
    if (!(dt_ns > 0.0)) throw ConfigError("StreakImage: dt must be > 0");
    if (dlambda_nm == 0.0 || !std::isfinite(dlambda_nm)) throw ConfigError("StreakImage: dlambda must be nonzero");
    if (counts.size() != rows * cols) throw ConfigError("StreakImage: counts size mismatch");
    for (double v : counts) {
      if (!std::isfinite(v) || v < 0.0) throw ConfigError("StreakImage: counts must be finite and >= 0");
    }
  }
};

namespace io {

/// Header line followed by `rows` lines of `cols` whitespace-separated counts:
///   # rows=R cols=C t0_ns=T dt_ns=D lambda0_nm=L dlambda_nm=W
inline StreakImage read_streak(std::istream& in, const std::string& source) {
  StreakImage img;
  std::string line;
  std::size_t lineno = 0;

  // Header.
  if (!std::getline(in, line)) throw ParseError(source, 1, 1, "empty file, expected streak header");
  ++lineno;
  strip_cr(line);
  auto fields = split_whitespace(line);
  if (fields.empty() || fields[0].text != "#") {
    throw ParseError(source, lineno, 1, "header must start with '# rows=...'");
  }
  std::map<std::string, std::pair<std::string_view, std::size_t>> kv;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const auto eq = fields[i].text.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, lineno, fields[i].column, "expected key=value");
    const std::string key(fields[i].text.substr(0, eq));
    if (kv.count(key)) throw ParseError(source, lineno, fields[i].column, "duplicate header key '" + key + "'");
    kv[key] = {fields[i].text.substr(eq + 1), fields[i].column + eq + 1};
  }
  static const std::vector<std::string> required{"rows", "cols", "t0_ns", "dt_ns", "lambda0_nm", "dlambda_nm"};
  for (const auto& [key, val] : kv) {
    if (std::find(required.begin(), required.end(), key) == required.end()) {
      throw ParseError(source, lineno, val.second, "unknown header key '" + key + "'");
    }
  }
  for (const auto& key : required) {
    if (!kv.count(key)) throw ParseError(source, lineno, 1, "header missing '" + key + "'");
  }
  auto header_int = [&](const std::string& key) {
    long long v;
    if (!parse_int(kv[key].first, v) || v <= 0) {
      throw ParseError(source, lineno, kv[key].second, "'" + key + "' must be a positive integer");
    }
    return static_cast<std::size_t>(v);
  };
  auto header_double = [&](const std::string& key) {
    double v;
    if (!parse_double(kv[key].first, v)) throw ParseError(source, lineno, kv[key].second, "'" + key + "' is not a number");
    return v;
  };
  img.rows = header_int("rows");
  img.cols = header_int("cols");
  img.t0_ns = header_double("t0_ns");
  img.dt_ns = header_double("dt_ns");
  img.lambda0_nm = header_double("lambda0_nm");
  img.dlambda_nm = header_double("dlambda_nm");
  if (!(img.dt_ns > 0.0)) throw ParseError(source, lineno, kv["dt_ns"].second, "dt_ns must be > 0");
  if (img.dlambda_nm == 0.0) throw ParseError(source, lineno, kv["dlambda_nm"].second, "dlambda_nm must be nonzero");

  img.counts.reserve(img.rows * img.cols);
  std::size_t got = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    const auto cells = split_whitespace(line);
    if (cells.empty()) continue;
    if (got == img.rows) {
      throw ParseError(source, lineno, 1, "more data rows than header rows=" + std::to_string(img.rows));
    }
    if (cells.size() != img.cols) {
      throw ParseError(source, lineno, 1,
                       "row has " + std::to_string(cells.size()) + " values, header cols=" + std::to_string(img.cols));
    }
    for (const auto& c : cells) {
      double v;
      if (!parse_double(c.text, v)) throw ParseError(source, lineno, c.column, "not a finite number: '" + std::string(c.text) + "'");
      if (v < 0.0) throw ParseError(source, lineno, c.column, "negative count");
      img.counts.push_back(v);
    }
    ++got;
  }
  if (got != img.rows) {
    throw ParseError(source, lineno + 1, 1,
                     "expected " + std::to_string(img.rows) + " data rows, found " + std::to_string(got));
  }
  return img;
}

inline void write_streak(std::ostream& out, const StreakImage& img) {
  img.validate();
  out << "# rows=" << img.rows << " cols=" << img.cols << " t0_ns=" << format_double(img.t0_ns)
      << " dt_ns=" << format_double(img.dt_ns) << " lambda0_nm=" << format_double(img.lambda0_nm)
      << " dlambda_nm=" << format_double(img.dlambda_nm) << '\n';
  for (std::size_t r = 0; r < img.rows; ++r) {
    for (std::size_t c = 0; c < img.cols; ++c) out << (c ? " " : "") << format_double(img.at(r, c));
    out << '\n';
  }
}

/// Sum each time row over the columns whose wavelength lies in
/// [lambda_min, lambda_max].
inline DecayTrace bin_streak_region(const StreakImage& img, double lambda_min, double lambda_max) {
  img.validate();
  if (!(lambda_min <= lambda_max)) throw ConfigError("bin_streak_region: lambda_min must be <= lambda_max");
  const double first = img.wavelength(0), last = img.wavelength(img.cols - 1);
  const double span_lo = std::min(first, last), span_hi = std::max(first, last);
  if (lambda_max < span_lo || lambda_min > span_hi) {
    throw ConfigError("bin_streak_region: window does not overlap the image wavelength span");
  }
  std::vector<std::size_t> selected;
  for (std::size_t c = 0; c < img.cols; ++c) {
    const double l = img.wavelength(c);
    if (l >= lambda_min && l <= lambda_max) selected.push_back(c);
  }
  if (selected.empty()) throw ConfigError("bin_streak_region: window selects no wavelength columns");

  DecayTrace trace;
  trace.t0 = img.t0_ns;
  trace.dt = img.dt_ns;
  trace.kind = TraceKind::counts;
  trace.values.assign(img.rows, 0.0);
  for (std::size_t r = 0; r < img.rows; ++r) {
    for (std::size_t c : selected) trace.values[r] += img.at(r, c);
  }
  return trace;
}

}  // namespace io
}  // namespace cqed
