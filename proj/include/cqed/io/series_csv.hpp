#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cqed/dynamics.hpp"
#include "cqed/io/text.hpp"
#include "cqed/spectra.hpp"

// Two-column CSV files. The header row names both columns and carries the
// units; a file is only accepted by the reader for its exact header.
//
//   freq_ghz,transmission     SpectrumSeries, transmission kind
//   wavelength_nm,counts      SpectrumSeries, counts kind
//   time_ns,value             DecayTrace
//
// Numbers are written with 17 significant digits.
namespace cqed::io {

inline constexpr const char* kTransmissionHeader = "freq_ghz,transmission";
inline constexpr const char* kCountsSpectrumHeader = "wavelength_nm,counts";
inline constexpr const char* kDecayHeader = "time_ns,value";
inline constexpr const char* kTuningMapHeader = "cavity_pos,line,intensity_rel";
inline constexpr const char* kG2Header = "tau_ns,g2";
inline constexpr const char* kLinewidthHeader = "power_uw,linewidth_mhz";

/// Numeric table with named columns, as read from a CSV file.
struct NumericTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row
  std::string source;

  std::string header() const {
    std::string h;
    for (std::size_t i = 0; i < columns.size(); ++i) h += (i ? "," : "") + columns[i];
    return h;
  }
  std::vector<double> column(std::size_t c) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
  }
};

/// Parse a CSV whose header is one of `accepted_headers`. Blank lines are
/// skipped; every data row must have exactly as many fields as the header.
inline NumericTable read_numeric_csv(std::istream& in, const std::string& source,
                                     const std::vector<std::string>& accepted_headers) {
  NumericTable t;
  t.source = source;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (trim(line).empty()) continue;
    if (!have_header) {
      const auto fields = split_fields(line, ',');
      std::string joined;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        joined += (i ? "," : "") + std::string(fields[i].text);
        t.columns.emplace_back(fields[i].text);
      }
      bool ok = false;
      for (const auto& h : accepted_headers) ok = ok || (h == joined);
      if (!ok) {
        std::string expected;
        for (std::size_t i = 0; i < accepted_headers.size(); ++i) expected += (i ? " | " : "") + accepted_headers[i];
        throw ParseError(source, lineno, 1, "unknown header '" + joined + "' (expected " + expected + ")");
      }
      have_header = true;
      continue;
    }
    const auto fields = split_fields(line, ',');
    if (fields.size() != t.columns.size()) {
      throw ParseError(source, lineno, 1,
                       "ragged row: " + std::to_string(fields.size()) + " fields, header has " +
                           std::to_string(t.columns.size()));
    }
    std::vector<double> row;
    for (const auto& f : fields) {
      double v;
      if (!parse_double(f.text, v)) {
        throw ParseError(source, lineno, f.column, "not a finite number: '" + std::string(f.text) + "'");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
    t.line_numbers.push_back(lineno);
  }
  if (!have_header) throw ParseError(source, lineno + 1, 1, "missing header row");
  if (t.rows.empty()) throw ParseError(source, lineno + 1, 1, "no data rows");
  return t;
}

inline SpectrumSeries read_spectrum_csv(std::istream& in, const std::string& source) {
  const auto t = read_numeric_csv(in, source, {kTransmissionHeader, kCountsSpectrumHeader});
  SpectrumSeries s;
  if (t.header() == kTransmissionHeader) {
    s.axis_kind = AxisKind::frequency_ghz;
    s.kind = SeriesKind::transmission;
  } else {
    s.axis_kind = AxisKind::wavelength_nm;
    s.kind = SeriesKind::counts;
  }
  s.axis = t.column(0);
  s.values = t.column(1);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i > 0) {
      const bool up = s.axis[1] > s.axis[0];
      if (up ? !(s.axis[i] > s.axis[i - 1]) : !(s.axis[i] < s.axis[i - 1])) {
        throw ParseError(source, t.line_numbers[i], 1, "axis not strictly monotone");
      }
    }
    if (s.values[i] < 0.0) {
      const auto col = t.columns[0].size() + 2;
      throw ParseError(source, t.line_numbers[i], col, "negative value");
    }
  }
  return s;
}

inline void write_spectrum_csv(std::ostream& out, const SpectrumSeries& s) {
  s.validate();
  const bool freq = s.axis_kind == AxisKind::frequency_ghz;
  if (freq != (s.kind == SeriesKind::transmission)) {
    throw ConfigError("write_spectrum_csv: only freq_ghz/transmission and wavelength_nm/counts are supported");
  }
  out << (freq ? kTransmissionHeader : kCountsSpectrumHeader) << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) out << format_double(s.axis[i]) << ',' << format_double(s.values[i]) << '\n';
}

/// Read a `time_ns,value` file. Times must be uniformly spaced.
inline DecayTrace read_decay_csv(std::istream& in, const std::string& source, TraceKind kind = TraceKind::counts) {
  const auto t = read_numeric_csv(in, source, {kDecayHeader});
  const auto times = t.column(0);
  DecayTrace trace;
  trace.kind = kind;
  trace.values = t.column(1);
  trace.t0 = times.front();
  if (times.size() == 1) {
    throw ParseError(source, t.line_numbers[0], 1, "a decay trace needs at least two time bins");
  }
  const double span = times.back() - times.front();
  const double dt = span / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw ParseError(source, t.line_numbers[1], 1, "time axis must increase");

  // Choose the dt (within a few ulps of the mean spacing) that regenerates
  // the written times exactly, so that write(read(file)) == file.
  auto reproduces = [&](double cand) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (trace.t0 + static_cast<double>(i) * cand != times[i]) return false;
    }
    return true;
  };
  double chosen = dt;
  double lo = dt, hi = dt;
  for (int k = 0; k < 8 && !reproduces(chosen); ++k) {
    lo = std::nextafter(lo, 0.0);
    hi = std::nextafter(hi, 2.0 * hi);
    if (reproduces(lo)) chosen = lo;
    else if (reproduces(hi)) chosen = hi;
  }
  trace.dt = chosen;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expected = trace.time(i);
    if (std::abs(times[i] - expected) > 1e-9 * std::max(std::abs(expected), dt)) {
      throw ParseError(source, t.line_numbers[i], 1, "time axis is not uniformly spaced");
    }
    if (trace.values[i] < 0.0) {
      throw ParseError(source, t.line_numbers[i], t.columns[0].size() + 2, "negative value");
    }
  }
  return trace;
}

inline void write_decay_csv(std::ostream& out, const DecayTrace& trace) {
  trace.validate();
  out << kDecayHeader << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << format_double(trace.time(i)) << ',' << format_double(trace.values[i]) << '\n';
  }
}

inline void write_tuning_map_csv(std::ostream& out, const std::vector<spectra::TuningMapRow>& rows) {
  out << kTuningMapHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.cavity_pos) << ',' << r.line << ',' << format_double(r.intensity_rel) << '\n';
  }
}

/// Read back a tuning map. Line labels must be A-D.
inline std::vector<spectra::TuningMapRow> read_tuning_map_csv(std::istream& in, const std::string& source) {
  std::vector<spectra::TuningMapRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (trim(line).empty()) continue;
    if (!have_header) {
      if (trim(line) != kTuningMapHeader) {
        throw ParseError(source, lineno, 1, std::string("unknown header (expected ") + kTuningMapHeader + ")");
      }
      have_header = true;
      continue;
    }
    const auto f = split_fields(line, ',');
    if (f.size() != 3) throw ParseError(source, lineno, 1, "ragged row");
    spectra::TuningMapRow r;
    if (!parse_double(f[0].text, r.cavity_pos)) throw ParseError(source, lineno, f[0].column, "not a finite number");
    if (f[1].text.size() != 1 || f[1].text[0] < 'A' || f[1].text[0] > 'D') {
      throw ParseError(source, lineno, f[1].column, "line label must be A, B, C or D");
    }
    r.line = std::string(f[1].text);
    if (!parse_double(f[2].text, r.intensity_rel) || r.intensity_rel < 0.0) {
      throw ParseError(source, lineno, f[2].column, "intensity must be a finite number >= 0");
    }
    rows.push_back(std::move(r));
  }
  if (!have_header) throw ParseError(source, lineno + 1, 1, "missing header row");
  if (rows.empty()) throw ParseError(source, lineno + 1, 1, "no data rows");
  return rows;
}

inline void write_g2_csv(std::ostream& out, const std::vector<CorrelationPoint>& pts) {
  out << kG2Header << '\n';
  for (const auto& p : pts) out << format_double(p.tau) << ',' << format_double(p.g2) << '\n';
}

template <class Reader>
auto read_file(const std::string& path, Reader&& reader) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  return reader(in, path);
}

}  // namespace cqed::io
