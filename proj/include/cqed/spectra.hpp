#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "cqed/derive.hpp"
#include "cqed/error.hpp"
#include "cqed/qdyn/system.hpp"
#include "cqed/units.hpp"

namespace cqed {

enum class AxisKind { frequency_ghz, wavelength_nm };

enum class SeriesKind {
  transmission,  // freq_ghz,transmission
  counts,        // wavelength_nm,counts
};

/// A sampled curve: strictly monotone axis with one value per point.
struct SpectrumSeries {
  AxisKind axis_kind = AxisKind::frequency_ghz;
  SeriesKind kind = SeriesKind::transmission;
  std::vector<double> axis;
  std::vector<double> values;
  std::map<std::string, std::string> meta;

  std::size_t size() const { return axis.size(); }

  void validate() const {
    if (axis.size() != values.size()) throw ConfigError("SpectrumSeries: axis/value length mismatch");
    if (axis.empty()) throw ConfigError("SpectrumSeries: empty series");
    if (axis.size() > 1) {
      const bool up = axis[1] > axis[0];
      for (std::size_t i = 1; i < axis.size(); ++i) {
        if (up ? !(axis[i] > axis[i - 1]) : !(axis[i] < axis[i - 1])) {
          throw ConfigError("SpectrumSeries: axis not strictly monotone at index " + std::to_string(i));
        }
      }
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i]) || values[i] < 0.0) {
        throw ConfigError("SpectrumSeries: value at index " + std::to_string(i) + " must be finite and >= 0");
      }
    }
  }
};

namespace spectra {

namespace detail {

inline void check_grid(const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ConfigError("probe grid: non-finite entry");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("probe grid: must be strictly increasing");
  }
}

}  // namespace detail

/// Complex drop-filter transmission amplitude at probe frequency `nu` (GHz).
/// Cavity at delta_c, emitter at delta_a on the same axis.
inline std::complex<double> dit_amplitude(const SystemParams& p, double nu) {
  using C = std::complex<double>;
  const C emitter = C(0.0, p.delta_a - nu) + 0.5 * p.gamma_total();
  if (p.g != 0.0 && emitter == C(0.0)) return C(1.0);  // lossless emitter on resonance: full transparency
  const C load = p.g == 0.0 ? C(0.0) : p.g * p.g / emitter;
  const C cavity = C(0.0, p.delta_c - nu);
  return (cavity + 0.5 * p.kappa_loss() + load) / (cavity + 0.5 * p.kappa + load);
}

inline double dit_transmission_at(const SystemParams& p, double nu) {
  return std::norm(dit_amplitude(p, nu));
}

/// |t(nu)|^2 on the caller's probe grid.
inline SpectrumSeries dit_transmission(const SystemParams& params, const std::vector<double>& probe_grid_ghz) {
  params.validate();
  if (!(params.kappa > 0.0)) throw ConfigError("dit_transmission: kappa must be > 0");
  detail::check_grid(probe_grid_ghz);
  SpectrumSeries s;
  s.axis = probe_grid_ghz;
  s.values.reserve(probe_grid_ghz.size());
  for (double nu : probe_grid_ghz) s.values.push_back(dit_transmission_at(params, nu));
  s.meta["model"] = "dit";
  return s;
}

/// Transmission with the emitter removed (g = 0).
inline SpectrumSeries bare_cavity_transmission(SystemParams params, const std::vector<double>& probe_grid_ghz) {
  params.g = 0.0;
  SpectrumSeries s = dit_transmission(params, probe_grid_ghz);
  s.meta["model"] = "bare_cavity";
  return s;
}

/// Closed-form double-resonance peak (C / (1 + C))^2 for kappa_loss = 0.
inline double dit_peak_transmission(double g, double kappa, double gamma) {
  const double c = 4.0 * g * g / (kappa * gamma);
  const double t = c / (1.0 + c);
  return t * t;
}

struct TuningMapRow {
  double cavity_pos;  // caller's axis units
  std::string line;
  double intensity_rel;
};

/// Relative PL intensity of each line as the cavity sweeps across the lines:
///   1 + f0_X / (1 + (2 (nu_cav - nu_X) / kappa)^2).
/// Far-detuned baseline is exactly 1. `cavity_axis` selects whether
/// `cavity_center_grid` is in GHz or nm; line frequencies are always GHz.
inline std::vector<TuningMapRow> pl_tuning_map(const derive::SiVSpec& siv, double kappa,
                                               const std::array<double, 4>& f0_per_line,
                                               const std::vector<double>& cavity_center_grid,
                                               AxisKind cavity_axis = AxisKind::frequency_ghz) {
  siv.validate();
  if (!(kappa > 0.0)) throw ConfigError("pl_tuning_map: kappa must be > 0");
  for (double f : f0_per_line) {
    if (!(f >= 0.0)) throw ConfigError("pl_tuning_map: f0 must be >= 0");
  }
  if (cavity_center_grid.size() > 1) {
    const bool up = cavity_center_grid[1] > cavity_center_grid[0];
    for (std::size_t i = 1; i < cavity_center_grid.size(); ++i) {
      if (up ? !(cavity_center_grid[i] > cavity_center_grid[i - 1])
             : !(cavity_center_grid[i] < cavity_center_grid[i - 1])) {
        throw ConfigError("pl_tuning_map: cavity grid not strictly monotone");
      }
    }
  }
  std::vector<TuningMapRow> rows;
  rows.reserve(cavity_center_grid.size() * 4);
  for (double pos : cavity_center_grid) {
    const double nu_cav = cavity_axis == AxisKind::frequency_ghz ? pos : units::wavelength_nm_to_ghz(pos);
    for (std::size_t k = 0; k < 4; ++k) {
      const double detuning = nu_cav - siv.transition_freqs_ghz[k];
      rows.push_back({pos, derive::SiVSpec::kLabels[k],
                      1.0 + derive::purcell_lorentzian(f0_per_line[k], detuning, kappa)});
    }
  }
  return rows;
}

/// f0 that makes the resonant/far-detuned intensity ratio equal `ratio`.
inline double f0_for_peak_ratio(double ratio) {
  if (!(ratio >= 1.0)) throw ConfigError("f0_for_peak_ratio: ratio must be >= 1");
  return ratio - 1.0;
}

}  // namespace spectra
}  // namespace cqed
