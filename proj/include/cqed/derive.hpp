#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "cqed/error.hpp"
#include "cqed/measured.hpp"
#include "cqed/units.hpp"

// Closed-form cavity-QED figures of merit with first-order (linearized)
// uncertainty propagation. Inputs are treated as uncorrelated.
namespace cqed::derive {

/// Lifetimes of one emitter with the cavity on and off resonance.
struct EmitterRecord {
  std::string id;
  Measured tau_on;   // ns
  Measured tau_off;  // ns
  double intensity_ratio = 0.0;  // I_on / I_off, stored only

  void validate() const {
    if (!(tau_on.value > 0.0) || !(tau_off.value > 0.0)) {
      throw ConfigError("EmitterRecord " + id + ": lifetimes must be > 0");
    }
  }
};

struct CavityRecord {
  double lambda_c_nm = 0.0;
  double q_factor = 0.0;
  double mode_volume_norm = 0.0;  // V in units of (lambda / n)^3
  double refractive_index = 0.0;

  void validate() const {
    if (!(lambda_c_nm > 0 && q_factor > 0 && mode_volume_norm > 0 && refractive_index > 0)) {
      throw ConfigError("CavityRecord: all fields must be > 0");
    }
  }
};

/// Four zero-phonon lines A-D of the emitter.
struct SiVSpec {
  std::array<double, 4> transition_freqs_ghz{};
  double ground_splitting_ghz = 0.0;
  double branching_xi_max = 1.0;
  std::array<double, 4> linewidths_ghz{};

  static constexpr std::array<const char*, 4> kLabels{"A", "B", "C", "D"};

  void validate() const {
    if (!(branching_xi_max > 0.0 && branching_xi_max <= 1.0)) {
      throw ConfigError("SiVSpec: branching_xi_max must lie in (0, 1]");
    }
    if (!(ground_splitting_ghz >= 0.0)) throw ConfigError("SiVSpec: ground_splitting must be >= 0");
    for (double w : linewidths_ghz) {
      if (!(w >= 0.0)) throw ConfigError("SiVSpec: linewidths must be >= 0");
    }
  }
};

struct BetaFactor {
  Measured beta;
  /// tau_on > tau_off: the cavity made the emitter slower, beta < 0.
  bool no_enhancement = false;
};

/// beta = 1 - tau_on / tau_off.
inline BetaFactor beta_factor(const Measured& tau_on, const Measured& tau_off) {
  if (!(tau_on.value > 0.0) || !(tau_off.value > 0.0)) {
    throw ConfigError("beta_factor: lifetimes must be > 0");
  }
  const double r = tau_on.value / tau_off.value;
  const double sigma = r * std::hypot(tau_on.sigma / tau_on.value, tau_off.sigma / tau_off.value);
  return {Measured(1.0 - r, sigma), tau_on.value > tau_off.value};
}

/// tau_off / tau_on.
inline Measured lifetime_ratio(const Measured& tau_on, const Measured& tau_off) {
  if (!(tau_on.value > 0.0) || !(tau_off.value > 0.0)) {
    throw ConfigError("lifetime_ratio: lifetimes must be > 0");
  }
  const double r = tau_off.value / tau_on.value;
  return Measured(r, r * std::hypot(tau_on.sigma / tau_on.value, tau_off.sigma / tau_off.value));
}

/// C = 4 g^2 / (kappa gamma). Any common frequency unit.
inline Measured cooperativity(const Measured& g, const Measured& kappa, const Measured& gamma) {
  if (!(g.value >= 0.0) || !(kappa.value > 0.0) || !(gamma.value > 0.0)) {
    throw ConfigError("cooperativity: need g >= 0, kappa > 0, gamma > 0");
  }
  const double c = 4.0 * g.value * g.value / (kappa.value * gamma.value);
  const double dg = 8.0 * g.value / (kappa.value * gamma.value) * g.sigma;
  const double dk = c / kappa.value * kappa.sigma;
  const double dy = c / gamma.value * gamma.sigma;
  return Measured(c, std::sqrt(dg * dg + dk * dk + dy * dy));
}

/// Lower bound on the Purcell factor of the enhanced line given the lifetime
/// reduction R = tau_off / tau_on and the upper bound xi_max on that line's
/// off-resonance branching ratio:
///   F_min = (R - 1) / xi_max,  sigma_F = sigma_R / xi_max.
inline Measured min_purcell(const Measured& lifetime_ratio, double xi_max) {
  if (!(xi_max > 0.0 && xi_max <= 1.0)) throw ConfigError("min_purcell: xi_max must lie in (0, 1]");
  if (lifetime_ratio.value < 1.0) {
    throw NoEnhancementError("min_purcell: lifetime ratio " + std::to_string(lifetime_ratio.value) +
                             " < 1, no enhancement");
  }
  return Measured((lifetime_ratio.value - 1.0) / xi_max, lifetime_ratio.sigma / xi_max);
}

/// Ideal Purcell factor (3 / 4 pi^2) Q / V with V in (lambda / n)^3.
inline double theoretical_purcell(const CavityRecord& cav) {
  if (!(cav.q_factor > 0.0 && cav.mode_volume_norm > 0.0)) {
    throw ConfigError("theoretical_purcell: Q and V must be > 0");
  }
  return 3.0 / (4.0 * units::pi * units::pi) * cav.q_factor / cav.mode_volume_norm;
}

/// Purcell factor at emitter-cavity detuning `detuning` for a cavity of FWHM `kappa`.
inline double purcell_lorentzian(double f0, double detuning, double kappa) {
  if (!(kappa > 0.0)) throw ConfigError("purcell_lorentzian: kappa must be > 0");
  const double x = 2.0 * detuning / kappa;
  return f0 / (1.0 + x * x);
}

/// Transform-limited FWHM 1 / (2 pi tau), tau in ns, result in MHz.
inline double fourier_limited_linewidth_mhz(double tau_ns) {
  if (!(tau_ns > 0.0)) throw ConfigError("fourier_limited_linewidth: tau must be > 0");
  return 1e3 / (units::two_pi * tau_ns);
}

enum class QKappaDirection { kappa_to_q, q_to_kappa };

/// Q = f / kappa and kappa = f / Q with f = c / lambda. kappa in GHz.
inline Measured q_kappa_convert(const Measured& value, double lambda_nm, QKappaDirection direction) {
  if (!(value.value > 0.0)) throw ConfigError("q_kappa_convert: value must be > 0");
  if (!(lambda_nm > 0.0)) throw ConfigError("q_kappa_convert: wavelength must be > 0");
  const double f = units::wavelength_nm_to_ghz(lambda_nm);
  const double out = f / value.value;
  return Measured(out, out * value.sigma / value.value,
                  direction == QKappaDirection::kappa_to_q ? "" : "GHz");
}

/// Photon emission rate into the cavity beta / tau_on, expressed as rate / 2pi in GHz.
inline double emission_rate_into_cavity(double beta, double tau_on_ns) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("emission_rate_into_cavity: beta must lie in [0, 1]");
  if (!(tau_on_ns > 0.0)) throw ConfigError("emission_rate_into_cavity: tau_on must be > 0");
  return beta / tau_on_ns / units::two_pi;
}

struct StrongCouplingOutlook {
  /// A single emitter already splits the normal modes.
  bool is_strong = false;
  /// Smallest N for which g sqrt(N) exceeds the threshold.
  int n_emitters_needed = 1;
  /// (kappa - gamma) / 4, GHz.
  double threshold_ghz = 0.0;
};

/// Normal-mode splitting of the coupled system becomes real once the
/// collective coupling g sqrt(N) exceeds (kappa - gamma) / 4.
inline StrongCouplingOutlook strong_coupling_threshold(double g, double kappa, double gamma) {
  if (!(g > 0.0 && kappa > 0.0 && gamma > 0.0)) {
    throw ConfigError("strong_coupling_threshold: g, kappa, gamma must be > 0");
  }
  if (kappa <= gamma) {
    throw UnsupportedRegimeError("strong_coupling_threshold: requires kappa > gamma");
  }
  StrongCouplingOutlook out;
  out.threshold_ghz = (kappa - gamma) / 4.0;
  const double ratio = out.threshold_ghz / g;
  auto n = static_cast<long long>(std::floor(ratio * ratio));
  if (n < 1) n = 1;
  while (g * std::sqrt(static_cast<double>(n)) <= out.threshold_ghz) ++n;
  while (n > 1 && g * std::sqrt(static_cast<double>(n - 1)) > out.threshold_ghz) --n;
  out.n_emitters_needed = static_cast<int>(n);
  out.is_strong = g > out.threshold_ghz;
  return out;
}

}  // namespace cqed::derive
