#pragma once

#include <numbers>

// Rates and frequencies cross the public API as ordinary frequencies
// (nu = omega / 2pi) in GHz; times are in ns. Internally the engine works in
// angular units, rad/ns, so every user-facing rate is multiplied by 2pi once.
namespace cqed::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Speed of light, exact SI value.
inline constexpr double speed_of_light_m_per_s = 299'792'458.0;

/// GHz (ordinary) -> rad/ns.
constexpr double angular(double ghz) { return two_pi * ghz; }

/// rad/ns -> GHz (ordinary).
constexpr double ordinary(double rad_per_ns) { return rad_per_ns / two_pi; }

/// Optical frequency in GHz for a vacuum wavelength in nm.
constexpr double wavelength_nm_to_ghz(double nm) {
  return speed_of_light_m_per_s / nm;  // (m/s) / (1e-9 m) = 1e9 Hz
}

constexpr double ghz_to_wavelength_nm(double ghz) {
  return speed_of_light_m_per_s / ghz;
}

}  // namespace cqed::units
