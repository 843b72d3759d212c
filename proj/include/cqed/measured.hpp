#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "cqed/error.hpp"

namespace cqed {

/// A measured or derived value with its 1-sigma uncertainty.
struct Measured {
  double value = 0.0;
  double sigma = 0.0;
  std::string unit;

  Measured() = default;
  Measured(double v, double s, std::string u = {})
      : value(v), sigma(s), unit(std::move(u)) {
    if (!(s >= 0.0) || std::isnan(v)) {
      throw ConfigError("Measured: sigma must be >= 0 and value not NaN");
    }
  }

  double relative_sigma() const { return value != 0.0 ? sigma / std::abs(value) : 0.0; }
};

inline std::ostream& operator<<(std::ostream& os, const Measured& m) {
  os << m.value << " +/- " << m.sigma;
  if (!m.unit.empty()) os << ' ' << m.unit;
  return os;
}

}  // namespace cqed
