#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/error.hpp"
#include "cqed/spectra.hpp"
#include "cqed/units.hpp"

namespace cqed::fit {

enum class ModelKind { lorentzian, exp_decay, dit, power_broadening };

inline std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::lorentzian: return "lorentzian";
    case ModelKind::exp_decay: return "exp_decay";
    case ModelKind::dit: return "dit";
    case ModelKind::power_broadening: return "power_broadening";
  }
  return "?";
}

inline ModelKind parse_model_kind(std::string_view s) {
  if (s == "lorentzian") return ModelKind::lorentzian;
  if (s == "exp_decay") return ModelKind::exp_decay;
  if (s == "dit") return ModelKind::dit;
  if (s == "power_broadening") return ModelKind::power_broadening;
  throw ConfigError("unknown model '" + std::string(s) +
                    "' (expected lorentzian, exp_decay, dit or power_broadening)");
}

/// Canonical parameter order of each model.
inline const std::vector<std::string>& parameter_labels(ModelKind k) {
  static const std::vector<std::string> lorentzian{"x0", "fwhm", "amplitude", "offset"};
  static const std::vector<std::string> exp_decay{"t0", "tau", "amplitude", "offset", "sigma_irf"};
  static const std::vector<std::string> dit{"nu_c", "nu_a", "g", "kappa", "gamma",
                                            "kappa_wg_fraction", "amplitude", "offset"};
  static const std::vector<std::string> power{"linewidth0", "p_sat"};
  switch (k) {
    case ModelKind::lorentzian: return lorentzian;
    case ModelKind::exp_decay: return exp_decay;
    case ModelKind::dit: return dit;
    case ModelKind::power_broadening: return power;
  }
  return lorentzian;
}

/// Value used for a parameter that is neither free nor fixed by the caller.
/// Parameters without a default must be supplied.
inline std::optional<double> default_value(ModelKind k, std::string_view label) {
  if (label == "offset") return 0.0;
  switch (k) {
    case ModelKind::exp_decay:
      if (label == "t0" || label == "sigma_irf") return 0.0;
      break;
    case ModelKind::dit:
      if (label == "kappa_wg_fraction" || label == "amplitude") return 1.0;
      break;
    default:
      break;
  }
  return std::nullopt;
}

/// Unit of a parameter given the data's x and y units.
inline std::string parameter_unit(ModelKind k, std::string_view label, const std::string& x_unit,
                                  const std::string& y_unit) {
  switch (k) {
    case ModelKind::lorentzian:
      return (label == "x0" || label == "fwhm") ? x_unit : y_unit;
    case ModelKind::exp_decay:
      return (label == "amplitude" || label == "offset") ? y_unit : x_unit;
    case ModelKind::dit:
      if (label == "kappa_wg_fraction" || label == "amplitude" || label == "offset") return "";
      return x_unit;
    case ModelKind::power_broadening:
      return label == "linewidth0" ? y_unit : x_unit;
  }
  return "";
}

struct FreeParam {
  std::string label;
  double initial = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
};

/// Model kind plus the split of its parameters into fixed and free ones.
struct FitModel {
  ModelKind kind = ModelKind::lorentzian;
  std::map<std::string, double> fixed_params;
  std::vector<FreeParam> free_params;

  std::size_t free_count() const { return free_params.size(); }

  void validate() const {
    if (free_params.empty()) throw InvalidModelError("FitModel: at least one free parameter required");
    const auto& labels = parameter_labels(kind);
    auto known = [&](const std::string& l) { return std::find(labels.begin(), labels.end(), l) != labels.end(); };
    for (const auto& [label, value] : fixed_params) {
      if (!known(label)) throw InvalidModelError("FitModel: '" + label + "' is not a " + std::string(to_string(kind)) + " parameter");
      if (!std::isfinite(value)) throw InvalidModelError("FitModel: fixed '" + label + "' is not finite");
    }
    for (std::size_t i = 0; i < free_params.size(); ++i) {
      const auto& f = free_params[i];
      if (!known(f.label)) throw InvalidModelError("FitModel: '" + f.label + "' is not a " + std::string(to_string(kind)) + " parameter");
      if (fixed_params.count(f.label)) throw InvalidModelError("FitModel: '" + f.label + "' is both fixed and free");
      for (std::size_t j = 0; j < i; ++j) {
        if (free_params[j].label == f.label) throw InvalidModelError("FitModel: '" + f.label + "' listed twice");
      }
      if (f.lower && f.upper && !(*f.lower < *f.upper)) {
        throw InvalidModelError("FitModel: bounds of '" + f.label + "' need lower < upper");
      }
      if (!std::isfinite(f.initial)) throw InvalidModelError("FitModel: initial '" + f.label + "' not finite");
    }
    for (const auto& l : labels) {
      if (!fixed_params.count(l) && !is_free(l) && !default_value(kind, l)) {
        throw InvalidModelError("FitModel: parameter '" + l + "' must be fixed or free");
      }
    }
  }

  bool is_free(std::string_view label) const {
    return std::any_of(free_params.begin(), free_params.end(), [&](const FreeParam& f) { return f.label == label; });
  }

  /// Full canonical parameter vector from the free values.
  std::vector<double> assemble(std::span<const double> free_values) const {
    if (free_values.size() != free_params.size()) {
      throw InvalidModelError("FitModel: expected " + std::to_string(free_params.size()) + " free values, got " +
                              std::to_string(free_values.size()));
    }
    const auto& labels = parameter_labels(kind);
    std::vector<double> full(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (auto it = fixed_params.find(labels[i]); it != fixed_params.end()) {
        full[i] = it->second;
      } else if (auto d = default_value(kind, labels[i])) {
        full[i] = *d;
      } else {
        full[i] = std::numeric_limits<double>::quiet_NaN();
      }
    }
    for (std::size_t k = 0; k < free_params.size(); ++k) {
      const auto pos = std::find(labels.begin(), labels.end(), free_params[k].label) - labels.begin();
      full[static_cast<std::size_t>(pos)] = free_values[k];
    }
    return full;
  }
};

namespace detail {

/// exp(x^2) erfc(x) for large positive x (asymptotic series).
inline double erfcx_large(double x) {
  const double inv2 = 1.0 / (x * x);
  const double series = 1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2 - 1.875 * inv2 * inv2 * inv2 +
                        6.5625 * inv2 * inv2 * inv2 * inv2;
  return series / (x * std::sqrt(units::pi));
}

/// Unit-amplitude exponential e^{-u/tau} (u >= 0) convolved with a
/// normalized Gaussian of width sigma.
inline double exp_gauss(double u, double tau, double sigma) {
  const double z = (sigma * sigma / tau - u) / (std::sqrt(2.0) * sigma);
  if (z > 10.0) {
    // exp(E) erfc(z) = exp(E - z^2) erfcx(z), E - z^2 = -u^2 / (2 sigma^2)
    return 0.5 * std::exp(-u * u / (2.0 * sigma * sigma)) * erfcx_large(z);
  }
  const double e = sigma * sigma / (2.0 * tau * tau) - u / tau;
  return 0.5 * std::exp(e) * std::erfc(z);
}

inline void require_finite(std::span<const double> p) {
  for (double v : p) {
    if (!std::isfinite(v)) throw InvalidModelError("model: non-finite parameter");
  }
}

}  // namespace detail

/// Model value at x for a full canonical parameter vector.
inline double model_value(ModelKind kind, std::span<const double> p, double x) {
  switch (kind) {
    case ModelKind::lorentzian: {
      const double x0 = p[0], w = p[1], a = p[2], off = p[3];
      if (w == 0.0) throw InvalidModelError("lorentzian: fwhm must be nonzero");
      const double hw2 = 0.25 * w * w;
      const double dx = x - x0;
      return off + a * hw2 / (dx * dx + hw2);
    }
    case ModelKind::exp_decay: {
      const double t0 = p[0], tau = p[1], a = p[2], off = p[3], sirf = p[4];
      if (!(tau > 0.0)) throw InvalidModelError("exp_decay: tau must be > 0");
      if (sirf < 0.0) throw InvalidModelError("exp_decay: sigma_irf must be >= 0");
      if (sirf == 0.0) return off + a * std::exp(-(x - t0) / tau);
      return off + a * detail::exp_gauss(x - t0, tau, sirf);
    }
    case ModelKind::dit: {
      SystemParams sp;
      sp.delta_c = p[0];
      sp.delta_a = p[1];
      sp.g = std::abs(p[2]);
      sp.kappa = p[3];
      sp.gamma_rad = p[4];
      sp.kappa_wg_fraction = p[5];
      if (!(sp.kappa > 0.0)) throw InvalidModelError("dit: kappa must be > 0");
      if (!(sp.gamma_rad >= 0.0)) throw InvalidModelError("dit: gamma must be >= 0");
      if (!(sp.kappa_wg_fraction >= 0.0 && sp.kappa_wg_fraction <= 1.0)) {
        throw InvalidModelError("dit: kappa_wg_fraction must lie in [0, 1]");
      }
      return p[7] + p[6] * spectra::dit_transmission_at(sp, x);
    }
    case ModelKind::power_broadening: {
      const double w0 = p[0], psat = p[1];
      if (!(psat > 0.0)) throw InvalidModelError("power_broadening: p_sat must be > 0");
      const double arg = 1.0 + x / psat;
      if (arg < 0.0) throw InvalidModelError("power_broadening: 1 + P/P_sat < 0");
      return w0 * std::sqrt(arg);
    }
  }
  return 0.0;
}

/// Model values on `x` for the model's free parameter values.
inline std::vector<double> evaluate_model(const FitModel& model, std::span<const double> free_values,
                                          std::span<const double> x) {
  const std::vector<double> full = model.assemble(free_values);
  detail::require_finite(full);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = model_value(model.kind, full, x[i]);
  return y;
}

/// Central-difference Jacobian d model / d free parameter, one row per x.
/// Step per parameter: max(1e-6, 1e-6 |p|); one-sided where the model is
/// undefined on one side.
inline Eigen::MatrixXd model_jacobian(const FitModel& model, std::span<const double> free_values,
                                      std::span<const double> x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto m = static_cast<Eigen::Index>(free_values.size());
  Eigen::MatrixXd jac(n, m);
  std::vector<double> p(free_values.begin(), free_values.end());
  for (Eigen::Index j = 0; j < m; ++j) {
    const double p0 = p[static_cast<std::size_t>(j)];
    const double h = std::max(1e-6, 1e-6 * std::abs(p0));
    auto at = [&](double v) -> std::optional<std::vector<double>> {
      p[static_cast<std::size_t>(j)] = v;
      try {
        auto y = evaluate_model(model, p, x);
        p[static_cast<std::size_t>(j)] = p0;
        return y;
      } catch (const InvalidModelError&) {
        p[static_cast<std::size_t>(j)] = p0;
        return std::nullopt;
      }
    };
    auto up = at(p0 + h);
    auto down = at(p0 - h);
    double span = 2.0 * h;
    // One-sided difference at the edge of a parameter's domain.
    if (!up) {
      up = evaluate_model(model, p, x);
      span = h;
    } else if (!down) {
      down = evaluate_model(model, p, x);
      span = h;
    }
    if (!down) throw InvalidModelError("model_jacobian: model undefined around '" + model.free_params[static_cast<std::size_t>(j)].label + "'");
    for (Eigen::Index i = 0; i < n; ++i) {
      jac(i, j) = ((*up)[static_cast<std::size_t>(i)] - (*down)[static_cast<std::size_t>(i)]) / span;
    }
  }
  return jac;
}

}  // namespace cqed::fit
