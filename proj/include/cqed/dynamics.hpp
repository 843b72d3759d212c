#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cqed/derive.hpp"
#include "cqed/fit/lm.hpp"
#include "cqed/qdyn.hpp"

namespace cqed {

enum class TraceKind { population, counts };

/// Uniformly time-binned decay curve. values[i] belongs to t0 + i dt.
struct DecayTrace {
  double t0 = 0.0;  // ns
  double dt = 0.0;  // ns
  std::vector<double> values;
  TraceKind kind = TraceKind::population;

  std::size_t size() const { return values.size(); }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(t0)) throw ConfigError("DecayTrace: dt must be > 0 and t0 finite");
    if (values.empty()) throw ConfigError("DecayTrace: empty trace");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i]) || values[i] < 0.0) {
        throw ConfigError("DecayTrace: value at index " + std::to_string(i) + " must be finite and >= 0");
      }
    }
  }
};

namespace dynamics {

/// Excited-state population of emitter 0 starting from |e, 0 photons>, no drive.
inline DecayTrace simulate_decay(const HilbertConfig& config, const SystemParams& params, double t_final, double dt,
                                 const IntegratorOptions& opt = {}) {
  if (params.omega_drive != 0.0) throw ConfigError("simulate_decay: drive must be zero");
  if (!(t_final > 0.0) || !(dt > 0.0)) throw ConfigError("simulate_decay: t_final and dt must be > 0");
  const LindbladSystem sys = build_system(config, params);
  const std::size_t bins = static_cast<std::size_t>(std::floor(t_final / dt + 1e-9));
  std::vector<double> times(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) times[i] = static_cast<double>(i) * dt;

  const DensityMatrix rho0 = DensityMatrix::basis_state(sys.dim(), config.index(1, 0));
  const CMatrix excited = ops::excited_projector(config, 0);
  const auto samples = evolve(sys, rho0, times.back(), times, opt);

  DecayTrace trace;
  trace.t0 = 0.0;
  trace.dt = dt;
  trace.kind = TraceKind::population;
  trace.values.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    trace.values.push_back(std::max(0.0, expectation(excited, samples[i].rho).real()));
  }
  return trace;
}

struct EffectiveRate {
  double rate_ghz = 0.0;  // Gamma / 2pi
  bool regime_warning = false;  // kappa < 10 g: adiabatic elimination unreliable
};

/// Adiabatically eliminated emitter decay rate
///   Gamma / 2pi = gamma_rad + (4 g^2 / kappa) / (1 + (2 Delta / kappa)^2),
/// Delta = delta_a - delta_c.
inline EffectiveRate effective_rate_bad_cavity(const SystemParams& p) {
  p.validate();
  if (!(p.kappa > 0.0)) throw ConfigError("effective_rate_bad_cavity: kappa must be > 0");
  const double purcell = 4.0 * p.g * p.g / p.kappa;
  return {p.gamma_rad + derive::purcell_lorentzian(purcell, p.delta_a - p.delta_c, p.kappa), p.kappa < 10.0 * p.g};
}

/// Time excluded from the start of a simulated trace before lifetime fits:
/// 2 / (2 pi kappa), the cavity loading transient.
inline double loading_transient_ns(double kappa_ghz) {
  return kappa_ghz > 0.0 ? 2.0 / (units::two_pi * kappa_ghz) : 0.0;
}

/// Scale a population trace to `peak_counts` at its maximum and draw Poisson
/// counts per bin from a seeded generator.
inline DecayTrace to_counts(const DecayTrace& population, double peak_counts, std::uint64_t seed) {
  population.validate();
  if (!(peak_counts > 0.0)) throw ConfigError("to_counts: peak_counts must be > 0");
  double peak = 0.0;
  for (double v : population.values) peak = std::max(peak, v);
  if (!(peak > 0.0)) throw ConfigError("to_counts: trace is identically zero");
  std::mt19937_64 rng(seed);
  DecayTrace out = population;
  out.kind = TraceKind::counts;
  for (auto& v : out.values) {
    const double mean = v / peak * peak_counts;
    v = mean > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(mean)(rng)) : 0.0;
  }
  return out;
}

struct LifetimeFit {
  Measured tau_ns;
  Measured rate_ghz;  // 1 / (2 pi tau)
  fit::FitResult fit;
};

/// Single-exponential lifetime of a trace, skipping the first `skip_ns`.
/// Population traces fit A e^{-t/tau} (no offset); counts traces also free a
/// background offset and are weighted by the Poisson variance of the fit.
inline LifetimeFit fit_lifetime(const DecayTrace& trace, double skip_ns = 0.0, const fit::FitOptions& opt = {}) {
  trace.validate();
  fit::FitData data;
  data.x_unit = "ns";
  data.y_unit = trace.kind == TraceKind::counts ? "counts" : "";
  if (trace.kind == TraceKind::counts) data.sigma.emplace();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double t = trace.time(i);
    if (t < trace.t0 + skip_ns) continue;
    data.x.push_back(t);
    data.y.push_back(trace.values[i]);
    if (data.sigma) data.sigma->push_back(std::sqrt(std::max(trace.values[i], 1.0)));
  }
  if (data.x.size() < 6) throw ConfigError("fit_lifetime: too few points after skipping the transient");

  // Log-linear guess from the first point and the first point below 1/e of it.
  const double y0 = std::max(data.y.front(), 1e-300);
  double tau_guess = (data.x.back() - data.x.front()) / 3.0;
  for (std::size_t i = 1; i < data.y.size(); ++i) {
    if (data.y[i] > 0.0 && data.y[i] < y0 / std::exp(1.0)) {
      tau_guess = (data.x[i] - data.x.front()) / std::log(y0 / data.y[i]);
      break;
    }
  }
  const double t_ref = data.x.front();

  fit::FitModel model;
  model.kind = fit::ModelKind::exp_decay;
  model.fixed_params["t0"] = t_ref;
  model.free_params.push_back({"tau", tau_guess, 0.0, std::nullopt});
  model.free_params.push_back({"amplitude", y0, std::nullopt, std::nullopt});
  if (trace.kind == TraceKind::counts) {
    model.free_params.push_back({"offset", 0.0, std::nullopt, std::nullopt});
  }
  auto result = fit::lm_fit(model, data, opt);
  if (trace.kind == TraceKind::counts) {
    // Reweight with the fitted mean as the Poisson variance; the fixed point
    // solves the Poisson likelihood equations.
    for (int pass = 0; pass < 4; ++pass) {
      std::vector<double> free_values;
      for (const auto& f : model.free_params) free_values.push_back(result.param(f.label).value);
      const auto mu = fit::evaluate_model(model, free_values, data.x);
      for (std::size_t i = 0; i < mu.size(); ++i) (*data.sigma)[i] = std::sqrt(std::max(mu[i], 0.5));
      for (std::size_t k = 0; k < model.free_params.size(); ++k) model.free_params[k].initial = free_values[k];
      const double previous = free_values[0];
      result = fit::lm_fit(model, data, opt);
      if (std::abs(result.param("tau").value - previous) <= 1e-9 * previous) break;
    }
  }
  const Measured tau = result.param("tau");
  const double rate = 1.0 / (units::two_pi * tau.value);
  return {tau, Measured(rate, rate * tau.sigma / tau.value, "GHz"), std::move(result)};
}

}  // namespace dynamics
}  // namespace cqed
