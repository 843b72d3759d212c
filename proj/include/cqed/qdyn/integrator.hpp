#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "cqed/error.hpp"

namespace cqed {

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = 0.0;      // 0 = unbounded
  std::size_t max_steps = 20'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

namespace detail {

/// RMS of |err| / (atol + rtol * max(|y0|, |y1|)) over all entries.
template <class State>
double scaled_error_norm(const State& err, const State& y0, const State& y1, double atol,
                         double rtol) {
  const auto scale = (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array());
  const double sum = (err.cwiseAbs().array() / scale).square().sum();
  return std::sqrt(sum / static_cast<double>(err.size()));
}

}  // namespace detail

/// Dormand-Prince 5(4) with PI step-size control (Hairer-Norsett-Wanner).
///
/// Integrates dy/dt = rhs(t, y) from t0 and calls observer(t, y) at every time
/// in `sample_times` (nondecreasing, >= t0). Steps are clipped to land on each
/// sample exactly. `State` is any Eigen dense expression type.
template <class State, class Rhs, class Observer>
IntegratorStats integrate_dopri5(Rhs&& rhs, State y, double t0, std::span<const double> sample_times,
                                 const IntegratorOptions& opt, Observer&& observer) {
  // Butcher tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  // PI controller constants.
  constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75;
  constexpr double safe = 0.9, facmin = 0.2, facmax = 10.0;

  IntegratorStats stats;
  double t = t0;

  std::size_t next = 0;
  while (next < sample_times.size() && sample_times[next] <= t) {
    observer(t, static_cast<const State&>(y));
    ++next;
  }
  if (next == sample_times.size()) return stats;
  const double t_end = sample_times.back();

  State k1 = rhs(t, y);
  ++stats.rhs_evaluations;

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    const auto sc = (opt.atol + opt.rtol * y.cwiseAbs().array()).eval();
    const double d0 = std::sqrt((y.cwiseAbs().array() / sc).square().mean());
    const double d1 = std::sqrt((k1.cwiseAbs().array() / sc).square().mean());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_end - t);
    const State y1 = y + h0 * k1;
    const State f1 = rhs(t + h0, y1);
    ++stats.rhs_evaluations;
    const double d2 =
        std::sqrt(((f1 - k1).cwiseAbs().array() / sc).square().mean()) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  double facold = 1e-4;
  bool last_rejected = false;
  std::size_t steps = 0;

  while (next < sample_times.size()) {
    const double target = sample_times[next];
    const double remaining = target - t;
    bool hits_target = false;
    double step = h;
    if (step >= remaining * (1.0 - 1e-12)) {
      step = remaining;
      hits_target = true;
    }
    const double min_step = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
    if (step < min_step && !hits_target) {
      throw StiffnessError(t, "integrator step size underflow at t = " + std::to_string(t) + " ns");
    }
    if (++steps > opt.max_steps) {
      throw StiffnessError(t, "integrator exceeded max steps at t = " + std::to_string(t) + " ns");
    }

    const State k2 = rhs(t + c2 * step, y + step * (a21 * k1));
    const State k3 = rhs(t + c3 * step, y + step * (a31 * k1 + a32 * k2));
    const State k4 = rhs(t + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
    const State k5 = rhs(t + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const State k6 =
        rhs(t + step, y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    State ynew = y + step * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const State k7 = rhs(t + step, ynew);
    stats.rhs_evaluations += 6;

    const State err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = detail::scaled_error_norm(err, y, ynew, opt.atol, opt.rtol);

    const double fac11 = std::pow(std::max(en, 1e-300), expo1);
    if (en <= 1.0) {
      double fac = fac11 / std::pow(facold, beta);
      fac = std::clamp(fac / safe, 1.0 / facmax, 1.0 / facmin);
      double hnew = step / fac;
      if (last_rejected) hnew = std::min(hnew, step);
      facold = std::max(en, 1e-4);
      ++stats.accepted;
      last_rejected = false;

      t = hits_target ? target : t + step;
      y = std::move(ynew);
      k1 = k7;
      // When the step was clipped, keep the larger controller proposal.
      h = hits_target ? std::max(h, hnew) : hnew;
      if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

      while (next < sample_times.size() && sample_times[next] <= t) {
        observer(sample_times[next], static_cast<const State&>(y));
        ++next;
      }
    } else {
      h = step / std::min(1.0 / facmin, fac11 / safe);
      ++stats.rejected;
      last_rejected = true;
      if (h < min_step) {
        throw StiffnessError(t, "integrator step size underflow at t = " + std::to_string(t) + " ns");
      }
    }
  }
  return stats;
}

}  // namespace cqed
