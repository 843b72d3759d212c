#pragma once

#include <string>
#include <vector>

#include "cqed/qdyn/evolve.hpp"
#include "cqed/qdyn/steady_state.hpp"

namespace cqed {

struct CorrelationPoint {
  double tau;  // ns
  double g2;
};

/// Photon numbers below this make g2 undefined.
inline constexpr double kMinPhotonNumber = 1e-12;

/// Normalized intensity correlation of the cavity field in the steady state,
///   g2(tau) = <a^dag(0) a^dag(tau) a(tau) a(0)> / <a^dag a>^2,
/// from the quantum regression theorem: a rho_ss a^dag is propagated with the
/// same Liouvillian and a^dag a is measured on it.
inline std::vector<CorrelationPoint> g2_correlation(const LindbladSystem& sys, std::vector<double> tau_grid,
                                                    const IntegratorOptions& opt = {},
                                                    const SteadyStateOptions& ss_opt = {}) {
  if (!sys.layout()) throw ConfigError("g2_correlation: system has no cavity layout");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] >= 0.0) || (i > 0 && tau_grid[i] < tau_grid[i - 1])) {
      throw ConfigError("g2_correlation: tau grid must be nonnegative and nondecreasing");
    }
  }
  const CMatrix a = ops::annihilation(*sys.layout());
  const CMatrix n_op = a.adjoint() * a;
  const DensityMatrix rho_ss = steady_state(sys, ss_opt);
  const double n = expectation(n_op, rho_ss).real();
  if (!(n >= kMinPhotonNumber)) {
    throw UndefinedCorrelationError("g2_correlation: steady-state photon number " + std::to_string(n) +
                                    " below " + std::to_string(kMinPhotonNumber));
  }
  // Normalized conditional state a rho a^dag / n; tr stays 1 under the flow.
  const CMatrix conditioned = (a * rho_ss.matrix() * a.adjoint()) / n;

  std::vector<CorrelationPoint> out;
  out.reserve(tau_grid.size());
  propagate(
      sys, conditioned, tau_grid,
      [&](double tau, const CMatrix& x) {
        const double num = n_op.cwiseProduct(x.transpose()).sum().real();
        out.push_back({tau, num / n});
      },
      opt);
  return out;
}

}  // namespace cqed
