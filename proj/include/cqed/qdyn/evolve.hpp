#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cqed/qdyn/density.hpp"
#include "cqed/qdyn/integrator.hpp"
#include "cqed/qdyn/system.hpp"

namespace cqed {

struct EvolutionSample {
  double t;  // ns
  DensityMatrix rho;
};

/// Sampled states must satisfy the density-matrix invariants to this level.
inline constexpr double kEvolveStateTolerance = 1e-7;

/// `n + 1` equally spaced times on [0, t_final].
inline std::vector<double> uniform_time_grid(double t_final, std::size_t n) {
  if (n == 0) throw ConfigError("uniform_time_grid: need at least one interval");
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = t_final * static_cast<double>(i) / static_cast<double>(n);
  out.back() = t_final;
  return out;
}

namespace detail {

inline void check_sample_grid(const std::vector<double>& times, double t_final) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || times[i] > t_final) {
      throw ConfigError("evolve: sample time " + std::to_string(times[i]) + " outside [0, t_final]");
    }
    if (i > 0 && times[i] < times[i - 1]) throw ConfigError("evolve: sample times must be nondecreasing");
  }
}

}  // namespace detail

/// Integrate an arbitrary operator under the Lindblad generator without
/// imposing density-matrix invariants. Used for the quantum regression theorem
/// and anywhere an unnormalized operator is propagated.
template <class Observer>
IntegratorStats propagate(const LindbladSystem& sys, const CMatrix& x0, const std::vector<double>& times,
                          Observer&& observer, const IntegratorOptions& opt = {}) {
  const auto d = static_cast<Eigen::Index>(sys.dim());
  if (x0.rows() != d || x0.cols() != d) throw ShapeError("propagate: initial operator shape mismatch");
  auto rhs = [&sys](double, const CMatrix& x) { return lindblad_derivative(sys, x); };
  return integrate_dopri5<CMatrix>(rhs, x0, 0.0, std::span<const double>(times), opt,
                                   std::forward<Observer>(observer));
}

/// Evolve rho0 to t_final, returning the state at every time in `sample_times`
/// (each in [0, t_final], nondecreasing). t_final is appended when absent.
inline std::vector<EvolutionSample> evolve(const LindbladSystem& sys, const DensityMatrix& rho0,
                                           double t_final, std::vector<double> sample_times,
                                           const IntegratorOptions& opt = {}) {
  if (!(t_final > 0.0)) throw ConfigError("evolve: t_final must be > 0");
  if (rho0.dim() != sys.dim()) throw ShapeError("evolve: rho0 dimension mismatch");
  detail::check_sample_grid(sample_times, t_final);
  if (sample_times.empty() || sample_times.back() != t_final) sample_times.push_back(t_final);

  std::vector<EvolutionSample> out;
  out.reserve(sample_times.size());
  propagate(
      sys, rho0.matrix(), sample_times,
      [&out](double t, const CMatrix& rho) {
        try {
          out.push_back({t, DensityMatrix::from_matrix(rho, kEvolveStateTolerance)});
        } catch (const ConfigError& e) {
          throw SolverError("evolve: state left the physical set at t = " + std::to_string(t) +
                            " ns: " + e.what());
        }
      },
      opt);
  return out;
}

}  // namespace cqed
