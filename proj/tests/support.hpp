#pragma once

#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cqed/cqed.hpp"

namespace cqed::test {

/// Random Hermitian Hamiltonian with entries of order `scale` plus 1-3 random
/// collapse operators with rates in (0.1, 2) rad/ns.
inline LindbladSystem random_system(std::size_t dim, std::mt19937_64& rng, double scale = 3.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> rate(0.1, 2.0);
  std::uniform_int_distribution<int> count(1, 3);
  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix h(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) h(i, j) = Complex(normal(rng), normal(rng));
  }
  h = 0.5 * scale * (h + h.adjoint()).eval();
  std::vector<CollapseOperator> ops;
  const int n_ops = count(rng);
  for (int k = 0; k < n_ops; ++k) {
    CMatrix l(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) l(i, j) = Complex(normal(rng), normal(rng)) / std::sqrt(double(d));
    }
    ops.push_back({l, rate(rng)});
  }
  return LindbladSystem(h, ops);
}

/// Random full-rank density matrix.
inline DensityMatrix random_density(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  }
  CMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix::from_matrix(rho);
}

/// Photon number of a coherently driven empty cavity,
/// (Omega/2)^2 / ((kappa/2)^2 + Delta^2), all in the same units.
inline double driven_cavity_photons(double omega, double kappa, double delta) {
  return 0.25 * omega * omega / (0.25 * kappa * kappa + delta * delta);
}

/// Drop-filter transmission from the master equation: the cavity is driven
/// through the input waveguide with amplitude Omega (GHz) and the transmitted
/// flux is b_in + sqrt(kappa_wg/2) a, normalized to the input flux.
inline double master_equation_transmission(SystemParams p, double nu, double omega, int n_max = 2) {
  p.omega_drive = omega;
  p.delta_c -= nu;
  p.delta_a -= nu;
  HilbertConfig cfg;
  cfg.n_max = n_max;
  const LindbladSystem sys = build_system(cfg, p);
  const DensityMatrix rho = steady_state(sys);
  const CMatrix a = ops::annihilation(cfg);
  const Complex mean_a = expectation(a, rho);
  const double n = expectation(a.adjoint() * a, rho).real();
  const double kf = units::angular(p.kappa * p.kappa_wg_fraction) / 2.0;  // coupling into the output port
  const double eps = units::two_pi * omega / 2.0;                        // H_drive = eps (a + a^dag)
  const Complex b_in = Complex(0.0, 1.0) * eps / std::sqrt(kf);
  const double flux = std::norm(b_in) + std::sqrt(kf) * 2.0 * (std::conj(b_in) * mean_a).real() + kf * n;
  return flux / std::norm(b_in);
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("cqed_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(file(name), std::ios::binary) << content;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cqed::test
