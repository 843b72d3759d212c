#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqed/error.hpp"
#include "cqed/units.hpp"

namespace cqed {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SparseCMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr std::size_t kDefaultDimensionCap = 4096;

/// Truncated Hilbert space: `n_emitters` two-level systems times a cavity
/// Fock space {0..n_max}.
///
/// Basis index = emitter_bits * (n_max + 1) + n, where bit i of emitter_bits
/// is set when emitter i is excited.
struct HilbertConfig {
  int n_max = 2;
  int n_emitters = 1;
  std::size_t dimension_cap = kDefaultDimensionCap;

  std::size_t cavity_levels() const { return static_cast<std::size_t>(n_max) + 1; }
  std::size_t emitter_states() const { return std::size_t{1} << n_emitters; }

  std::size_t dimension() const {
    validate();
    return emitter_states() * cavity_levels();
  }

  std::size_t index(std::size_t emitter_bits, std::size_t photons) const {
    return emitter_bits * cavity_levels() + photons;
  }

  void validate() const {
    if (n_max < 1) throw ConfigError("HilbertConfig: n_max must be >= 1");
    if (n_emitters < 1) throw ConfigError("HilbertConfig: n_emitters must be >= 1");
    // 2^n_emitters alone must stay below the cap before we multiply.
    if (n_emitters >= 40 ||
        (std::size_t{1} << n_emitters) * cavity_levels() > dimension_cap) {
      throw ConfigError("HilbertConfig: dimension 2^" + std::to_string(n_emitters) +
                        " x " + std::to_string(cavity_levels()) + " exceeds cap " +
                        std::to_string(dimension_cap));
    }
  }

  friend bool operator==(const HilbertConfig&, const HilbertConfig&) = default;
};

/// Physical parameters, all in GHz as nu = omega / 2pi. Detunings are signed
/// (nu_x - nu_probe) in the frame rotating at the probe/drive frequency.
struct SystemParams {
  double g = 0.0;
  double kappa = 0.0;
  double kappa_wg_fraction = 1.0;
  double gamma_rad = 0.0;
  double gamma_deph = 0.0;
  double delta_c = 0.0;
  double delta_a = 0.0;
  double omega_drive = 0.0;

  /// Total emitter FWHM linewidth.
  double gamma_total() const { return gamma_rad + 2.0 * gamma_deph; }
  double kappa_loss() const { return (1.0 - kappa_wg_fraction) * kappa; }

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!(finite(g) && finite(kappa) && finite(gamma_rad) && finite(gamma_deph) &&
          finite(delta_c) && finite(delta_a) && finite(omega_drive) &&
          finite(kappa_wg_fraction))) {
      throw ConfigError("SystemParams: non-finite entry");
    }
    if (g < 0 || kappa < 0 || gamma_rad < 0 || gamma_deph < 0 || omega_drive < 0) {
      throw ConfigError("SystemParams: rates must be >= 0");
    }
    if (kappa_wg_fraction < 0 || kappa_wg_fraction > 1) {
      throw ConfigError("SystemParams: kappa_wg_fraction must lie in [0, 1]");
    }
  }
};

namespace ops {

inline CMatrix identity(const HilbertConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(cfg.dimension());
  return CMatrix::Identity(d, d);
}

/// Cavity annihilation operator a.
inline CMatrix annihilation(const HilbertConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(cfg.dimension());
  CMatrix a = CMatrix::Zero(d, d);
  for (std::size_t e = 0; e < cfg.emitter_states(); ++e) {
    for (std::size_t n = 1; n < cfg.cavity_levels(); ++n) {
      a(static_cast<Eigen::Index>(cfg.index(e, n - 1)),
        static_cast<Eigen::Index>(cfg.index(e, n))) = std::sqrt(static_cast<double>(n));
    }
  }
  return a;
}

inline CMatrix number(const HilbertConfig& cfg) {
  CMatrix a = annihilation(cfg);
  return a.adjoint() * a;
}

/// Lowering operator sigma^- of emitter `which`.
inline CMatrix lowering(const HilbertConfig& cfg, int which) {
  if (which < 0 || which >= cfg.n_emitters) throw ConfigError("lowering: emitter index out of range");
  const auto d = static_cast<Eigen::Index>(cfg.dimension());
  const std::size_t bit = std::size_t{1} << which;
  CMatrix s = CMatrix::Zero(d, d);
  for (std::size_t e = 0; e < cfg.emitter_states(); ++e) {
    if (!(e & bit)) continue;
    for (std::size_t n = 0; n < cfg.cavity_levels(); ++n) {
      s(static_cast<Eigen::Index>(cfg.index(e & ~bit, n)),
        static_cast<Eigen::Index>(cfg.index(e, n))) = 1.0;
    }
  }
  return s;
}

inline CMatrix sigma_z(const HilbertConfig& cfg, int which) {
  if (which < 0 || which >= cfg.n_emitters) throw ConfigError("sigma_z: emitter index out of range");
  const auto d = static_cast<Eigen::Index>(cfg.dimension());
  const std::size_t bit = std::size_t{1} << which;
  CMatrix z = CMatrix::Zero(d, d);
  for (std::size_t e = 0; e < cfg.emitter_states(); ++e) {
    for (std::size_t n = 0; n < cfg.cavity_levels(); ++n) {
      const auto i = static_cast<Eigen::Index>(cfg.index(e, n));
      z(i, i) = (e & bit) ? 1.0 : -1.0;
    }
  }
  return z;
}

/// sigma^+ sigma^- of emitter `which`.
inline CMatrix excited_projector(const HilbertConfig& cfg, int which) {
  CMatrix s = lowering(cfg, which);
  return s.adjoint() * s;
}

}  // namespace ops

struct CollapseOperator {
  CMatrix op;
  double rate = 0.0;  // rad/ns
};

/// Hamiltonian plus weighted collapse operators, in angular units (rad/ns).
/// Immutable after construction.
class LindbladSystem {
 public:
  LindbladSystem(CMatrix hamiltonian, std::vector<CollapseOperator> collapse_ops,
                 std::optional<HilbertConfig> layout = std::nullopt)
      : hamiltonian_(std::move(hamiltonian)),
        collapse_ops_(std::move(collapse_ops)),
        layout_(std::move(layout)) {
    if (hamiltonian_.rows() != hamiltonian_.cols() || hamiltonian_.rows() == 0) {
      throw ShapeError("LindbladSystem: Hamiltonian must be square and non-empty");
    }
    const double hnorm = hamiltonian_.norm();
    if ((hamiltonian_ - hamiltonian_.adjoint()).norm() > 1e-12 * std::max(hnorm, 1.0)) {
      throw ConfigError("LindbladSystem: Hamiltonian is not Hermitian");
    }
    const auto d = hamiltonian_.rows();
    effective_ = hamiltonian_;
    for (const auto& c : collapse_ops_) {
      if (c.op.rows() != d || c.op.cols() != d) {
        throw ShapeError("LindbladSystem: collapse operator shape mismatch");
      }
      if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) {
        throw ConfigError("LindbladSystem: collapse rates must be >= 0");
      }
      effective_ -= Complex(0.0, 0.5 * c.rate) * (c.op.adjoint() * c.op);
      if (c.rate > 0.0) {
        SparseCMatrix sp = (std::sqrt(c.rate) * c.op).sparseView();
        sparse_jumps_.push_back(std::move(sp));
      }
    }
    sparse_effective_ = effective_.sparseView();
    if (layout_ && layout_->dimension() != static_cast<std::size_t>(d)) {
      throw ShapeError("LindbladSystem: layout dimension mismatch");
    }
  }

  std::size_t dim() const { return static_cast<std::size_t>(hamiltonian_.rows()); }
  const CMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<CollapseOperator>& collapse_ops() const { return collapse_ops_; }
  const std::optional<HilbertConfig>& layout() const { return layout_; }

  /// H - (i/2) sum rate L^dag L.
  const CMatrix& effective_hamiltonian() const { return effective_; }

  /// sqrt(rate) L for every nonzero-rate channel, sparse.
  const std::vector<SparseCMatrix>& sparse_jumps() const { return sparse_jumps_; }
  const SparseCMatrix& sparse_effective_hamiltonian() const { return sparse_effective_; }

  bool dissipative() const {
    for (const auto& c : collapse_ops_) {
      if (c.rate > 0.0 && c.op.norm() > 0.0) return true;
    }
    return false;
  }

  double max_rate() const {
    double r = 0.0;
    for (const auto& c : collapse_ops_) r = std::max(r, c.rate * c.op.cwiseAbs2().maxCoeff());
    return r;
  }

 private:
  CMatrix hamiltonian_;
  std::vector<CollapseOperator> collapse_ops_;
  std::optional<HilbertConfig> layout_;
  CMatrix effective_;
  SparseCMatrix sparse_effective_;
  std::vector<SparseCMatrix> sparse_jumps_;
};

/// Rotating-frame Tavis-Cummings system:
///   H = 2pi [dc a^dag a + sum_i da s+_i s-_i + g sum_i (a^dag s-_i + a s+_i)
///            + (omega/2)(a^dag + a)]
/// with collapse a @ 2pi kappa, s-_i @ 2pi gamma_rad, sz_i @ 2pi gamma_deph / 2.
inline LindbladSystem build_system(const HilbertConfig& config, const SystemParams& params) {
  config.validate();
  params.validate();

  const CMatrix a = ops::annihilation(config);
  const CMatrix ad = a.adjoint();
  CMatrix h = params.delta_c * (ad * a) + (0.5 * params.omega_drive) * (ad + a);

  std::vector<CollapseOperator> collapse;
  collapse.push_back({a, units::angular(params.kappa)});
  for (int i = 0; i < config.n_emitters; ++i) {
    const CMatrix sm = ops::lowering(config, i);
    const CMatrix sp = sm.adjoint();
    h += params.delta_a * (sp * sm) + params.g * (ad * sm + a * sp);
    collapse.push_back({sm, units::angular(params.gamma_rad)});
    collapse.push_back({ops::sigma_z(config, i), units::angular(params.gamma_deph) / 2.0});
  }
  h *= units::two_pi;
  // Kill the rounding-level anti-Hermitian part from the sums above.
  CMatrix herm = 0.5 * (h + h.adjoint());
  return LindbladSystem(std::move(herm), std::move(collapse), config);
}

/// drho/dt = -i[H, rho] + sum rate (L rho L^dag - 1/2 {L^dag L, rho}).
inline CMatrix lindblad_derivative(const LindbladSystem& sys, const CMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(sys.dim());
  if (rho.rows() != d || rho.cols() != d) {
    throw ShapeError("lindblad_derivative: state is " + std::to_string(rho.rows()) + "x" +
                     std::to_string(rho.cols()) + ", system dim " + std::to_string(d));
  }
  // -i (Heff rho - rho Heff^dag) + sum J rho J^dag, with J = sqrt(rate) L.
  // Right products go through adjoints so only sparse * dense is needed.
  const CMatrix rho_adj = rho.adjoint();
  const SparseCMatrix& heff = sys.sparse_effective_hamiltonian();
  CMatrix out = Complex(0.0, -1.0) * (heff * rho);
  out += Complex(0.0, 1.0) * CMatrix(heff * rho_adj).adjoint();
  for (const auto& jump : sys.sparse_jumps()) {
    const CMatrix right = CMatrix(jump * rho_adj).adjoint();  // rho J^dag
    out.noalias() += jump * right;
  }
  return out;
}

}  // namespace cqed
