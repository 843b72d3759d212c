#pragma once

#include <Eigen/LU>
#include <algorithm>
#include <string>

#include "cqed/qdyn/density.hpp"
#include "cqed/qdyn/system.hpp"

namespace cqed {

struct SteadyStateOptions {
  /// The dense Liouvillian is dim^2 x dim^2; beyond this the solve is refused.
  std::size_t max_dim = 48;
  /// Reciprocal condition number below which the system counts as degenerate.
  double rcond_floor = 1e-13;
  /// Required ||L(rho)|| / ||L||.
  double residual_tolerance = 1e-9;
};

namespace detail {

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace detail

/// Superoperator in column-stacking convention: vec(A X B) = (B^T (x) A) vec(X).
inline CMatrix liouvillian(const LindbladSystem& sys) {
  const auto d = static_cast<Eigen::Index>(sys.dim());
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix& heff = sys.effective_hamiltonian();
  CMatrix l = Complex(0.0, -1.0) * detail::kron(id, heff) + Complex(0.0, 1.0) * detail::kron(heff.conjugate(), id);
  for (const auto& c : sys.collapse_ops()) {
    if (c.rate == 0.0) continue;
    l += c.rate * detail::kron(c.op.conjugate(), c.op);
  }
  return l;
}

/// Solve L(rho) = 0 with tr(rho) = 1 by replacing the rho_00 row of the
/// vectorized Liouvillian with the trace functional.
inline DensityMatrix steady_state(const LindbladSystem& sys, const SteadyStateOptions& opt = {}) {
  if (!sys.dissipative()) {
    throw DegeneracyError("steady_state: system has no dissipation, steady state is not unique");
  }
  const auto d = static_cast<Eigen::Index>(sys.dim());
  if (sys.dim() > opt.max_dim) {
    throw ConfigError("steady_state: dimension " + std::to_string(d) + " exceeds dense Liouvillian limit " +
                      std::to_string(opt.max_dim));
  }
  const CMatrix l = liouvillian(sys);
  CMatrix m = l;
  m.row(0).setZero();
  for (Eigen::Index i = 0; i < d; ++i) m(0, i * d + i) = 1.0;
  CVector rhs = CVector::Zero(d * d);
  rhs(0) = 1.0;

  Eigen::PartialPivLU<CMatrix> lu(m);
  // The rcond estimate can miss exactly zero pivots, so check those as well.
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double rcond = std::min(lu.rcond(), pivots.minCoeff() / pivots.maxCoeff());
  if (!(rcond > opt.rcond_floor)) {
    throw DegeneracyError("steady_state: Liouvillian is degenerate (rcond " + std::to_string(rcond) +
                          "), steady state is not unique");
  }
  CVector x = lu.solve(rhs);
  // One step of iterative refinement.
  x += lu.solve(rhs - m * x);

  const double resid = (l * x).norm();
  const double lnorm = l.norm();
  if (!(resid <= opt.residual_tolerance * lnorm)) {
    throw SolverError("steady_state: residual " + std::to_string(resid) + " above tolerance");
  }
  CMatrix rho = Eigen::Map<CMatrix>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  try {
    return DensityMatrix::from_matrix(std::move(rho));
  } catch (const ConfigError& e) {
    throw SolverError(std::string("steady_state: result violates density-matrix invariants: ") + e.what());
  }
}

}  // namespace cqed
