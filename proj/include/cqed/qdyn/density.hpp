#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <string>

#include "cqed/qdyn/system.hpp"

namespace cqed {

struct DensityDiagnostics {
  double trace_error = 0.0;       // |tr(rho) - 1|
  double hermiticity_error = 0.0; // max |rho - rho^dag|
  double min_eigenvalue = 0.0;
};

inline DensityDiagnostics diagnose(const CMatrix& m) {
  DensityDiagnostics d;
  d.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
  d.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

/// Hermitian, unit-trace, positive semidefinite matrix (up to a tolerance).
class DensityMatrix {
 public:
  static constexpr double kDefaultTolerance = 1e-9;

  /// Validates the invariants at `tol` and throws ConfigError on violation.
  static DensityMatrix from_matrix(CMatrix m, double tol = kDefaultTolerance) {
    if (m.rows() != m.cols() || m.rows() == 0) throw ShapeError("DensityMatrix: must be square");
    const auto diag = diagnose(m);
    if (diag.trace_error > tol || diag.hermiticity_error > tol || diag.min_eigenvalue < -tol) {
      throw ConfigError("DensityMatrix: invariants violated (trace err " +
                        std::to_string(diag.trace_error) + ", herm err " +
                        std::to_string(diag.hermiticity_error) + ", min eig " +
                        std::to_string(diag.min_eigenvalue) + ")");
    }
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix pure(const CVector& psi) {
    const double n = psi.norm();
    if (n == 0.0) throw ConfigError("DensityMatrix::pure: zero vector");
    const CVector u = psi / n;
    return DensityMatrix(u * u.adjoint());
  }

  static DensityMatrix basis_state(std::size_t dim, std::size_t index) {
    if (index >= dim) throw ConfigError("DensityMatrix::basis_state: index out of range");
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return DensityMatrix(std::move(m));
  }

  const CMatrix& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  Complex trace() const { return m_.trace(); }
  double purity() const { return (m_ * m_).trace().real(); }
  DensityDiagnostics diagnostics() const { return diagnose(m_); }

 private:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// tr(op rho).
inline Complex expectation(const CMatrix& op, const DensityMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  if (op.rows() != d || op.cols() != d) {
    throw ShapeError("expectation: operator " + std::to_string(op.rows()) + "x" +
                     std::to_string(op.cols()) + " vs state dim " + std::to_string(d));
  }
  // tr(A B) = sum_ij A_ij B_ji
  return (op.cwiseProduct(rho.matrix().transpose())).sum();
}

/// Trace distance 1/2 ||a - b||_1 between two density matrices.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ShapeError("trace_distance: dimension mismatch");
  const CMatrix diff = a.matrix() - b.matrix();
  const CMatrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace cqed
