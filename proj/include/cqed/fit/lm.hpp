#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cqed/fit/models.hpp"
#include "cqed/measured.hpp"

namespace cqed::fit {

/// Observations to fit. `sigma` holds per-point 1-sigma errors when known.
struct FitData {
  std::vector<double> x;
  std::vector<double> y;
  std::optional<std::vector<double>> sigma;
  std::string x_unit;
  std::string y_unit;

  void validate() const {
    if (x.size() != y.size()) throw ConfigError("FitData: x/y length mismatch");
    if (sigma && sigma->size() != y.size()) throw ConfigError("FitData: sigma length mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ConfigError("FitData: non-finite point " + std::to_string(i));
      if (sigma && !((*sigma)[i] > 0.0)) throw ConfigError("FitData: sigma must be > 0 at point " + std::to_string(i));
    }
  }
};

struct FitOptions {
  int max_iterations = 500;
  /// Converged when the relative parameter step falls below this.
  double xtol = 1e-8;
  /// Converged when the relative chi^2 improvement of an accepted step falls below this.
  double ftol = 1e-10;
  /// Reciprocal condition of the scaled normal matrix treated as singular.
  double singular_rcond = 1e-14;
};

struct FitResult {
  ModelKind kind = ModelKind::lorentzian;
  /// Every model parameter in canonical order; fixed ones carry sigma 0.
  std::vector<std::pair<std::string, Measured>> params;
  std::vector<std::string> free_labels;
  double chi2 = 0.0;
  double chi2_reduced = 0.0;
  Eigen::MatrixXd covariance;  // free parameters, in free_labels order
  bool converged = false;
  int n_iterations = 0;
  std::vector<double> residuals;  // y - model, unweighted
  std::vector<std::string> warnings;

  const Measured& param(std::string_view label) const {
    for (const auto& [l, m] : params) {
      if (l == label) return m;
    }
    throw ConfigError("FitResult: no parameter '" + std::string(label) + "'");
  }

  bool is_free(std::string_view label) const {
    return std::find(free_labels.begin(), free_labels.end(), label) != free_labels.end();
  }
};

namespace detail {

// Bounded parameters are fitted in an unconstrained coordinate u:
//   lower only:  p = lo + e^u        upper only: p = hi - e^u
//   both:        p = lo + (hi - lo) / (1 + e^-u)
struct Transform {
  std::optional<double> lo, hi;

  double to_external(double u) const {
    if (lo && hi) return *lo + (*hi - *lo) / (1.0 + std::exp(-u));
    if (lo) return *lo + std::exp(u);
    if (hi) return *hi - std::exp(u);
    return u;
  }
  double to_internal(double p, const std::string& label) const {
    if ((lo && !(p > *lo)) || (hi && !(p < *hi))) {
      throw InvalidModelError("initial value of '" + label + "' is not strictly inside its bounds");
    }
    if (lo && hi) return std::log((p - *lo) / (*hi - p));
    if (lo) return std::log(p - *lo);
    if (hi) return std::log(*hi - p);
    return p;
  }
  /// dp/du
  double derivative(double u) const {
    if (lo && hi) {
      const double s = 1.0 / (1.0 + std::exp(-u));
      return (*hi - *lo) * s * (1.0 - s);
    }
    if (lo) return std::exp(u);
    if (hi) return -std::exp(u);
    return 1.0;
  }
};

inline std::string describe_direction(const std::vector<std::string>& labels, const Eigen::VectorXd& v) {
  std::ostringstream os;
  bool first = true;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) < 0.1) continue;
    if (!first) os << (v(i) < 0 ? " - " : " + ");
    else if (v(i) < 0) os << "-";
    os << std::abs(v(i)) << "*" << labels[static_cast<std::size_t>(i)];
    first = false;
  }
  return os.str();
}

/// Throws DegenerateFitError when the normal matrix J^T J is singular.
inline void check_identifiable(const Eigen::MatrixXd& jtj, const std::vector<std::string>& labels, double rcond) {
  const Eigen::Index m = jtj.rows();
  Eigen::VectorXd d(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    d(j) = jtj(j, j);
    if (!(d(j) > 0.0)) {
      throw DegenerateFitError(labels[static_cast<std::size_t>(j)],
                               "degenerate fit: data do not constrain '" + labels[static_cast<std::size_t>(j)] + "'");
    }
  }
  const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = s.asDiagonal() * jtj * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(m - 1);
  if (!(lo > rcond * hi)) {
    Eigen::VectorXd v = s.asDiagonal() * es.eigenvectors().col(0);
    v.normalize();
    const std::string dir = describe_direction(labels, v);
    throw DegenerateFitError(dir, "degenerate fit: normal equations singular along " + dir);
  }
}

}  // namespace detail

/// Levenberg-Marquardt least squares of `model` against `data`.
///
/// Jacobian by central differences (step max(1e-6, 1e-6 |p|)) chained through
/// the bound transforms; damping lambda * diag(J^T J), updated from the gain
/// ratio. Parameter sigmas are sqrt(diag((J^T W J)^-1) * chi2_reduced).
inline FitResult lm_fit(const FitModel& model, const FitData& data, const FitOptions& opt = {}) {
  model.validate();
  data.validate();
  const std::size_t m = model.free_count();
  const std::size_t n = data.x.size();
  if (n < 2 * m) {
    throw ConfigError("lm_fit: need at least " + std::to_string(2 * m) + " points for " + std::to_string(m) +
                      " free parameters, got " + std::to_string(n));
  }

  std::vector<std::string> labels;
  std::vector<detail::Transform> tr;
  Eigen::VectorXd u(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    const auto& f = model.free_params[j];
    labels.push_back(f.label);
    tr.push_back({f.lower, f.upper});
    u(static_cast<Eigen::Index>(j)) = tr[j].to_internal(f.initial, f.label);
  }

  Eigen::VectorXd w = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  if (data.sigma) {
    for (std::size_t i = 0; i < n; ++i) w(static_cast<Eigen::Index>(i)) = 1.0 / (*data.sigma)[i];
  }
  const Eigen::Map<const Eigen::VectorXd> yv(data.y.data(), static_cast<Eigen::Index>(n));

  auto external = [&](const Eigen::VectorXd& uu) {
    std::vector<double> p(m);
    for (std::size_t j = 0; j < m; ++j) p[j] = tr[j].to_external(uu(static_cast<Eigen::Index>(j)));
    return p;
  };
  // Weighted residuals (y - f) / sigma. Empty optional when the model rejects p.
  auto residuals = [&](const std::vector<double>& p) -> std::optional<Eigen::VectorXd> {
    try {
      const auto f = evaluate_model(model, p, data.x);
      Eigen::VectorXd r(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        r(k) = (yv(k) - f[i]) * w(k);
        if (!std::isfinite(r(k))) return std::nullopt;
      }
      return r;
    } catch (const InvalidModelError&) {
      return std::nullopt;
    }
  };
  // d r / d u
  auto jacobian = [&](const Eigen::VectorXd& uu, const std::vector<double>& p) {
    Eigen::MatrixXd j = model_jacobian(model, p, data.x);
    for (std::size_t c = 0; c < m; ++c) {
      j.col(static_cast<Eigen::Index>(c)) *= -tr[c].derivative(uu(static_cast<Eigen::Index>(c)));
    }
    return Eigen::MatrixXd(w.asDiagonal() * j);
  };

  std::vector<double> p = external(u);
  auto r0 = residuals(p);
  if (!r0) throw InvalidModelError("lm_fit: model cannot be evaluated at the initial guess");
  Eigen::VectorXd r = *r0;
  double cost = 0.5 * r.squaredNorm();

  Eigen::MatrixXd jac = jacobian(u, p);
  {
    Eigen::MatrixXd jtj0 = jac.transpose() * jac;
    for (std::size_t c = 0; c < m; ++c) {
      if (!(jtj0(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) > 0.0)) {
        throw DegenerateFitError(labels[c], "degenerate fit: data do not constrain '" + labels[c] + "'");
      }
    }
  }

  double lambda = -1.0;
  double nu = 2.0;
  bool converged = false;
  int iter = 0;
  bool need_jacobian = false;

  while (iter < opt.max_iterations) {
    ++iter;
    if (need_jacobian) {
      jac = jacobian(u, p);
      need_jacobian = false;
    }
    const Eigen::MatrixXd a = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    Eigen::VectorXd diag = a.diagonal();
    const double dmax = diag.maxCoeff();
    diag = diag.cwiseMax(1e-12 * dmax);
    if (lambda < 0.0) lambda = 1e-3;

    if (cost == 0.0 || grad.lpNorm<Eigen::Infinity>() == 0.0) {
      converged = true;
      break;
    }

    const Eigen::MatrixXd damped = a + lambda * Eigen::MatrixXd(diag.asDiagonal());
    const Eigen::VectorXd delta = damped.ldlt().solve(-grad);
    if (!delta.allFinite()) {
      lambda *= nu;
      nu *= 2.0;
      continue;
    }
    const bool tiny_step = delta.norm() <= opt.xtol * (u.norm() + opt.xtol);

    const Eigen::VectorXd u_new = u + delta;
    const std::vector<double> p_new = external(u_new);
    const auto r_new = residuals(p_new);
    const double cost_new = r_new ? 0.5 * r_new->squaredNorm() : std::numeric_limits<double>::infinity();
    const double predicted = 0.5 * delta.dot(lambda * diag.cwiseProduct(delta) - grad);
    const double rho = predicted > 0.0 ? (cost - cost_new) / predicted : -1.0;

    if (rho > 0.0) {
      const double improvement = (cost - cost_new) / cost;
      u = u_new;
      p = p_new;
      r = *r_new;
      cost = cost_new;
      need_jacobian = true;
      lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (tiny_step || improvement < opt.ftol) {
        converged = true;
        break;
      }
    } else {
      if (tiny_step) {
        converged = true;
        break;
      }
      lambda *= nu;
      nu *= 2.0;
    }
  }

  FitResult out;
  out.kind = model.kind;
  out.free_labels = labels;
  out.converged = converged;
  out.n_iterations = iter;
  const auto dof = static_cast<double>(n - m);
  out.chi2 = 2.0 * cost;
  out.chi2_reduced = out.chi2 / dof;

  const auto f = evaluate_model(model, p, data.x);
  out.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.residuals[i] = data.y[i] - f[i];

  // Covariance in external coordinates.
  const Eigen::MatrixXd jext = w.asDiagonal() * model_jacobian(model, p, data.x);
  const Eigen::MatrixXd jtj = jext.transpose() * jext;
  detail::check_identifiable(jtj, labels, opt.singular_rcond);
  out.covariance = jtj.ldlt().solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m))) *
                   out.chi2_reduced;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();

  const std::vector<double> full = model.assemble(p);
  const auto& all = parameter_labels(model.kind);
  for (std::size_t i = 0; i < all.size(); ++i) {
    double sigma = 0.0;
    if (auto it = std::find(labels.begin(), labels.end(), all[i]); it != labels.end()) {
      const auto k = static_cast<Eigen::Index>(it - labels.begin());
      sigma = std::sqrt(std::max(0.0, out.covariance(k, k)));
    }
    out.params.emplace_back(all[i], Measured(full[i], sigma, parameter_unit(model.kind, all[i], data.x_unit, data.y_unit)));
  }
  if (!converged) out.warnings.push_back("no convergence after " + std::to_string(iter) + " iterations");
  return out;
}

/// Fit linewidth(P) = linewidth0 sqrt(1 + P / p_sat) and report linewidth0 as
/// the zero-power linewidth. Power units are the caller's; linewidth in MHz.
inline FitResult fit_linewidth_extrapolation(const std::vector<std::pair<double, double>>& points,
                                             const FitOptions& opt = {}) {
  if (points.size() < 3) throw ConfigError("fit_linewidth_extrapolation: need at least 3 points");
  FitData data;
  data.x_unit = "uW";
  data.y_unit = "MHz";
  for (const auto& [pw, lw] : points) {
    if (!(pw >= 0.0)) throw ConfigError("fit_linewidth_extrapolation: powers must be >= 0");
    if (!(lw > 0.0)) throw ConfigError("fit_linewidth_extrapolation: linewidths must be > 0");
    data.x.push_back(pw);
    data.y.push_back(lw);
  }
  const auto [ymin_it, ymax_it] = std::minmax_element(data.y.begin(), data.y.end());
  const double ymin = *ymin_it, ymax = *ymax_it;

  auto flat_result = [&](const std::string& why) {
    double mean = 0.0;
    for (double y : data.y) mean += y;
    mean /= static_cast<double>(data.y.size());
    double var = 0.0;
    for (double y : data.y) var += (y - mean) * (y - mean);
    const double n = static_cast<double>(data.y.size());
    FitResult out;
    out.kind = ModelKind::power_broadening;
    out.free_labels = {"linewidth0"};
    out.params = {{"linewidth0", Measured(mean, std::sqrt(var / (n - 1.0) / n), "MHz")},
                  {"p_sat", Measured(std::numeric_limits<double>::infinity(), 0.0, "uW")}};
    out.converged = true;
    out.chi2 = var;
    out.chi2_reduced = var / (n - 1.0);
    out.covariance = Eigen::MatrixXd::Constant(1, 1, var / (n - 1.0) / n);
    for (double y : data.y) out.residuals.push_back(y - mean);
    out.warnings.push_back("p_sat unidentifiable: " + why);
    return out;
  };

  if (ymax - ymin <= 1e-12 * ymax) return flat_result("all linewidths equal");

  // Initial guesses: lowest-power point for linewidth0, then p_sat from the top point.
  std::size_t lo_i = 0, hi_i = 0;
  for (std::size_t i = 1; i < data.x.size(); ++i) {
    if (data.x[i] < data.x[lo_i]) lo_i = i;
    if (data.x[i] > data.x[hi_i]) hi_i = i;
  }
  const double w0 = data.y[lo_i];
  const double ratio2 = (data.y[hi_i] / w0) * (data.y[hi_i] / w0);
  double psat = ratio2 > 1.0 ? (data.x[hi_i] - data.x[lo_i]) / (ratio2 - 1.0) : data.x[hi_i];
  if (!(psat > 0.0)) psat = 1.0;

  FitModel model;
  model.kind = ModelKind::power_broadening;
  model.free_params = {{"linewidth0", w0, 0.0, std::nullopt}, {"p_sat", psat, 0.0, std::nullopt}};
  try {
    return lm_fit(model, data, opt);
  } catch (const DegenerateFitError& e) {
    return flat_result(e.what());
  }
}

/// Structured text report: header comments, then one `label value sigma unit`
/// line per parameter.
inline std::string format_report(const FitResult& r) {
  std::ostringstream os;
  os.precision(10);
  os << "# model " << to_string(r.kind) << '\n';
  os << "# converged " << (r.converged ? "true" : "false") << '\n';
  os << "# iterations " << r.n_iterations << '\n';
  os << "# chi2_reduced " << r.chi2_reduced << '\n';
  os << "# points " << r.residuals.size() << '\n';
  for (const auto& w : r.warnings) os << "# warning " << w << '\n';
  for (const auto& [label, m] : r.params) {
    os << label << ' ' << m.value << ' ' << m.sigma << ' ' << (m.unit.empty() ? "-" : m.unit)
       << (r.is_free(label) ? "" : " fixed") << '\n';
  }
  return os.str();
}

/// Machine-readable CSV: label,value,sigma,unit,free.
inline std::string format_report_csv(const FitResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "label,value,sigma,unit,free\n";
  for (const auto& [label, m] : r.params) {
    os << label << ',' << m.value << ',' << m.sigma << ',' << m.unit << ',' << (r.is_free(label) ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace cqed::fit
