// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

namespace {

using namespace cqed;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

Measured m(double v, double s) { return Measured(v, s); }

Verdict cooperativity_regression() {
  const auto c = derive::cooperativity(m(4.9, 0.3), m(49.7, 2.0), m(1.36, 0.06));
  return {std::abs(c.value - 1.42) <= 0.01, fmt("C = %.4f +/- %.3f", c.value, c.sigma)};
}

Verdict beta_regression() {
  struct Row {
    double tau_on, s_on, tau_off, s_off, printed_beta, printed_sigma, printed_ratio;
  };
  const std::vector<Row> rows{{0.340, 0.017, 1.88, 0.02, 82.4, 1.0, 5.5},
                              {0.208, 0.011, 1.79, 0.02, 88.6, 0.7, 8.6},
                              {0.194, 0.008, 1.84, 0.04, 89.7, 0.6, 9.5},
                              {0.158, 0.003, 1.70, 0.02, 91.0, 0.3, 10.8}};
  bool ok = true;
  std::string detail;
  for (const auto& r : rows) {
    const auto b = derive::beta_factor(m(r.tau_on, r.s_on), m(r.tau_off, r.s_off));
    const auto ratio = derive::lifetime_ratio(m(r.tau_on, r.s_on), m(r.tau_off, r.s_off));
    const double beta = 100.0 * b.beta.value;
    const double tol = std::max(r.printed_sigma, 0.5);
    ok = ok && std::abs(beta - r.printed_beta) <= tol && std::abs(ratio.value - r.printed_ratio) <= 0.1;
    detail += fmt("%.2f%%(%.1f) r=%.2f(%.1f) ", beta, r.printed_beta, ratio.value, r.printed_ratio);
  }
  return {ok, detail};
}

Verdict min_purcell_regression() {
  const auto f = derive::min_purcell(m(9.5, 0.6), 0.325);
  return {std::abs(f.value - 26.15) <= 0.1 && std::abs(f.sigma - 1.85) <= 0.1 && std::abs(f.value - 26.1) <= 0.1 &&
              std::abs(f.sigma - 1.8) <= 0.1,
          fmt("F_min = %.3f +/- %.3f", f.value, f.sigma)};
}

Verdict strong_coupling_projection() {
  const auto now = derive::strong_coupling_threshold(4.9, 49.7, 1.36);
  const auto better = derive::strong_coupling_threshold(4.9 * std::sqrt(1.5), 49.7 / 2.0, 1.36);
  return {now.n_emitters_needed == 7 && better.is_strong && better.n_emitters_needed == 1,
          fmt("N = %d (threshold %.2f GHz); improved: strong=%d N=%d", now.n_emitters_needed, now.threshold_ghz,
              better.is_strong ? 1 : 0, better.n_emitters_needed)};
}

Verdict consistency_checks() {
  const double q = derive::q_kappa_convert(m(49.7, 0.0), 737.0, derive::QKappaDirection::kappa_to_q).value;
  const double ratio = 304.0 / derive::fourier_limited_linewidth_mhz(1.88);
  const double rate = derive::emission_rate_into_cavity(0.8946, 0.194);
  derive::CavityRecord cav;
  cav.q_factor = 8300;
  cav.mode_volume_norm = 1.8;
  cav.lambda_c_nm = 737.0;
  cav.refractive_index = 2.402;
  const double f = derive::theoretical_purcell(cav);
  return {q >= 8000 && q <= 8400 && ratio >= 3.4 && ratio <= 3.7 && rate >= 0.72 && rate <= 0.75 &&
              std::abs(f - 350.0) <= 1.0,
          fmt("Q = %.0f, linewidth ratio = %.3f, emission rate = %.4f GHz, F = %.2f", q, ratio, rate, f)};
}

Verdict solver_properties() {
  std::mt19937_64 rng(20240601);
  double worst_trace = 0.0, worst_herm = 0.0, worst_neg = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t dim = 2 + static_cast<std::size_t>(i % 15);
    const auto sys = test::random_system(dim, rng);
    const auto rho0 = test::random_density(dim, rng);
    for (const auto& s : evolve(sys, rho0, 1.5, uniform_time_grid(1.5, 10))) {
      const auto d = s.rho.diagnostics();
      worst_trace = std::max(worst_trace, d.trace_error);
      worst_herm = std::max(worst_herm, d.hermiticity_error);
      worst_neg = std::max(worst_neg, -d.min_eigenvalue);
    }
  }

  SystemParams closed;
  closed.g = 1.3;
  HilbertConfig one;
  one.n_max = 2;
  const auto rabi_sys = build_system(one, closed);
  const auto rho_e = DensityMatrix::basis_state(rabi_sys.dim(), one.index(1, 0));
  const double t_zero = 1.0 / (4.0 * closed.g);
  const double pe = expectation(ops::excited_projector(one, 0), evolve(rabi_sys, rho_e, t_zero, {t_zero}).back().rho).real();

  double worst_ss = 0.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n_max = 1; n_max <= 5; ++n_max) {
    SystemParams p;
    p.g = 0.5 + 1.5 * u(rng);
    p.kappa = 1.0 + 4.0 * u(rng);
    p.gamma_rad = 0.3 + 0.5 * u(rng);
    p.gamma_deph = 0.4 * u(rng);
    p.delta_c = 2.0 * u(rng) - 1.0;
    p.delta_a = 2.0 * u(rng) - 1.0;
    p.omega_drive = 0.2 + 0.6 * u(rng);
    HilbertConfig cfg;
    cfg.n_max = n_max;
    const auto sys = build_system(cfg, p);
    const auto ss = steady_state(sys);
    const double t_final = 50.0 / units::angular(std::min(p.kappa, p.gamma_rad));
    const auto late = evolve(sys, DensityMatrix::basis_state(sys.dim(), 0), t_final, {}).back().rho;
    worst_ss = std::max(worst_ss, trace_distance(late, ss));
  }

  const bool ok = worst_trace < 1e-9 && worst_herm < 1e-9 && worst_neg < 1e-7 && std::abs(pe) < 1e-4 && worst_ss < 1e-6;
  return {ok, fmt("trace err %.1e, herm err %.1e, negativity %.1e, Rabi P_e(1/4g) = %.1e, steady-state dist %.1e",
                  worst_trace, worst_herm, worst_neg, pe, worst_ss)};
}

Verdict spectrum_oracle() {
  SystemParams p;
  p.g = 4.9;
  p.kappa = 49.7;
  p.gamma_rad = 1.36;
  p.delta_a = 3.0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double nu = -80.0 + 160.0 * i / 19.0;
    const double analytic = spectra::dit_transmission_at(p, nu);
    const double numeric = test::master_equation_transmission(p, nu, 0.01);
    worst = std::max(worst, std::abs(numeric - analytic) / analytic);
  }
  double worst_peak = 0.0;
  for (double g : {0.5, 1.0, 2.5, 4.9, 10.0}) {
    for (double kappa : {5.0, 20.0, 49.7, 100.0, 300.0}) {
      for (double gamma : {0.1, 0.5, 1.36, 3.0, 10.0}) {
        SystemParams q;
        q.g = g;
        q.kappa = kappa;
        q.gamma_rad = gamma;
        const double c = 4.0 * g * g / (kappa * gamma);
        worst_peak = std::max(worst_peak, std::abs(spectra::dit_transmission_at(q, 0.0) - std::pow(c / (1.0 + c), 2)));
      }
    }
  }
  return {worst < 0.02 && worst_peak < 1e-10,
          fmt("max relative deviation %.2e over 20 probes, peak identity error %.1e", worst, worst_peak)};
}

Verdict bad_cavity_dynamics() {
  HilbertConfig cfg;
  cfg.n_max = 1;
  bool ok = true;
  std::string detail;
  auto measure = [&](SystemParams p) {
    const double expected = dynamics::effective_rate_bad_cavity(p).rate_ghz;
    const double tau = 1.0 / units::angular(expected);
    const auto trace = dynamics::simulate_decay(cfg, p, 4.0 * tau, tau / 40.0);
    const double got = dynamics::fit_lifetime(trace, dynamics::loading_transient_ns(p.kappa)).rate_ghz.value;
    return std::pair{got, expected};
  };
  for (double ratio : {20.0, 50.0, 100.0}) {
    SystemParams p;
    p.g = 1.0;
    p.kappa = ratio;
    p.gamma_rad = 0.05;
    const auto [got, expected] = measure(p);
    ok = ok && std::abs(got - expected) <= 0.05 * expected;
    detail += fmt("k/g=%.0f: %.4f vs %.4f; ", ratio, got, expected);
  }
  for (double delta : {5.0, 10.0, 20.0}) {
    SystemParams p;
    p.g = 1.0;
    p.kappa = 20.0;
    p.gamma_rad = 0.05;
    p.delta_a = delta;
    const auto [got, expected] = measure(p);
    const double enhanced = expected - p.gamma_rad;
    ok = ok && std::abs((got - p.gamma_rad) - enhanced) <= 0.05 * enhanced;
    detail += fmt("D=%.0f: %.4f vs %.4f; ", delta, got - p.gamma_rad, enhanced);
  }
  return {ok, detail};
}

Verdict fit_recovery() {
  // Lifetime traces with Poisson counts.
  int decay_covered = 0;
  const double tau = 0.194;
  DecayTrace pop;
  pop.dt = 0.005;
  for (int i = 0; i <= 300; ++i) pop.values.push_back(std::exp(-pop.time(static_cast<std::size_t>(i)) / tau));
  int decay_2sigma = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto fit = dynamics::fit_lifetime(dynamics::to_counts(pop, 1e4, seed));
    const double z = std::abs(fit.tau_ns.value - tau) / fit.tau_ns.sigma;
    if (fit.fit.converged && z <= 3.0) ++decay_covered;
    if (fit.fit.converged && z <= 2.0) ++decay_2sigma;
  }

  // Transmission spectra with 1% Gaussian noise; g, kappa and gamma all free.
  const std::vector<double> truth{0.0, 0.0, 4.9, 49.7, 1.36, 1.0, 1.0, 0.0};
  std::vector<double> grid;
  for (int i = 0; i < 401; ++i) grid.push_back(-100.0 + 0.5 * i);
  auto dit_model = [&](double scale) {
    fit::FitModel model;
    model.kind = fit::ModelKind::dit;
    model.fixed_params["kappa_wg_fraction"] = 1.0;
    model.fixed_params["offset"] = 0.0;
    const std::vector<std::string> free{"nu_c", "nu_a", "g", "kappa", "gamma", "amplitude"};
    for (const auto& label : free) {
      const auto& labels = fit::parameter_labels(fit::ModelKind::dit);
      const auto idx = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) - labels.begin());
      const bool positive = label == "g" || label == "kappa" || label == "gamma";
      double start = truth[idx] * scale;
      if (label == "nu_c") start = 1.0;
      if (label == "nu_a") start = -0.5;
      model.free_params.push_back({label, start, positive ? std::optional<double>(0.0) : std::nullopt, std::nullopt});
    }
    return model;
  };
  int dit_covered = 0, dit_2sigma = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    fit::FitData data;
    data.x = grid;
    for (double x : grid) data.y.push_back(fit::model_value(fit::ModelKind::dit, truth, x) + noise(rng));
    data.sigma = std::vector<double>(grid.size(), 0.01);
    const auto r = fit::lm_fit(dit_model(seed % 2 ? 1.15 : 0.85), data);
    double z = 0.0;
    for (const char* label : {"g", "kappa", "gamma"}) {
      const auto idx = static_cast<std::size_t>(
          std::find(fit::parameter_labels(fit::ModelKind::dit).begin(), fit::parameter_labels(fit::ModelKind::dit).end(),
                    label) -
          fit::parameter_labels(fit::ModelKind::dit).begin());
      z = std::max(z, std::abs(r.param(label).value - truth[idx]) / r.param(label).sigma);
    }
    if (r.converged && z <= 3.0) ++dit_covered;
    if (r.converged && z <= 2.0) ++dit_2sigma;
  }

  // Noiseless recoveries.
  double worst_exact = 0.0;
  {
    fit::FitData data;
    data.x = grid;
    for (double x : grid) data.y.push_back(fit::model_value(fit::ModelKind::dit, truth, x));
    const auto r = fit::lm_fit(dit_model(1.3), data);
    for (const char* label : {"g", "kappa", "gamma"}) {
      const double v = r.param(label).value;
      const double t = label == std::string("g") ? 4.9 : label == std::string("kappa") ? 49.7 : 1.36;
      worst_exact = std::max(worst_exact, std::abs(v - t) / t);
    }
    const auto lt = dynamics::fit_lifetime(pop);
    worst_exact = std::max(worst_exact, std::abs(lt.tau_ns.value - tau) / tau);
  }

  return {decay_covered >= 95 && dit_covered >= 95 && worst_exact <= 1e-6,
          fmt("3-sigma coverage: exp_decay %d/100, dit %d/100 (2-sigma: %d, %d); noiseless rel. error %.1e",
              decay_covered, dit_covered, decay_2sigma, dit_2sigma, worst_exact)};
}

Verdict io_round_trips() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool exact = true;
  auto twice = [&](auto write, auto read, const auto& value) {
    std::ostringstream first;
    write(first, value);
    std::istringstream in(first.str());
    std::ostringstream second;
    write(second, read(in, "mem"));
    exact = exact && first.str() == second.str();
  };

  SpectrumSeries trans;
  for (int i = 0; i < 200; ++i) {
    trans.axis.push_back(-50.0 + 0.5 * i + 1e-3 * u(rng));
    trans.values.push_back(u(rng));
  }
  twice(io::write_spectrum_csv, io::read_spectrum_csv, trans);
  SpectrumSeries counts;
  counts.axis_kind = AxisKind::wavelength_nm;
  counts.kind = SeriesKind::counts;
  for (int i = 0; i < 200; ++i) {
    counts.axis.push_back(736.0 + 0.013 * i);
    counts.values.push_back(std::floor(1000 * u(rng)));
  }
  twice(io::write_spectrum_csv, io::read_spectrum_csv, counts);
  DecayTrace trace;
  trace.t0 = -0.02;
  trace.dt = 0.0037;
  for (int i = 0; i < 500; ++i) trace.values.push_back(1e4 * u(rng));
  twice(io::write_decay_csv, [](std::istream& in, const std::string& s) { return io::read_decay_csv(in, s); }, trace);
  derive::SiVSpec siv;
  siv.transition_freqs_ghz = {260.0, 105.0, 0.0, -155.0};
  twice(io::write_tuning_map_csv, io::read_tuning_map_csv,
        spectra::pl_tuning_map(siv, 49.7, {1.0, 42.4, 1.0, 1.0}, {-200.0, -100.0, 0.0, 150.0}, AxisKind::frequency_ghz));

  // Streak image with a 194 ps decay in two columns on a flat background.
  StreakImage img;
  img.rows = 300;
  img.cols = 8;
  img.dt_ns = 0.005;
  img.lambda0_nm = 736.0;
  img.dlambda_nm = 0.1;
  std::poisson_distribution<int> background(2.0);
  for (std::size_t r = 0; r < img.rows; ++r) {
    const double mean = 4000.0 * std::exp(-static_cast<double>(r) * img.dt_ns / 0.194);
    for (std::size_t c = 0; c < img.cols; ++c) {
      const bool line = c == 3 || c == 4;
      img.counts.push_back(background(rng) + (line ? std::poisson_distribution<long long>(mean)(rng) : 0));
    }
  }
  twice(io::write_streak, io::read_streak, img);

  std::ostringstream file;
  io::write_streak(file, img);
  std::istringstream in(file.str());
  const auto binned = io::bin_streak_region(io::read_streak(in, "streak"), 736.25, 736.45);
  const auto fit = dynamics::fit_lifetime(binned);
  const double z = std::abs(fit.tau_ns.value - 0.194) / fit.tau_ns.sigma;
  return {exact && z <= 3.0, fmt("round trips byte-exact: %s; streak fit tau = %.4f +/- %.4f ns (%.2f sigma)",
                                 exact ? "yes" : "no", fit.tau_ns.value, fit.tau_ns.sigma, z)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"cooperativity regression", cooperativity_regression},
      {"beta regression", beta_regression},
      {"F_min regression", min_purcell_regression},
      {"strong-coupling projections", strong_coupling_projection},
      {"consistency checks", consistency_checks},
      {"solver property suite", solver_properties},
      {"spectrum oracle", spectrum_oracle},
      {"bad-cavity dynamics", bad_cavity_dynamics},
      {"fit recovery", fit_recovery},
      {"I/O", io_round_trips}};
  const std::vector<double> budget_s{1, 1, 1, 1, 1, 60, 60, 60, 120, 60};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > budget_s[i]) {
      v.pass = false;
      v.detail += fmt(" [over time budget %.0f s]", budget_s[i]);
    }
    if (!v.pass) ++failures;
    std::printf("%s %zu %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str(),
                secs);
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
