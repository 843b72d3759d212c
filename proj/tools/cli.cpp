#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cqed/cqed.hpp"

namespace cqed::cli {
namespace {

using io::RunConfig;
using KeySet = std::set<std::string>;

const KeySet kPhysicsKeys{"g",       "kappa",   "kappa_wg_fraction", "gamma_rad", "gamma_deph",
                          "delta_c", "delta_a", "omega_drive",       "n_max",     "n_emitters"};

KeySet with_physics(KeySet extra) {
  extra.insert(kPhysicsKeys.begin(), kPhysicsKeys.end());
  extra.insert("out");
  return extra;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

SystemParams physics_params(const RunConfig& cfg) {
  SystemParams p;
  p.g = cfg.get_double("g", 0.0);
  p.kappa = cfg.require_double("kappa");
  p.kappa_wg_fraction = cfg.get_double("kappa_wg_fraction", 1.0);
  p.gamma_rad = cfg.get_double("gamma_rad", 0.0);
  p.gamma_deph = cfg.get_double("gamma_deph", 0.0);
  p.delta_c = cfg.get_double("delta_c", 0.0);
  p.delta_a = cfg.get_double("delta_a", 0.0);
  p.omega_drive = cfg.get_double("omega_drive", 0.0);
  p.validate();
  return p;
}

HilbertConfig hilbert_config(const RunConfig& cfg) {
  HilbertConfig h;
  h.n_max = static_cast<int>(cfg.get_int("n_max", h.n_max));
  h.n_emitters = static_cast<int>(cfg.get_int("n_emitters", h.n_emitters));
  h.validate();
  return h;
}

std::vector<double> linear_grid(double lo, double hi, long long points, const std::string& what) {
  if (points < 2) throw ConfigError(what + ": points must be >= 2");
  if (!(hi > lo)) throw ConfigError(what + ": upper bound must exceed lower bound");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (long long i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

std::optional<Measured> measured(const RunConfig& cfg, const std::string& key, const std::string& unit) {
  const auto v = cfg.get_double(key);
  if (!v) return std::nullopt;
  return Measured(*v, cfg.get_double(key + "_sigma", 0.0), unit);
}

// derive ---------------------------------------------------------------------

struct Row {
  std::string name;
  double value;
  std::optional<double> sigma;
  std::string unit;
  int decimals;
};

std::string cmd_derive(const RunConfig& cfg) {
  cfg.require_known({"g", "g_sigma", "kappa", "kappa_sigma", "gamma", "gamma_sigma", "tau_on", "tau_on_sigma",
                     "tau_off", "tau_off_sigma", "lifetime_ratio", "lifetime_ratio_sigma", "xi_max", "q_factor",
                     "mode_volume", "refractive_index", "lambda_nm", "linewidth_mhz", "linewidth_tau_ns", "improve_q", "improve_v",
                     "format", "out"});
  const std::string format = cfg.get_string("format").value_or("text");
  if (format != "text" && format != "csv") throw ConfigError("derive: format must be text or csv");

  std::vector<Row> rows;
  const auto g = measured(cfg, "g", "GHz");
  const auto kappa = measured(cfg, "kappa", "GHz");
  const auto gamma = measured(cfg, "gamma", "GHz");
  const auto tau_on = measured(cfg, "tau_on", "ns");
  const auto tau_off = measured(cfg, "tau_off", "ns");

  if (g && kappa && gamma) {
    const Measured c = derive::cooperativity(*g, *kappa, *gamma);
    rows.push_back({"C", c.value, c.sigma, "", 3});
    const auto now = derive::strong_coupling_threshold(g->value, kappa->value, gamma->value);
    rows.push_back({"strong_threshold", now.threshold_ghz, std::nullopt, "GHz", 3});
    rows.push_back({"N_strong", static_cast<double>(now.n_emitters_needed), std::nullopt, "", 0});
    rows.push_back({"is_strong", now.is_strong ? 1.0 : 0.0, std::nullopt, "", 0});
    const double iq = cfg.get_double("improve_q", 2.0);
    const double iv = cfg.get_double("improve_v", 1.5);
    if (!(iq > 0.0 && iv > 0.0)) throw ConfigError("derive: improve_q and improve_v must be > 0");
    const double g2 = g->value * std::sqrt(iv);
    const double k2 = kappa->value / iq;
    rows.push_back({"improved_g", g2, std::nullopt, "GHz", 3});
    rows.push_back({"improved_kappa", k2, std::nullopt, "GHz", 3});
    const auto better = derive::strong_coupling_threshold(g2, k2, gamma->value);
    rows.push_back({"improved_N_strong", static_cast<double>(better.n_emitters_needed), std::nullopt, "", 0});
    rows.push_back({"improved_is_strong", better.is_strong ? 1.0 : 0.0, std::nullopt, "", 0});
    if (const auto lam = cfg.get_double("lambda_nm")) {
      const Measured q = derive::q_kappa_convert(*kappa, *lam, derive::QKappaDirection::kappa_to_q);
      rows.push_back({"Q_from_kappa", q.value, q.sigma, "", 0});
    }
  }

  std::optional<Measured> ratio;
  if (tau_on && tau_off) {
    const auto beta = derive::beta_factor(*tau_on, *tau_off);
    if (beta.no_enhancement) throw NoEnhancementError("derive: tau_on > tau_off, no enhancement");
    rows.push_back({"beta", 100.0 * beta.beta.value, 100.0 * beta.beta.sigma, "%", 2});
    ratio = derive::lifetime_ratio(*tau_on, *tau_off);
    rows.push_back({"lifetime_ratio", ratio->value, ratio->sigma, "", 2});
    rows.push_back(
        {"emission_rate", derive::emission_rate_into_cavity(beta.beta.value, tau_on->value), std::nullopt, "GHz", 3});
  }
  if (const auto lw = cfg.get_double("linewidth_mhz")) {
    const auto tau = cfg.get_double("linewidth_tau_ns");
    if (!tau && !tau_off) throw ConfigError("derive: linewidth_mhz needs linewidth_tau_ns or tau_off");
    const double limit = derive::fourier_limited_linewidth_mhz(tau ? *tau : tau_off->value);
    rows.push_back({"fourier_limit", limit, std::nullopt, "MHz", 2});
    rows.push_back({"fourier_ratio", *lw / limit, std::nullopt, "", 2});
  }
  if (const auto explicit_ratio = measured(cfg, "lifetime_ratio", "")) ratio = explicit_ratio;
  if (const auto xi = cfg.get_double("xi_max")) {
    if (!ratio) throw ConfigError("derive: xi_max needs tau_on/tau_off or lifetime_ratio");
    const Measured f = derive::min_purcell(*ratio, *xi);
    rows.push_back({"F_min", f.value, f.sigma, "", 2});
  }
  const auto q = cfg.get_double("q_factor");
  const auto v = cfg.get_double("mode_volume");
  if (q && v) {
    derive::CavityRecord cav;
    cav.q_factor = *q;
    cav.mode_volume_norm = *v;
    cav.lambda_c_nm = cfg.get_double("lambda_nm", 1.0);
    cav.refractive_index = cfg.get_double("refractive_index", 1.0);
    rows.push_back({"F_theory", derive::theoretical_purcell(cav), std::nullopt, "", 1});
  } else if (q || v) {
    throw ConfigError("derive: q_factor and mode_volume go together");
  }
  if (rows.empty()) throw ConfigError("derive: nothing to compute; give g/kappa/gamma, tau_on/tau_off or q_factor/mode_volume");

  std::ostringstream os;
  if (format == "csv") {
    os << "quantity,value,sigma,unit\n";
    for (const auto& r : rows) {
      os << r.name << ',' << io::format_double(r.value) << ',' << (r.sigma ? io::format_double(*r.sigma) : "") << ','
         << r.unit << '\n';
    }
  } else {
    for (const auto& r : rows) {
      os << r.name << " = " << fixed(r.value, r.decimals);
      if (r.sigma) os << " +/- " << fixed(*r.sigma, r.decimals);
      if (!r.unit.empty()) os << (r.unit == "%" ? "" : " ") << r.unit;
      os << '\n';
    }
  }
  return os.str();
}

// spectrum / decay / g2 ------------------------------------------------------

std::string cmd_spectrum(const RunConfig& cfg) {
  cfg.require_known(with_physics({"nu_min", "nu_max", "points"}));
  const SystemParams p = physics_params(cfg);
  const auto grid = linear_grid(cfg.require_double("nu_min"), cfg.require_double("nu_max"), cfg.get_int("points", 401),
                                "spectrum");
  std::ostringstream os;
  io::write_spectrum_csv(os, spectra::dit_transmission(p, grid));
  return os.str();
}

std::string cmd_decay(const RunConfig& cfg) {
  cfg.require_known(with_physics({"t_final", "dt", "peak_counts", "seed"}));
  const SystemParams p = physics_params(cfg);
  DecayTrace trace =
      dynamics::simulate_decay(hilbert_config(cfg), p, cfg.require_double("t_final"), cfg.require_double("dt"));
  if (const auto peak = cfg.get_double("peak_counts")) {
    const long long seed = cfg.get_int("seed", 1);
    if (seed < 0) throw ConfigError("decay: seed must be >= 0");
    trace = dynamics::to_counts(trace, *peak, static_cast<std::uint64_t>(seed));
  } else if (cfg.has("seed")) {
    throw ConfigError("decay: seed only applies together with peak_counts");
  }
  std::ostringstream os;
  io::write_decay_csv(os, trace);
  return os.str();
}

std::string cmd_g2(const RunConfig& cfg) {
  cfg.require_known(with_physics({"tau_max", "points"}));
  const SystemParams p = physics_params(cfg);
  const LindbladSystem sys = build_system(hilbert_config(cfg), p);
  const double tau_max = cfg.require_double("tau_max");
  const auto points = cfg.get_int("points", 101);
  const auto grid = linear_grid(0.0, tau_max, points, "g2");
  std::ostringstream os;
  io::write_g2_csv(os, g2_correlation(sys, grid));
  return os.str();
}

// tuning-map -----------------------------------------------------------------

std::array<double, 4> four(const RunConfig& cfg, const std::string& key) {
  const auto v = cfg.get_double_list(key);
  if (!v) throw ConfigError("missing required key '" + key + "'");
  if (v->size() != 4) throw ConfigError("'" + key + "' needs four comma-separated values (lines A-D)");
  return {(*v)[0], (*v)[1], (*v)[2], (*v)[3]};
}

std::string cmd_tuning_map(const RunConfig& cfg) {
  cfg.require_known({"kappa", "lines_ghz", "f0", "peak_ratios", "axis", "pos_min", "pos_max", "points", "out"});
  derive::SiVSpec siv;
  siv.transition_freqs_ghz = four(cfg, "lines_ghz");
  std::array<double, 4> f0{};
  if (cfg.has("f0") == cfg.has("peak_ratios")) throw ConfigError("tuning-map: give exactly one of f0, peak_ratios");
  if (cfg.has("f0")) {
    f0 = four(cfg, "f0");
  } else {
    const auto r = four(cfg, "peak_ratios");
    for (std::size_t k = 0; k < 4; ++k) f0[k] = spectra::f0_for_peak_ratio(r[k]);
  }
  const std::string axis = cfg.get_string("axis").value_or("ghz");
  if (axis != "ghz" && axis != "nm") throw ConfigError("tuning-map: axis must be ghz or nm");
  const auto grid = linear_grid(cfg.require_double("pos_min"), cfg.require_double("pos_max"),
                                cfg.get_int("points", 201), "tuning-map");
  const auto rows = spectra::pl_tuning_map(siv, cfg.require_double("kappa"), f0, grid,
                                           axis == "nm" ? AxisKind::wavelength_nm : AxisKind::frequency_ghz);
  std::ostringstream os;
  io::write_tuning_map_csv(os, rows);
  return os.str();
}

// streak-bin -----------------------------------------------------------------

std::string cmd_streak_bin(const RunConfig& cfg) {
  cfg.require_known({"data", "lambda_min", "lambda_max", "out"});
  const auto img = io::read_file(cfg.require_string("data"), io::read_streak);
  const DecayTrace trace = io::bin_streak_region(img, cfg.require_double("lambda_min"), cfg.require_double("lambda_max"));
  std::ostringstream os;
  io::write_decay_csv(os, trace);
  return os.str();
}

// fit ------------------------------------------------------------------------

std::vector<std::string> data_headers(fit::ModelKind kind) {
  switch (kind) {
    case fit::ModelKind::exp_decay:
      return {io::kDecayHeader};
    case fit::ModelKind::lorentzian:
      return {io::kTransmissionHeader, io::kCountsSpectrumHeader};
    case fit::ModelKind::dit:
      return {io::kTransmissionHeader};
    case fit::ModelKind::power_broadening:
      return {io::kLinewidthHeader};
  }
  return {};
}

std::pair<std::string, std::string> header_units(const std::string& header) {
  if (header.rfind("time_ns", 0) == 0) return {"ns", ""};
  if (header.rfind("freq_ghz", 0) == 0) return {"GHz", ""};
  if (header.rfind("wavelength_nm", 0) == 0) return {"nm", "counts"};
  if (header.rfind("power_uw", 0) == 0) return {"uW", "MHz"};
  return {"", ""};
}

fit::FitData read_fit_data(const std::string& path, fit::ModelKind kind) {
  std::vector<std::string> accepted;
  for (const auto& h : data_headers(kind)) {
    accepted.push_back(h);
    accepted.push_back(h + ",sigma");
  }
  const auto table = io::read_file(path, [&](std::istream& in, const std::string& src) {
    return io::read_numeric_csv(in, src, accepted);
  });
  fit::FitData d;
  d.x = table.column(0);
  d.y = table.column(1);
  if (table.columns.size() == 3) {
    d.sigma = table.column(2);
    for (std::size_t i = 0; i < d.sigma->size(); ++i) {
      if (!((*d.sigma)[i] > 0.0)) throw ParseError(path, table.line_numbers[i], 1, "sigma must be > 0");
    }
  }
  std::tie(d.x_unit, d.y_unit) = header_units(table.header());
  return d;
}

std::map<std::string, double> auto_guess(fit::ModelKind kind, const fit::FitData& d, const RunConfig& cfg) {
  std::map<std::string, double> g;
  const auto& x = d.x;
  const auto& y = d.y;
  const std::size_t n = x.size();
  switch (kind) {
    case fit::ModelKind::exp_decay: {
      g["t0"] = x.front();
      g["amplitude"] = y.front();
      double tau = (x.back() - x.front()) / 3.0;
      for (std::size_t i = 1; i < n; ++i) {
        if (y[i] > 0.0 && y.front() > 0.0 && y[i] < y.front() / std::exp(1.0)) {
          tau = (x[i] - x.front()) / std::log(y.front() / y[i]);
          break;
        }
      }
      g["tau"] = tau;
      g["offset"] = 0.0;
      g["sigma_irf"] = 0.0;
      break;
    }
    case fit::ModelKind::lorentzian: {
      const double base = 0.5 * (y.front() + y.back());
      std::size_t k = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(y[i] - base) > std::abs(y[k] - base)) k = i;
      }
      const double half = base + 0.5 * (y[k] - base);
      std::size_t lo = k, hi = k;
      while (lo > 0 && std::abs(y[lo] - base) > std::abs(half - base)) --lo;
      while (hi + 1 < n && std::abs(y[hi] - base) > std::abs(half - base)) ++hi;
      double w = std::abs(x[hi] - x[lo]);
      if (!(w > 0.0)) w = std::abs(x.back() - x.front()) / 10.0;
      g["x0"] = x[k];
      g["fwhm"] = w;
      g["amplitude"] = y[k] - base;
      g["offset"] = base;
      break;
    }
    case fit::ModelKind::dit: {
      const double top = *std::max_element(y.begin(), y.end());
      double area = 0.0, moment = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        const double depth = top - 0.5 * (y[i] + y[i - 1]);
        const double xm = 0.5 * (x[i] + x[i - 1]);
        area += depth * (x[i] - x[i - 1]);
        moment += depth * xm * (x[i] - x[i - 1]);
      }
      const double centre = area > 0.0 ? moment / area : 0.5 * (x.front() + x.back());
      const double kappa = top > 0.0 && area > 0.0 ? 2.0 * area / (units::pi * top) : (x.back() - x.front()) / 4.0;
      const double gamma = cfg.get_double("fix.gamma").value_or(cfg.get_double("init.gamma").value_or(kappa / 50.0));
      g["nu_c"] = centre;
      g["nu_a"] = centre;
      g["kappa"] = kappa;
      g["gamma"] = gamma;
      g["g"] = 0.5 * std::sqrt(kappa * gamma);
      g["kappa_wg_fraction"] = 1.0;
      g["amplitude"] = top;
      g["offset"] = 0.0;
      break;
    }
    case fit::ModelKind::power_broadening:
      break;
  }
  return g;
}

KeySet default_fixed(fit::ModelKind kind) {
  switch (kind) {
    case fit::ModelKind::exp_decay:
      return {"t0", "offset", "sigma_irf"};
    case fit::ModelKind::dit:
      return {"gamma", "kappa_wg_fraction"};
    default:
      return {};
  }
}

const KeySet kPositiveParams{"fwhm", "tau", "g", "kappa", "gamma", "linewidth0", "p_sat"};

std::string cmd_fit(const RunConfig& cfg, int& exit_code) {
  cfg.require_known({"model", "data", "format", "out", "max_iterations"}, {"init.", "fix."});
  const auto kind = fit::parse_model_kind(cfg.require_string("model"));
  const auto& labels = fit::parameter_labels(kind);
  for (const auto& [key, e] : cfg.entries()) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) continue;
    const std::string label = key.substr(dot + 1);
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
      throw ParseError(e.source, e.line, 1, "model " + std::string(fit::to_string(kind)) + " has no parameter '" + label + "'");
    }
    if (key.rfind("init.", 0) == 0 && cfg.has("fix." + label)) {
      throw ConfigError("parameter '" + label + "' is both init and fix");
    }
  }
  const std::string format = cfg.get_string("format").value_or("text");
  if (format != "text" && format != "csv") throw ConfigError("fit: format must be text or csv");
  fit::FitOptions opt;
  opt.max_iterations = static_cast<int>(cfg.get_int("max_iterations", opt.max_iterations));
  if (opt.max_iterations < 1) throw ConfigError("fit: max_iterations must be >= 1");

  const fit::FitData data = read_fit_data(cfg.require_string("data"), kind);
  fit::FitResult result;
  if (kind == fit::ModelKind::power_broadening && cfg.entries().end() ==
      std::find_if(cfg.entries().begin(), cfg.entries().end(),
                   [](const auto& kv) { return kv.first.find('.') != std::string::npos; })) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < data.x.size(); ++i) pts.emplace_back(data.x[i], data.y[i]);
    result = fit::fit_linewidth_extrapolation(pts, opt);
  } else {
    if (kind == fit::ModelKind::dit && !cfg.has("fix.gamma") && !cfg.has("init.gamma")) {
      throw ConfigError("fit: dit needs the emitter linewidth (fix.gamma = ... or init.gamma = ...)");
    }
    const auto guess = auto_guess(kind, data, cfg);
    const KeySet fixed_default = default_fixed(kind);
    fit::FitModel model;
    model.kind = kind;
    for (const auto& label : labels) {
      if (const auto f = cfg.get_double("fix." + label)) {
        model.fixed_params[label] = *f;
        continue;
      }
      const auto init = cfg.get_double("init." + label);
      if (!init && fixed_default.count(label)) {
        model.fixed_params[label] = guess.at(label);
        continue;
      }
      double start = init ? *init : 0.0;
      if (!init) {
        const auto it = guess.find(label);
        if (it == guess.end()) throw ConfigError("fit: no starting value for '" + label + "' (set init." + label + ")");
        start = it->second;
      }
      std::optional<double> lower;
      if (kPositiveParams.count(label)) {
        lower = 0.0;
        if (!(start > 0.0)) throw ConfigError("fit: starting value for '" + label + "' must be > 0");
      }
      model.free_params.push_back({label, start, lower, std::nullopt});
    }
    result = fit::lm_fit(model, data, opt);
  }
  if (!result.converged) exit_code = kExitFitFailure;
  return format == "csv" ? fit::format_report_csv(result) : fit::format_report(result);
}

// driver ---------------------------------------------------------------------

void write_output(const RunConfig& cfg, const std::string& payload, std::ostream& out) {
  if (const auto path = cfg.get_string("out")) {
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file '" + *path + "'");
    f << payload;
    if (!f) throw ConfigError("failed writing output file '" + *path + "'");
  } else {
    out << payload;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cavity-QED modelling and analysis toolkit"};
  app.set_version_flag("--version", std::string("cqed ") + kToolkitVersion + " (file format " + kFormatVersion + ")");
  app.require_subcommand(1);

  std::string config_path, out_path, model, data, format;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "Run configuration file (key = value)");
  app.add_option("--out", out_path, "Output file (default: standard output)");
  app.add_option("--seed", seed, "Random seed for synthetic counts");
  app.add_option("--model", model, "Fit model: lorentzian, exp_decay, dit, power_broadening");
  app.add_option("--data", data, "Input data file");
  app.add_option("--format", format, "Report format: text or csv");
  app.add_option("--set", sets, "Override a config key (key=value), repeatable");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"derive", "Figures of merit from measured rates and lifetimes"},
      {"spectrum", "Transmission spectrum of the coupled cavity"},
      {"decay", "Emitter decay trace from the master equation"},
      {"tuning-map", "Relative line intensities as the cavity is tuned"},
      {"fit", "Fit a model to a data file and report parameters"},
      {"g2", "Steady-state intensity correlation of the cavity field"},
      {"streak-bin", "Sum a wavelength window of a streak image into a decay trace"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(std::string(io::trim(kv.substr(0, eq))), std::string(io::trim(kv.substr(eq + 1))));
    }
    if (!out_path.empty()) cfg.set("out", out_path);
    if (seed) cfg.set("seed", std::to_string(*seed));
    if (!model.empty()) cfg.set("model", model);
    if (!data.empty()) cfg.set("data", data);
    if (!format.empty()) cfg.set("format", format);

    int code = kExitOk;
    std::string payload;
    if (command == "derive") payload = cmd_derive(cfg);
    else if (command == "spectrum") payload = cmd_spectrum(cfg);
    else if (command == "decay") payload = cmd_decay(cfg);
    else if (command == "tuning-map") payload = cmd_tuning_map(cfg);
    else if (command == "fit") payload = cmd_fit(cfg, code);
    else if (command == "g2") payload = cmd_g2(cfg);
    else payload = cmd_streak_bin(cfg);
    write_output(cfg, payload, out);
    if (code == kExitFitFailure) err << "cqed " << command << ": fit did not converge\n";
    return code;
  } catch (const DegenerateFitError& e) {
    err << "cqed " << command << ": " << e.what() << '\n';
    return kExitFitFailure;
  } catch (const StiffnessError& e) {
    err << "cqed " << command << ": " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const DegeneracyError& e) {
    err << "cqed " << command << ": " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const SolverError& e) {
    err << "cqed " << command << ": " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const Error& e) {
    err << "cqed " << command << ": " << e.what() << '\n';
    return kExitInvalidInput;
  }
}

}  // namespace cqed::cli
