#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

namespace cqed {
namespace {

HilbertConfig make_config(int n_max, int n_emitters) {
  HilbertConfig c;
  c.n_max = n_max;
  c.n_emitters = n_emitters;
  return c;
}

TEST(HilbertConfig, Dimensions) {
  EXPECT_EQ(make_config(1, 1).dimension(), 4u);
  EXPECT_EQ(make_config(2, 2).dimension(), 12u);
  EXPECT_EQ(make_config(3, 7).dimension(), 512u);
}

TEST(HilbertConfig, RejectsOversizeAndInvalid) {
  EXPECT_THROW(make_config(4095, 1).validate(), ConfigError);
  auto c = make_config(2, 1);
  c.dimension_cap = 5;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(make_config(0, 1).validate(), ConfigError);
  EXPECT_THROW(make_config(2, 0).validate(), ConfigError);
}

TEST(SystemParams, Validation) {
  SystemParams p;
  p.kappa = 1.0;
  p.gamma_rad = 0.5;
  p.gamma_deph = 0.25;
  EXPECT_DOUBLE_EQ(p.gamma_total(), 1.0);
  p.kappa_wg_fraction = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
  p.kappa_wg_fraction = 1.0;
  p.g = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p.g = std::nan("");
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(BuildSystem, HermitianAndRates) {
  SystemParams p{4.9, 49.7, 0.8, 0.3, 0.1, 1.5, -2.0, 0.7};
  const auto cfg = make_config(2, 2);
  const LindbladSystem sys = build_system(cfg, p);
  EXPECT_EQ(sys.dim(), 12u);
  EXPECT_LT((sys.hamiltonian() - sys.hamiltonian().adjoint()).norm(), 1e-12);
  ASSERT_EQ(sys.collapse_ops().size(), 5u);
  EXPECT_NEAR(sys.collapse_ops()[0].rate, units::two_pi * 49.7, 1e-12);
  EXPECT_NEAR(sys.collapse_ops()[1].rate, units::two_pi * 0.3, 1e-12);
  EXPECT_NEAR(sys.collapse_ops()[2].rate, units::two_pi * 0.1 / 2.0, 1e-12);
}

TEST(LindbladSystem, RejectsBadInput) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 1) = 1.0;
  EXPECT_THROW(LindbladSystem(h, {}), ConfigError);
  EXPECT_THROW(LindbladSystem(CMatrix::Zero(2, 3), {}), ShapeError);
  EXPECT_THROW(LindbladSystem(CMatrix::Zero(2, 2), {{CMatrix::Zero(3, 3), 1.0}}), ShapeError);
  EXPECT_THROW(LindbladSystem(CMatrix::Zero(2, 2), {{CMatrix::Zero(2, 2), -1.0}}), ConfigError);
}

TEST(LindbladDerivative, TracelessAndHermitian) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 7;
    const auto sys = test::random_system(d, rng);
    const auto rho = test::random_density(d, rng);
    const CMatrix drho = lindblad_derivative(sys, rho.matrix());
    EXPECT_LT(std::abs(drho.trace()), 1e-12 * std::max(1.0, drho.norm()));
    EXPECT_LT((drho - drho.adjoint()).norm(), 1e-12 * std::max(1.0, drho.norm()));
  }
}

TEST(LindbladDerivative, MatchesDenseFormula) {
  std::mt19937_64 rng(5);
  const auto sys = test::random_system(5, rng);
  const auto rho = test::random_density(5, rng);
  const CMatrix& r = rho.matrix();
  const CMatrix& h = sys.hamiltonian();
  CMatrix expected = Complex(0, -1) * (h * r - r * h);
  for (const auto& c : sys.collapse_ops()) {
    const CMatrix& l = c.op;
    const CMatrix ldl = l.adjoint() * l;
    expected += c.rate * (l * r * l.adjoint() - 0.5 * (ldl * r + r * ldl));
  }
  EXPECT_LT((lindblad_derivative(sys, r) - expected).norm(), 1e-12 * expected.norm());
}

TEST(LindbladDerivative, DecoupledEmitterDecay) {
  SystemParams p;
  p.kappa = 3.0;
  p.gamma_rad = 0.4;
  const auto cfg = make_config(1, 1);
  const auto sys = build_system(cfg, p);
  const auto rho = DensityMatrix::basis_state(sys.dim(), cfg.index(1, 0));
  const CMatrix drho = lindblad_derivative(sys, rho.matrix());
  const CMatrix pe = ops::excited_projector(cfg, 0);
  const double rate = (pe * drho).trace().real();
  EXPECT_NEAR(rate, -units::two_pi * 0.4, 1e-12);
}

TEST(LindbladDerivative, ShapeMismatch) {
  SystemParams p;
  p.kappa = 1.0;
  const auto sys = build_system(make_config(1, 1), p);
  EXPECT_THROW(lindblad_derivative(sys, CMatrix::Zero(3, 3)), ShapeError);
}

TEST(Expectation, Examples) {
  const auto cfg = make_config(2, 1);
  std::mt19937_64 rng(3);
  const auto rho = test::random_density(cfg.dimension(), rng);
  EXPECT_NEAR(std::abs(expectation(ops::identity(cfg), rho) - Complex(1.0)), 0.0, 1e-12);
  const auto excited = DensityMatrix::basis_state(cfg.dimension(), cfg.index(1, 0));
  const CMatrix sm = ops::lowering(cfg, 0);
  EXPECT_NEAR(expectation(sm.adjoint() * sm, excited).real(), 1.0, 1e-15);
  const auto vacuum = DensityMatrix::basis_state(cfg.dimension(), cfg.index(0, 0));
  EXPECT_NEAR(expectation(ops::number(cfg), vacuum).real(), 0.0, 1e-15);
  EXPECT_LT(std::abs(expectation(ops::number(cfg), rho).imag()), 1e-10);
  EXPECT_THROW(expectation(CMatrix::Identity(2, 2), rho), ShapeError);
}

TEST(DensityMatrix, RejectsInvalid) {
  CMatrix m = CMatrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix::from_matrix(m), ConfigError);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix::from_matrix(m), ConfigError);
}

TEST(Evolve, EmitterDecayAtOffResonanceLifetime) {
  SystemParams p;
  p.kappa = 1.0;
  p.gamma_rad = 1.0 / (units::two_pi * 1.84);
  const auto cfg = make_config(1, 1);
  const auto sys = build_system(cfg, p);
  const auto rho0 = DensityMatrix::basis_state(sys.dim(), cfg.index(1, 0));
  const auto samples = evolve(sys, rho0, 1.84, {0.0, 0.92, 1.84});
  const CMatrix pe = ops::excited_projector(cfg, 0);
  EXPECT_NEAR(expectation(pe, samples.back().rho).real(), std::exp(-1.0), 1e-4);
  EXPECT_NEAR(expectation(pe, samples[1].rho).real(), std::exp(-0.5), 1e-8);
}

TEST(Evolve, ClosedRabiOscillation) {
  SystemParams p;
  p.g = 1.0;
  const auto cfg = make_config(2, 1);
  const auto sys = build_system(cfg, p);
  const auto rho0 = DensityMatrix::basis_state(sys.dim(), cfg.index(1, 0));
  const auto times = uniform_time_grid(1.0, 40);
  const auto samples = evolve(sys, rho0, 1.0, times);
  const CMatrix pe = ops::excited_projector(cfg, 0);
  for (const auto& s : samples) {
    const double c = std::cos(units::two_pi * s.t);
    EXPECT_NEAR(expectation(pe, s.rho).real(), c * c, 1e-4) << "t = " << s.t;
    EXPECT_NEAR(s.rho.purity(), 1.0, 1e-6);
  }
  const auto zero = evolve(sys, rho0, 0.25, {0.25});
  EXPECT_NEAR(expectation(pe, zero.back().rho).real(), 0.0, 1e-4);
}

TEST(Evolve, RandomSystemsKeepInvariants) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t d = 2 + trial;
    const auto sys = test::random_system(d, rng);
    const auto rho0 = test::random_density(d, rng);
    const auto samples = evolve(sys, rho0, 2.0, uniform_time_grid(2.0, 20));
    for (const auto& s : samples) {
      const auto diag = s.rho.diagnostics();
      EXPECT_LT(diag.trace_error, 1e-9);
      EXPECT_LT(diag.hermiticity_error, 1e-9);
      EXPECT_GT(diag.min_eigenvalue, -1e-7);
    }
  }
}

TEST(Evolve, RejectsBadArguments) {
  SystemParams p;
  p.kappa = 1.0;
  const auto sys = build_system(make_config(1, 1), p);
  const auto rho0 = DensityMatrix::basis_state(4, 0);
  EXPECT_THROW(evolve(sys, rho0, 0.0, {}), ConfigError);
  EXPECT_THROW(evolve(sys, rho0, 1.0, {0.5, 0.2}), ConfigError);
  EXPECT_THROW(evolve(sys, DensityMatrix::basis_state(3, 0), 1.0, {}), ShapeError);
}

TEST(Evolve, StepBudgetExhaustionReportsTime) {
  SystemParams p;
  p.g = 1.0;
  p.kappa = 1.0;
  const auto cfg = make_config(2, 1);
  const auto sys = build_system(cfg, p);
  IntegratorOptions opt;
  opt.max_steps = 3;
  try {
    evolve(sys, DensityMatrix::basis_state(sys.dim(), cfg.index(1, 0)), 10.0, {}, opt);
    FAIL() << "expected StiffnessError";
  } catch (const StiffnessError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), 10.0);
  }
}

TEST(SteadyState, NoDriveGivesGround) {
  SystemParams p{2.0, 10.0, 1.0, 0.5, 0.1, 0.3, -0.2, 0.0};
  const auto cfg = make_config(2, 1);
  const auto rho = steady_state(build_system(cfg, p));
  const auto ground = DensityMatrix::basis_state(cfg.dimension(), cfg.index(0, 0));
  EXPECT_LT(trace_distance(rho, ground), 1e-10);
}

TEST(SteadyState, DrivenEmptyCavity) {
  for (double delta : {0.0, 1.5, -4.0}) {
    SystemParams p;
    p.kappa = 5.0;
    p.gamma_rad = 1.0;
    p.delta_c = delta;
    p.omega_drive = 0.2;
    const auto cfg = make_config(4, 1);
    const auto rho = steady_state(build_system(cfg, p));
    const double n = expectation(ops::number(cfg), rho).real();
    EXPECT_NEAR(n, test::driven_cavity_photons(0.2, 5.0, delta), 1e-9 * std::max(n, 1e-6)) << delta;
  }
}

TEST(SteadyState, MatchesLongTimeEvolution) {
  SystemParams p{1.0, 3.0, 1.0, 0.5, 0.2, 0.3, -0.4, 0.8};
  const auto cfg = make_config(2, 1);
  const auto sys = build_system(cfg, p);
  const auto rho_ss = steady_state(sys);
  const double min_rate = units::angular(std::min({p.kappa, p.gamma_rad, p.gamma_deph / 2.0}));
  const double t_final = 50.0 / min_rate;
  const auto samples = evolve(sys, DensityMatrix::basis_state(sys.dim(), 0), t_final, {});
  EXPECT_LT(trace_distance(samples.back().rho, rho_ss), 1e-6);
  const auto diag = rho_ss.diagnostics();
  EXPECT_LT(diag.trace_error, 1e-9);
  EXPECT_GT(diag.min_eigenvalue, -1e-9);
}

TEST(SteadyState, DegenerateAndOversized) {
  SystemParams p;
  p.g = 1.0;
  const auto closed = build_system(make_config(1, 1), p);
  EXPECT_THROW(steady_state(closed), DegeneracyError);

  // Block {2, 3} is invariant, so every state on it is stationary.
  CMatrix h = CMatrix::Zero(4, 4);
  CMatrix l = CMatrix::Zero(4, 4);
  l(0, 1) = 1.0;  // only block {0,1} decays
  const LindbladSystem split(h, {{l, 1.0}});
  EXPECT_THROW(steady_state(split), DegeneracyError);

  SystemParams q;
  q.kappa = 1.0;
  EXPECT_THROW(steady_state(build_system(make_config(24, 1), q)), ConfigError);
}

TEST(Truncation, WeakDriveObservablesStable) {
  // The truncation error falls as Omega^(2 n_max): at the Omega = kappa / 10
  // edge the 1e-6 agreement needs n_max >= 3, n_max = 2 reaches it by kappa / 40.
  const std::vector<std::pair<double, int>> cases{{2.0, 3}, {1.0, 3}, {0.5, 2}, {0.25, 2}};
  for (const auto& [omega, n_max] : cases) {
    SystemParams p{1.0, 20.0, 1.0, 0.5, 0.1, 0.3, -0.2, omega};
    double n[2], sz[2];
    for (int k = 0; k < 2; ++k) {
      const auto cfg = make_config(n_max + 2 * k, 1);
      const auto rho = steady_state(build_system(cfg, p));
      n[k] = expectation(ops::number(cfg), rho).real();
      sz[k] = expectation(ops::excited_projector(cfg, 0), rho).real();
    }
    EXPECT_NEAR(n[1], n[0], 1e-6 * n[0]) << "omega " << omega << " n_max " << n_max;
    EXPECT_NEAR(sz[1], sz[0], 1e-6 * sz[0]) << "omega " << omega << " n_max " << n_max;
  }
}

TEST(G2, CoherentStateOfEmptyCavity) {
  SystemParams p;
  p.kappa = 4.0;
  p.gamma_rad = 1.0;
  p.omega_drive = 0.5;
  const auto cfg = make_config(5, 1);
  const auto pts = g2_correlation(build_system(cfg, p), {0.0, 0.05, 0.2, 1.0});
  for (const auto& pt : pts) EXPECT_NEAR(pt.g2, 1.0, 1e-6) << pt.tau;
}

TEST(G2, PhotonBlockadeAndTruncation) {
  SystemParams p;
  p.g = 1.0;
  p.kappa = 20.0;
  p.gamma_rad = 0.2;
  p.omega_drive = 0.02;
  const std::vector<double> taus{0.0, 0.05, 0.5, 50.0};
  const auto three = g2_correlation(build_system(make_config(3, 1), p), taus);
  const auto five = g2_correlation(build_system(make_config(5, 1), p), taus);
  EXPECT_LT(three[0].g2, 0.1);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    EXPECT_NEAR(three[i].g2, five[i].g2, 1e-6 * std::max(1.0, five[i].g2));
  }
  EXPECT_NEAR(three.back().g2, 1.0, 1e-3);
}

TEST(G2, UndefinedWithoutPhotons) {
  SystemParams p;
  p.kappa = 1.0;
  p.gamma_rad = 0.1;
  p.g = 1.0;
  EXPECT_THROW(g2_correlation(build_system(make_config(2, 1), p), {0.0}), UndefinedCorrelationError);
  std::mt19937_64 rng(1);
  EXPECT_THROW(g2_correlation(test::random_system(3, rng), {0.0}), ConfigError);
}

TEST(Operators, TavisCummingsLayout) {
  const auto cfg = make_config(2, 2);
  const CMatrix a = ops::annihilation(cfg);
  const CMatrix s0 = ops::lowering(cfg, 0);
  const CMatrix s1 = ops::lowering(cfg, 1);
  // Operators on different subsystems commute; same-emitter lowering squares to zero.
  EXPECT_LT((a * s0 - s0 * a).norm(), 1e-15);
  EXPECT_LT((s0 * s1 - s1 * s0).norm(), 1e-15);
  EXPECT_LT((s0 * s0).norm(), 1e-15);
  const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
  // [a, a^dag] = 1 except on the truncated top level.
  for (std::size_t bits = 0; bits < 4; ++bits) {
    for (std::size_t n = 0; n < 2; ++n) {
      const auto i = static_cast<Eigen::Index>(cfg.index(bits, n));
      EXPECT_NEAR(comm(i, i).real(), 1.0, 1e-15);
    }
  }
}

}  // namespace
}  // namespace cqed
