#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "planemhd/diagnostics.hpp"
#include "planemhd/manufactured.hpp"
#include "planemhd/solver.hpp"
#include "support.hpp"

using namespace planemhd;
using planemhd::testing::StateGen;
namespace oracle = planemhd::testing::oracle;

namespace {

constexpr double pi = std::numbers::pi;

TimeConfig fixed_steps(double t_end, double dt) {
  TimeConfig c;
  c.t_end = t_end;
  c.dt_max = dt;
  c.cfl = 1.0;
  c.snapshot_stride = 1000000;
  return c;
}

// x -> 1 - x with u and b odd, rho, w and theta even.
FlowState mirror(const FlowState& s) {
  FlowState m = s;
  const int nc = s.n_cells();
  for (int i = 0; i < nc; ++i) {
    m.rho[i] = s.rho[nc - 1 - i];
    m.theta[i] = s.theta[nc - 1 - i];
  }
  for (int j = 0; j <= nc; ++j) {
    m.u[j] = -s.u[nc - j];
    m.w[j] = s.w[nc - j];
    m.b[j] = -1.0 * s.b[nc - j];
  }
  return m;
}

}  // namespace

TEST(StableDt, UniformStateExample) {
  PhysParams p;
  p.gamma = 1.0;
  TimeConfig c;
  c.dt_max = 1.0;
  const GridSpec g16 = GridSpec::uniform(16);
  const FlowState s16 = make_initial_state(g16, InitialPreset::uniform, BoundaryData::zero());
  EXPECT_NEAR(stable_dt(s16, g16, p, c), 0.025, 1e-15);
  const GridSpec g32 = GridSpec::uniform(32);
  const FlowState s32 = make_initial_state(g32, InitialPreset::uniform, BoundaryData::zero());
  EXPECT_NEAR(stable_dt(s32, g32, p, c), 0.0125, 1e-15);
  c.dt_max = 0.01;
  EXPECT_EQ(stable_dt(s16, g16, p, c), 0.01);
}

TEST(StableDt, BoundsEveryNodeSignalSpeed) {
  StateGen gen(101);
  const GridSpec g = GridSpec::uniform(16);
  TimeConfig c;
  c.dt_max = 10.0;
  for (int trial = 0; trial < 100; ++trial) {
    const PhysParams p = gen.params();
    const FlowState s = gen.state(g, BoundaryData::zero(), 0.0, 3.0);
    const double dt = stable_dt(s, g, p, c);
    const auto rn = interpolate_to_nodes(s.rho);
    const auto tn = interpolate_to_nodes(s.theta);
    for (int j = 0; j <= 16; ++j) {
      const double speed = std::abs(s.u[j]) + std::sqrt(p.gamma * tn[j] + norm_sq(s.b[j]) / rn[j]);
      EXPECT_LE(dt * speed, c.cfl * g.dx * (1.0 + 1e-14));
    }
  }
}

TEST(StableDt, FailsBelowMinimum) {
  const GridSpec g = GridSpec::uniform(16);
  FlowState s = make_initial_state(g, InitialPreset::uniform, BoundaryData::zero());
  s.u[5] = 1e12;
  TimeConfig c;
  EXPECT_THROW(stable_dt(s, g, PhysParams{}, c), StepFailure);
}

TEST(Density, ConservesMassExactly) {
  StateGen gen(7);
  const GridSpec g = GridSpec::uniform(32);
  for (int trial = 0; trial < 100; ++trial) {
    const FlowState s = gen.state(g, BoundaryData::zero());
    const auto rho = advance_density(s, g, 0.005);
    double m0 = 0.0, m1 = 0.0;
    for (int i = 0; i < 32; ++i) {
      m0 += s.rho[i] * g.dx;
      m1 += rho[i] * g.dx;
    }
    EXPECT_NEAR(m1, m0, 1e-14 * m0);
  }
}

TEST(Density, MatchesIndependentUpwindLoop) {
  StateGen gen(8);
  const GridSpec g = GridSpec::uniform(16);
  for (int trial = 0; trial < 100; ++trial) {
    const FlowState s = gen.state(g, BoundaryData::zero());
    const double dt = 0.01;
    const auto rho = advance_density(s, g, dt);
    const auto f = oracle::fluxes(s);
    for (int i = 0; i < 16; ++i) {
      EXPECT_NEAR(rho[i], s.rho[i] - dt / g.dx * (f.face[i + 1] - f.face[i]), 1e-14);
    }
  }
}

TEST(Density, ReportsLossOfPositivity) {
  const GridSpec g = GridSpec::uniform(16);
  FlowState s = make_initial_state(g, InitialPreset::uniform, BoundaryData::zero());
  s.u[8] = 50.0;
  try {
    advance_density(s, g, 0.1);
    FAIL() << "expected StepFailure";
  } catch (const StepFailure& e) {
    EXPECT_EQ(e.field, "rho");
    EXPECT_EQ(e.index, 7);
  }
}

TEST(ImplicitSubsteps, MatchDenseOraclesOnRandomStates) {
  StateGen gen(2024);
  const GridSpec g = GridSpec::uniform(16);
  const BoundaryData bd = BoundaryData::cosine_ramp(0.7, 0.3);
  for (int trial = 0; trial < 100; ++trial) {
    const PhysParams p = gen.params();
    const double t = gen.uniform(0.0, 0.5);
    const FlowState s = gen.state(g, bd, t);
    const auto e = oracle::compare_step(s, g, p, bd, 0.004);
    EXPECT_LE(e.velocity, 1e-12);
    EXPECT_LE(e.transverse, 1e-12);
    EXPECT_LE(e.induction, 1e-12);
    EXPECT_LE(e.temperature, 1e-12);
  }
}

TEST(ImplicitSubsteps, AssembledSystemsSolveToTolerance) {
  StateGen gen(99);
  const GridSpec g = GridSpec::uniform(16);
  const BoundaryData bd = BoundaryData::constant(0.4);
  for (int trial = 0; trial < 50; ++trial) {
    const PhysParams p = gen.params();
    const FlowState s = gen.state(g, bd);
    const MassFlux F = mass_flux(s);
    FlowState next = s;
    next.rho = advance_density(s, g, 0.004);
    const SubstepInput in{s, next, F, g, p, 0.004};
    const auto sys = assemble_velocity(in);
    EXPECT_LE(tridiag_residual_inf(sys, tridiag_solve(sys)), 1e-12);
    const auto tsys = assemble_transverse(in, bd);
    for (const auto& c : tsys.component) EXPECT_LE(tridiag_residual_inf(c, tridiag_solve(c)), 1e-12);
  }
}

TEST(Transverse, NoImplicitSystemInTheLimit) {
  const GridSpec g = GridSpec::uniform(16);
  const FlowState s = make_initial_state(g, InitialPreset::uniform, BoundaryData::zero());
  PhysParams p;
  p.mu = 0.0;
  const MassFlux F = mass_flux(s);
  const SubstepInput in{s, s, F, g, p, 0.01};
  EXPECT_THROW(assemble_transverse(in, BoundaryData::zero()), InvalidInput);
}

TEST(Transverse, LimitKeepsVanishingFieldsZeroUnderWallForcing) {
  const GridSpec g = GridSpec::uniform(32);
  const BoundaryData bd = BoundaryData::cosine_ramp(1.0, 0.05);
  PhysParams p;
  p.mu = 0.0;
  FlowState s = make_initial_state(g, InitialPreset::wb_zero, bd);
  for (int k = 0; k < 50; ++k) {
    s = step(s, g, 0.002, p, bd);
    for (int j = 0; j <= 32; ++j) {
      ASSERT_EQ(s.w[j][0], 0.0);
      ASSERT_EQ(s.w[j][1], 0.0);
      ASSERT_EQ(s.b[j][0], 0.0);
      ASSERT_EQ(s.b[j][1], 0.0);
    }
  }
}

TEST(Transverse, LimitConservesTransverseMomentumWithoutField) {
  StateGen gen(31);
  const GridSpec g = GridSpec::uniform(16);
  PhysParams p;
  p.mu = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    FlowState s = gen.state(g, BoundaryData::zero());
    for (auto& v : s.b) v = Vec2{0.0, 0.0};
    s.w.front() = Vec2{gen.uniform(-1, 1), gen.uniform(-1, 1)};
    s.w.back() = Vec2{gen.uniform(-1, 1), gen.uniform(-1, 1)};
    const MassFlux F = mass_flux(s);
    FlowState next = s;
    next.rho = advance_density(s, g, 0.004);
    const SubstepInput in{s, next, F, g, p, 0.004};
    const auto w = advance_transverse(in, BoundaryData::zero());
    const auto m0 = interpolate_to_nodes(s.rho), m1 = interpolate_to_nodes(next.rho);
    for (int c = 0; c < 2; ++c) {
      double before = 0.0, after = 0.0;
      for (int j = 0; j <= 16; ++j) {
        before += m0[j] * s.w[j][c] * node_weight(g, j);
        after += m1[j] * w[j][c] * node_weight(g, j);
      }
      EXPECT_NEAR(after, before, 1e-13);
    }
  }
}

TEST(Induction, DiscreteSineModeDecaysByExactFactor) {
  const int n = 32;
  const GridSpec g = GridSpec::uniform(n);
  FlowState s = make_initial_state(g, InitialPreset::uniform, BoundaryData::zero());
  for (int j = 0; j <= n; ++j) s.b[j] = Vec2{std::sin(pi * j / n), 0.5 * std::sin(2 * pi * j / n)};
  s.b.front() = s.b.back() = Vec2{0.0, 0.0};
  PhysParams p;
  p.nu = 0.7;
  const double dt = 0.01;
  const MassFlux F = mass_flux(s);
  const SubstepInput in{s, s, F, g, p, dt};
  const auto b = advance_induction(in);
  for (int mode = 1; mode <= 2; ++mode) {
    const double lam = (2.0 - 2.0 * std::cos(mode * pi * g.dx)) / (g.dx * g.dx);
    const double factor = 1.0 / (1.0 + dt * p.nu * lam);
    for (int j = 1; j < n; ++j) EXPECT_NEAR(b[j][mode - 1], factor * s.b[j][mode - 1], 1e-13);
  }
}

TEST(Temperature, ConductionConservesHeat) {
  StateGen gen(55);
  const GridSpec g = GridSpec::uniform(16);
  for (int trial = 0; trial < 50; ++trial) {
    PhysParams p = gen.params();
    FlowState s = gen.state(g, BoundaryData::zero());
    std::fill(s.u.begin(), s.u.end(), 0.0);
    std::fill(s.w.begin(), s.w.end(), Vec2{0.0, 0.0});
    std::fill(s.b.begin(), s.b.end(), Vec2{0.0, 0.0});
    const MassFlux F = mass_flux(s);
    const SubstepInput in{s, s, F, g, p, 0.01};
    const auto th = advance_temperature(in);
    double h0 = 0.0, h1 = 0.0;
    for (int i = 0; i < 16; ++i) {
      h0 += p.c_v * s.rho[i] * s.theta[i];
      h1 += p.c_v * s.rho[i] * th[i];
    }
    EXPECT_NEAR(h1, h0, 1e-13 * h0);
  }
}

TEST(Step, UniformStateIsBitwiseFixed) {
  const GridSpec g = GridSpec::uniform(32);
  const FlowState s0 = make_initial_state(g, InitialPreset::uniform, BoundaryData::zero());
  FlowState s = s0;
  for (int k = 0; k < 100; ++k) s = step(s, g, 0.003, PhysParams{}, BoundaryData::zero());
  EXPECT_EQ(s.rho, s0.rho);
  EXPECT_EQ(s.theta, s0.theta);
  EXPECT_EQ(s.u, s0.u);
  EXPECT_EQ(s.w, s0.w);
  EXPECT_EQ(s.b, s0.b);
}

TEST(Step, IsMirrorEquivariant) {
  StateGen gen(17);
  const GridSpec g = GridSpec::uniform(16);
  const BoundaryData bd = BoundaryData::constant(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    const PhysParams p = gen.params();
    const FlowState s = gen.state(g, bd);
    const FlowState a = mirror(step(s, g, 0.003, p, bd));
    const FlowState b = step(mirror(s), g, 0.003, p, bd);
    EXPECT_LE(state_l2_distance(a, b, g), 1e-12);
  }
}

TEST(Step, RejectsNonpositiveDt) {
  const GridSpec g = GridSpec::uniform(16);
  const FlowState s = make_initial_state(g, InitialPreset::uniform, BoundaryData::zero());
  EXPECT_THROW(step(s, g, 0.0, PhysParams{}, BoundaryData::zero()), InvalidInput);
}

TEST(Run, ZeroDurationKeepsInitialState) {
  const GridSpec g = GridSpec::uniform(16);
  const FlowState s = make_initial_state(g, InitialPreset::bump, BoundaryData::zero());
  TimeConfig c;
  c.t_end = 0.0;
  const Trajectory tr = run(s, g, PhysParams{}, BoundaryData::zero(), c);
  EXPECT_EQ(tr.snapshots.size(), 1u);
  EXPECT_EQ(tr.diagnostics.size(), 1u);
  EXPECT_EQ(tr.t_end(), 0.0);
}

TEST(Run, SnapshotsFollowStrideAndEndExactly) {
  const GridSpec g = GridSpec::uniform(16);
  const BoundaryData bd = BoundaryData::cosine_ramp(0.5, 0.1);
  const FlowState s = make_initial_state(g, InitialPreset::bump, bd);
  TimeConfig c = fixed_steps(0.1, 0.004);
  c.snapshot_stride = 5;
  const Trajectory tr = run(s, g, PhysParams{}, bd, c);
  EXPECT_EQ(tr.diagnostics.size(), 26u);
  EXPECT_EQ(tr.snapshots.size(), 6u);
  EXPECT_EQ(tr.t_end(), 0.1);
  for (std::size_t k = 1; k < tr.snapshot_times.size(); ++k) EXPECT_GT(tr.snapshot_times[k], tr.snapshot_times[k - 1]);
}

TEST(Run, IsDeterministic) {
  const GridSpec g = GridSpec::uniform(32);
  const BoundaryData bd = BoundaryData::cosine_ramp(1.0, 0.1);
  const FlowState s = make_initial_state(g, InitialPreset::bump, bd);
  TimeConfig c;
  c.t_end = 0.2;
  const Trajectory a = run(s, g, PhysParams{}, bd, c);
  const Trajectory b = run(s, g, PhysParams{}, bd, c);
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    EXPECT_EQ(a.snapshots[k].rho, b.snapshots[k].rho);
    EXPECT_EQ(a.snapshots[k].u, b.snapshots[k].u);
    EXPECT_EQ(a.snapshots[k].w, b.snapshots[k].w);
    EXPECT_EQ(a.snapshots[k].theta, b.snapshots[k].theta);
  }
}

TEST(Run, TimeErrorIsFirstOrder) {
  const GridSpec g = GridSpec::uniform(32);
  const BoundaryData bd = BoundaryData::cosine_ramp(0.5, 0.1);
  const FlowState s = make_initial_state(g, InitialPreset::bump, bd);
  std::vector<FlowState> finals;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    finals.push_back(run(s, g, PhysParams{}, bd, fixed_steps(0.1, dt)).snapshots.back());
  }
  const double d1 = state_l2_distance(finals[0], finals[1], g);
  const double d2 = state_l2_distance(finals[1], finals[2], g);
  const double order = std::log2(d1 / d2);
  EXPECT_GT(order, 0.7);
  EXPECT_LT(order, 1.5);
}

TEST(Run, RejectsBadInputs) {
  const GridSpec g = GridSpec::uniform(16);
  const BoundaryData bd = BoundaryData::constant(1.0);
  const FlowState s = make_initial_state(g, InitialPreset::uniform, BoundaryData::zero());
  EXPECT_THROW(run(s, g, PhysParams{}, bd, TimeConfig{}), InvalidInput);
  TimeConfig c;
  c.dt_min = 1.0;
  EXPECT_THROW(run(s, g, PhysParams{}, BoundaryData::zero(), c), InvalidInput);
  EXPECT_THROW(run_limit(s, g, PhysParams{}, BoundaryData::zero(), TimeConfig{}), InvalidInput);
}

TEST(Run, AbortsWithFailureReport) {
  const GridSpec g = GridSpec::uniform(16);
  const FlowState s = make_initial_state(g, InitialPreset::uniform, BoundaryData::zero());
  ForcingSpec f;
  f.energy = [](double x, double) { return x > 0.5 ? -1e6 : 0.0; };
  TimeConfig c;
  c.t_end = 0.1;
  c.dt_max = 1e-2;
  c.dt_min = 1e-3;
  try {
    run(s, g, PhysParams{}, BoundaryData::zero(), c, f);
    FAIL() << "expected RunAborted";
  } catch (const RunAborted& e) {
    EXPECT_EQ(e.report.field, "theta");
    // implicit conduction spreads the sink, so any cell may go first
    EXPECT_GE(e.report.index, 0);
    EXPECT_LT(e.report.index, 16);
    EXPECT_DOUBLE_EQ(e.report.x, g.cell_centers[e.report.index]);
    EXPECT_LT(e.report.dt, c.dt_min);
    EXPECT_FALSE(e.report.message.empty());
  }
}

TEST(Manufactured, ForcingMatchesFiniteDifferenceResidual) {
  PhysParams p;
  p.lambda = 0.8;
  p.mu = 0.05;
  p.nu = 0.6;
  p.gamma = 1.4;
  p.c_v = 1.3;
  p.kappa_model = KappaModel{0.7, 0.4, 2.0};
  const ManufacturedSolution m = ManufacturedSolution::advecting();
  const ForcingSpec f = m.forcing(p);
  const double h = 1e-4;
  const auto dx = [h](auto g, double x, double t) { return (g(x + h, t) - g(x - h, t)) / (2 * h); };
  const auto dt = [h](auto g, double x, double t) { return (g(x, t + h) - g(x, t - h)) / (2 * h); };
  for (double x : {0.13, 0.37, 0.5, 0.81}) {
    for (double t : {0.0, 0.21, 0.7}) {
      const auto R = [&](double y, double s) { return m.rho.value(y, s); };
      const auto U = [&](double y, double s) { return m.u.value(y, s); };
      const auto TH = [&](double y, double s) { return m.theta.value(y, s); };
      const auto BB = [&](double y, double s) {
        return 0.5 * (std::pow(m.b[0].value(y, s), 2) + std::pow(m.b[1].value(y, s), 2));
      };

      const double cont = dt(R, x, t) + dx([&](double y, double s) { return R(y, s) * U(y, s); }, x, t);
      EXPECT_NEAR(f.continuity(x, t), cont, 1e-6);

      const double mom = dt([&](double y, double s) { return R(y, s) * U(y, s); }, x, t) +
                         dx([&](double y, double s) {
                           return R(y, s) * U(y, s) * U(y, s) + p.gamma * R(y, s) * TH(y, s) + BB(y, s) -
                                  p.lambda * m.u.d_x(y, s);
                         }, x, t);
      EXPECT_NEAR(f.momentum(x, t), mom, 1e-6);

      for (int c = 0; c < 2; ++c) {
        const auto W = [&](double y, double s) { return m.w[c].value(y, s); };
        const auto B = [&](double y, double s) { return m.b[c].value(y, s); };
        const double tr = dt([&](double y, double s) { return R(y, s) * W(y, s); }, x, t) +
                          dx([&](double y, double s) {
                            return R(y, s) * U(y, s) * W(y, s) - B(y, s) - p.mu * m.w[c].d_x(y, s);
                          }, x, t);
        EXPECT_NEAR(f.transverse(x, t)[c], tr, 1e-6);
        const double ind = dt(B, x, t) + dx([&](double y, double s) {
                             return U(y, s) * B(y, s) - W(y, s) - p.nu * m.b[c].d_x(y, s);
                           }, x, t);
        EXPECT_NEAR(f.induction(x, t)[c], ind, 1e-6);
      }

      const auto heat_flux = [&](double y, double s) {
        return p.c_v * R(y, s) * U(y, s) * TH(y, s) - kappa(R(y, s), TH(y, s), p.kappa_model) * m.theta.d_x(y, s);
      };
      const double ux = m.u.d_x(x, t);
      const Vec2 wx{m.w[0].d_x(x, t), m.w[1].d_x(x, t)};
      const Vec2 bx{m.b[0].d_x(x, t), m.b[1].d_x(x, t)};
      const double en = dt([&](double y, double s) { return p.c_v * R(y, s) * TH(y, s); }, x, t) +
                        dx(heat_flux, x, t) + pressure(R(x, t), TH(x, t), p.gamma) * ux -
                        dissipation_q(ux, wx, bx, p);
      EXPECT_NEAR(f.energy(x, t), en, 1e-6);
    }
  }
}

TEST(Manufactured, AdmissibilityChecks) {
  EXPECT_NO_THROW(ManufacturedSolution::steady().validate());
  EXPECT_NO_THROW(ManufacturedSolution::advecting().validate());
  ManufacturedSolution m = ManufacturedSolution::steady();
  m.u.cosine = true;
  m.u.amplitude = 0.1;
  EXPECT_THROW(m.validate(), InvalidInput);
  m = ManufacturedSolution::steady();
  m.rho.amplitude = 1.5;
  EXPECT_THROW(m.validate(), InvalidInput);
}

TEST(Manufactured, AdvectingSolutionConvergesAtFirstOrder) {
  const ManufacturedSolution m = ManufacturedSolution::advecting();
  const PhysParams p;
  const ForcingSpec f = m.forcing(p);
  const BoundaryData bd = m.boundary();
  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    const GridSpec g = GridSpec::uniform(n);
    const Trajectory tr = run(m.sample(g, 0.0), g, p, bd, fixed_steps(0.25, 0.05 * g.dx), f);
    err.push_back(state_l2_distance(tr.snapshots.back(), m.sample(g, 0.25), g));
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 0.8);
  EXPECT_GE(std::log2(err[1] / err[2]), 0.8);
}
