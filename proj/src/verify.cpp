#include "planemhd/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "planemhd/diagnostics.hpp"
#include "planemhd/manufactured.hpp"

namespace planemhd {

namespace {

VerifyCheck at_most(std::string suite, std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(suite), std::move(name), value, "<=", threshold, value <= threshold, std::move(detail)};
}

VerifyCheck at_least(std::string suite, std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(suite), std::move(name), value, ">=", threshold, value >= threshold, std::move(detail)};
}

double dense_gap(const TridiagonalSystem& sys) {
  const int n = static_cast<int>(sys.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs(n);
  for (int k = 0; k < n; ++k) {
    a(k, k) = sys.diag[k];
    if (k > 0) a(k, k - 1) = sys.lower[k];
    if (k + 1 < n) a(k, k + 1) = sys.upper[k];
    rhs(k) = sys.rhs[k];
  }
  const Eigen::VectorXd dense = a.partialPivLu().solve(rhs);
  const auto x = tridiag_solve(sys);
  double gap = 0.0;
  for (int k = 0; k < n; ++k) gap = std::max(gap, std::abs(dense(k) - x[k]));
  return gap;
}

double residual_ratio(const TridiagonalSystem& sys) {
  const auto x = tridiag_solve(sys);
  double bmax = 0.0;
  for (double v : sys.rhs) bmax = std::max(bmax, std::abs(v));
  return tridiag_residual_inf(sys, x) / std::max(bmax, 1e-300);
}

FlowState random_state(const GridSpec& g, std::mt19937_64& rng, const BoundaryData& bdry) {
  std::uniform_real_distribution<double> pos(0.5, 1.5), sym(-1.0, 1.0);
  FlowState s;
  const int nc = g.n_cells;
  s.rho.resize(nc);
  s.theta.resize(nc);
  s.u.assign(nc + 1, 0.0);
  s.w.assign(nc + 1, Vec2{0.0, 0.0});
  s.b.assign(nc + 1, Vec2{0.0, 0.0});
  for (int i = 0; i < nc; ++i) {
    s.rho[i] = pos(rng);
    s.theta[i] = pos(rng);
  }
  for (int j = 1; j < nc; ++j) {
    s.u[j] = 0.3 * sym(rng);
    s.w[j] = Vec2{sym(rng), sym(rng)};
    s.b[j] = Vec2{0.5 * sym(rng), 0.5 * sym(rng)};
  }
  s.w.front() = bdry.w_minus(0.0);
  s.w.back() = bdry.w_plus(0.0);
  return s;
}

double manufactured_error(const ManufacturedSolution& m, int n, double t_end, double dt_max, const PhysParams& p,
                          double* max_step = nullptr) {
  const GridSpec g = GridSpec::uniform(n);
  TimeConfig tc;
  tc.t_end = t_end;
  tc.dt_max = dt_max;
  tc.snapshot_stride = 1 << 30;
  const Trajectory tr = run(m.sample(g, 0.0), g, p, m.boundary(), tc, m.forcing(p));
  if (max_step) *max_step = tr.max_step();
  return state_l2_distance(tr.snapshots.back(), m.sample(g, t_end), g);
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

std::vector<VerifyCheck> verify_steady_state(const RunConfig& cfg) {
  const GridSpec g = cfg.grid();
  const BoundaryData bdry = BoundaryData::zero();
  const FlowState initial = make_initial_state(g, InitialPreset::uniform, bdry);
  FlowState s = initial;
  for (int k = 0; k < 1000; ++k) s = step(s, g, stable_dt(s, g, cfg.physics, cfg.time), cfg.physics, bdry);
  double dev = 0.0;
  for (int i = 0; i < g.n_cells; ++i) {
    dev = std::max({dev, std::abs(s.rho[i] - 1.0), std::abs(s.theta[i] - 1.0)});
  }
  for (int j = 0; j <= g.n_cells; ++j) dev = std::max({dev, std::abs(s.u[j]), norm(s.w[j]), norm(s.b[j])});
  return {at_most("steady_state", "uniform_state_max_deviation_1000_steps", dev, 1e-13)};
}

std::vector<VerifyCheck> verify_conservation(const RunConfig& cfg) {
  std::vector<VerifyCheck> out;
  const Scenario sc = cfg.scenario();
  Trajectory tr;
  try {
    tr = run(sc.initial, sc.grid, sc.params, sc.bdry, sc.time);
  } catch (const RunAborted& e) {
    out.push_back(at_most("conservation", "run_completed", 1.0, 0.0, e.what()));
    return out;
  }
  const double m0 = tr.diagnostics.front().mass;
  double drift = 0.0, min_rho = 1e300, min_theta = 1e300;
  for (const auto& d : tr.diagnostics) {
    drift = std::max(drift, std::abs(d.mass - m0) / m0);
    min_rho = std::min(min_rho, d.min_rho);
    min_theta = std::min(min_theta, d.min_theta);
  }
  out.push_back(at_most("conservation", "relative_mass_drift", drift, 1e-12));
  out.push_back(at_least("conservation", "min_rho", min_rho, std::numeric_limits<double>::min()));
  out.push_back(at_least("conservation", "min_theta", min_theta, std::numeric_limits<double>::min()));
  const double tol = entropy_tolerance(tr, sc.grid);
  out.push_back(at_least("conservation", "min_entropy_increment", entropy_monotonicity(tr, sc.grid, sc.params), -tol));
  return out;
}

std::vector<VerifyCheck> verify_oracle_equivalence(const RunConfig& cfg, int samples, unsigned seed) {
  const GridSpec g = GridSpec::uniform(16);
  PhysParams p = cfg.physics;
  if (p.is_limit()) p.mu = 1e-3;  // the transverse system only exists for mu > 0
  const BoundaryData bdry = BoundaryData::constant(0.7);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_dt(std::log(1e-4), std::log(1e-2));

  double gap[4] = {0, 0, 0, 0};
  double resid = 0.0;
  for (int k = 0; k < samples; ++k) {
    const FlowState start = random_state(g, rng, bdry);
    const double dt = std::exp(log_dt(rng));
    FlowState latest = start;
    latest.rho = advance_density(start, g, dt);
    const MassFlux F = mass_flux(start);
    const SubstepInput in{start, latest, F, g, p, dt};

    const TridiagonalSystem vel = assemble_velocity(in);
    const TransverseSystem tra = assemble_transverse(in, bdry);
    const TransverseSystem ind = assemble_induction(in);
    const TridiagonalSystem tem = assemble_temperature(in);
    gap[0] = std::max(gap[0], dense_gap(vel));
    for (int c = 0; c < 2; ++c) {
      gap[1] = std::max(gap[1], dense_gap(tra.component[c]));
      gap[2] = std::max(gap[2], dense_gap(ind.component[c]));
      resid = std::max({resid, residual_ratio(tra.component[c]), residual_ratio(ind.component[c])});
    }
    gap[3] = std::max(gap[3], dense_gap(tem));
    resid = std::max({resid, residual_ratio(vel), residual_ratio(tem)});
  }
  const char* names[4] = {"velocity", "transverse", "induction", "temperature"};
  std::vector<VerifyCheck> out;
  for (int k = 0; k < 4; ++k) {
    out.push_back(at_most("oracle_equivalence", std::string(names[k]) + "_dense_max_gap", gap[k], 1e-12));
  }
  out.push_back(at_most("oracle_equivalence", "relative_residual", resid, cfg.time.linear_solver_tol));
  return out;
}

std::vector<VerifyCheck> verify_manufactured(const RunConfig& cfg) {
  PhysParams p = cfg.physics;
  p.mu = 1.0;
  std::vector<VerifyCheck> out;

  const ManufacturedSolution steady = ManufacturedSolution::steady();
  double e[3];
  const int ns[3] = {32, 64, 128};
  for (int k = 0; k < 3; ++k) e[k] = manufactured_error(steady, ns[k], 2.0, 1.0, p);
  const double spatial = std::min(std::log2(e[0] / e[1]), std::log2(e[1] / e[2]));
  out.push_back(at_least("manufactured", "spatial_order", spatial, 1.7,
                         "errors " + format_double(e[0]) + ", " + format_double(e[1]) + ", " + format_double(e[2])));

  const ManufacturedSolution unsteady = ManufacturedSolution::unsteady();
  double h1 = 0.0, h2 = 0.0;
  const double a = manufactured_error(unsteady, 256, 0.5, 1e-3, p, &h1);
  const double b = manufactured_error(unsteady, 256, 0.5, 5e-4, p, &h2);
  out.push_back(at_least("manufactured", "temporal_order", std::log2(a / b), 0.8,
                         "steps " + format_double(h1) + ", " + format_double(h2)));
  return out;
}

VerifyReport run_verification(const RunConfig& cfg) {
  VerifyReport rep;
  for (auto suite : {verify_steady_state, verify_conservation, verify_manufactured}) {
    auto checks = suite(cfg);
    rep.checks.insert(rep.checks.end(), checks.begin(), checks.end());
  }
  auto oracle = verify_oracle_equivalence(cfg);
  rep.checks.insert(rep.checks.end(), oracle.begin(), oracle.end());
  return rep;
}

}  // namespace planemhd
