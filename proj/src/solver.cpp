#include "planemhd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "planemhd/diagnostics.hpp"
#include "planemhd/eos.hpp"

namespace planemhd {

namespace {

double eval(const ScalarSource& f, double x, double t) { return f ? f(x, t) : 0.0; }
Vec2 eval(const VectorSource& f, double x, double t) { return f ? f(x, t) : Vec2{0.0, 0.0}; }

[[noreturn]] void fail(const std::string& field, int index, double t, const std::string& why) {
  std::ostringstream os;
  os << why << " (" << field << "[" << index << "] at t=" << t << ")";
  throw StepFailure(field, index, t, os.str());
}

// Upwind value of a node quantity at cell center i, given the mass flux there.
template <class T>
const T& upwind_node(const std::vector<T>& q, const MassFlux& F, int i) {
  return F.cell[i] >= 0.0 ? q[i] : q[i + 1];
}

// Conservative advective flux difference (M q_up)|_{i=j} - (M q_up)|_{i=j-1}
// for interior node j, divided by dx.
double node_advection(const std::vector<double>& q, const MassFlux& F, int j, double dx) {
  return (F.cell[j] * upwind_node(q, F, j) - F.cell[j - 1] * upwind_node(q, F, j - 1)) / dx;
}

Vec2 node_advection(const std::vector<Vec2>& q, const MassFlux& F, int j, double dx) {
  return (1.0 / dx) * (F.cell[j] * upwind_node(q, F, j) - F.cell[j - 1] * upwind_node(q, F, j - 1));
}

void fill_diffusion(TridiagonalSystem& sys, const std::vector<double>& mass, double coef) {
  const std::size_t n = sys.size();
  for (std::size_t k = 0; k < n; ++k) {
    sys.diag[k] = mass[k] + 2.0 * coef;
    sys.lower[k] = k > 0 ? -coef : 0.0;
    sys.upper[k] = k + 1 < n ? -coef : 0.0;
  }
}

void check_finite(const std::vector<double>& v, const char* field, double t) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) fail(field, static_cast<int>(k), t, "non-finite value");
  }
}

void check_finite(const std::vector<Vec2>& v, const char* field, double t) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k][0]) || !std::isfinite(v[k][1])) fail(field, static_cast<int>(k), t, "non-finite value");
  }
}

}  // namespace

void TimeConfig::validate() const {
  if (!(t_end >= 0.0)) throw InvalidInput("time.t_end must be >= 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidInput("time.cfl must lie in (0, 1]");
  if (!(dt_max > 0.0)) throw InvalidInput("time.dt_max must be > 0");
  if (!(dt_min > 0.0)) throw InvalidInput("time.dt_min must be > 0");
  if (dt_min > dt_max) throw InvalidInput("time.dt_min must not exceed time.dt_max");
  if (snapshot_stride < 1) throw InvalidInput("time.snapshot_stride must be >= 1");
  if (!(linear_solver_tol > 0.0)) throw InvalidInput("time.linear_solver_tol must be > 0");
}

MassFlux mass_flux(const FlowState& s) {
  const int nc = s.n_cells();
  MassFlux F;
  F.face.assign(nc + 1, 0.0);
  F.cell.assign(nc, 0.0);
  for (int j = 1; j < nc; ++j) {
    const double u = s.u[j];
    F.face[j] = u * (u >= 0.0 ? s.rho[j - 1] : s.rho[j]);
  }
  for (int i = 0; i < nc; ++i) F.cell[i] = 0.5 * (F.face[i] + F.face[i + 1]);
  return F;
}

double stable_dt(const FlowState& s, const GridSpec& grid, const PhysParams& params, const TimeConfig& cfg) {
  const auto rho_n = interpolate_to_nodes(s.rho);
  const auto theta_n = interpolate_to_nodes(s.theta);
  double speed = 0.0;
  int limiting = 0;
  for (int j = 0; j <= grid.n_cells; ++j) {
    const double c = std::sqrt(params.gamma * theta_n[j] + norm_sq(s.b[j]) / rho_n[j]);
    const double sj = std::abs(s.u[j]) + c;
    if (sj > speed) {
      speed = sj;
      limiting = j;
    }
  }
  const double dt = cfg.cfl * grid.dx / std::max(speed, 1e-300);
  if (dt < cfg.dt_min) fail("dt", limiting, s.t, "CFL step below dt_min");
  return std::min(dt, cfg.dt_max);
}

std::vector<double> advance_density(const FlowState& s, const GridSpec& grid, double dt, const ForcingSpec& forcing) {
  const MassFlux F = mass_flux(s);
  const int nc = grid.n_cells;
  const double t1 = s.t + dt;
  std::vector<double> rho(nc);
  for (int i = 0; i < nc; ++i) {
    rho[i] = s.rho[i] - dt / grid.dx * (F.face[i + 1] - F.face[i]) + dt * eval(forcing.continuity, grid.cell_centers[i], t1);
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) fail("rho", i, t1, "density lost positivity");
  }
  return rho;
}

TridiagonalSystem assemble_velocity(const SubstepInput& in, const ForcingSpec& forcing) {
  const int nc = in.grid.n_cells;
  const double dx = in.grid.dx;
  const double dt = in.dt;
  const double t1 = in.start.t + dt;
  const auto m_old = interpolate_to_nodes(in.start.rho);
  const auto m_new = interpolate_to_nodes(in.latest.rho);

  // total pressure p + |b|^2/2 at cell centers
  std::vector<double> ptot(nc);
  for (int i = 0; i < nc; ++i) {
    ptot[i] = in.params.gamma * in.latest.rho[i] * in.latest.theta[i] +
              0.25 * (norm_sq(in.latest.b[i]) + norm_sq(in.latest.b[i + 1]));
  }

  TridiagonalSystem sys(nc - 1);
  std::vector<double> mass(nc - 1);
  for (int j = 1; j < nc; ++j) {
    const int k = j - 1;
    mass[k] = m_new[j];
    sys.rhs[k] = m_old[j] * in.start.u[j] - dt * node_advection(in.start.u, in.flux, j, dx) -
                 dt * (ptot[j] - ptot[j - 1]) / dx + dt * eval(forcing.momentum, in.grid.node_positions[j], t1);
  }
  fill_diffusion(sys, mass, dt * in.params.lambda / (dx * dx));
  return sys;
}

std::vector<double> advance_velocity(const SubstepInput& in, const ForcingSpec& forcing) {
  const auto x = tridiag_solve(assemble_velocity(in, forcing));
  std::vector<double> u(in.grid.n_cells + 1, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) u[k + 1] = x[k];
  check_finite(u, "u", in.start.t + in.dt);
  return u;
}

TransverseSystem assemble_transverse(const SubstepInput& in, const BoundaryData& bdry, const ForcingSpec& forcing) {
  if (in.params.is_limit()) throw InvalidInput("assemble_transverse: no implicit system for mu = 0");
  const int nc = in.grid.n_cells;
  const double dx = in.grid.dx;
  const double dt = in.dt;
  const double t1 = in.start.t + dt;
  const auto m_old = interpolate_to_nodes(in.start.rho);
  const auto m_new = interpolate_to_nodes(in.latest.rho);
  const auto& w = in.start.w;
  const auto& b = in.latest.b;
  const double coef = dt * in.params.mu / (dx * dx);

  TransverseSystem sys{TridiagonalSystem(nc - 1), TridiagonalSystem(nc - 1)};
  std::vector<double> mass(nc - 1);
  for (int j = 1; j < nc; ++j) {
    const int k = j - 1;
    mass[k] = m_new[j];
    const Vec2 adv = node_advection(w, in.flux, j, dx);
    const Vec2 bx = (0.5 / dx) * (b[j + 1] - b[j - 1]);
    const Vec2 f = eval(forcing.transverse, in.grid.node_positions[j], t1);
    for (int c = 0; c < 2; ++c) {
      sys.component[c].rhs[k] = m_old[j] * w[j][c] - dt * adv[c] + dt * bx[c] + dt * f[c];
    }
  }
  const Vec2 wm = bdry.w_minus(t1);
  const Vec2 wp = bdry.w_plus(t1);
  for (int c = 0; c < 2; ++c) {
    fill_diffusion(sys.component[c], mass, coef);
    sys.component[c].rhs.front() += coef * wm[c];
    sys.component[c].rhs.back() += coef * wp[c];
  }
  return sys;
}

std::vector<Vec2> advance_transverse(const SubstepInput& in, const BoundaryData& bdry, const ForcingSpec& forcing) {
  const int nc = in.grid.n_cells;
  const double dt = in.dt;
  const double t1 = in.start.t + dt;
  std::vector<Vec2> w_new(nc + 1, Vec2{0.0, 0.0});

  if (!in.params.is_limit()) {
    const TransverseSystem sys = assemble_transverse(in, bdry, forcing);
    for (int c = 0; c < 2; ++c) {
      const auto x = tridiag_solve(sys.component[c]);
      for (int j = 1; j < nc; ++j) w_new[j][c] = x[j - 1];
    }
    w_new.front() = bdry.w_minus(t1);
    w_new.back() = bdry.w_plus(t1);
    check_finite(w_new, "w", t1);
    return w_new;
  }

  // mu = 0: conservative upwind transport of rho w over the node control
  // volumes, walls included.  u = 0 at the walls makes them characteristic, so
  // no boundary data enters.
  const auto m_old = interpolate_to_nodes(in.start.rho);
  const auto m_new = interpolate_to_nodes(in.latest.rho);
  const auto& w = in.start.w;
  const auto& b = in.latest.b;
  for (int j = 0; j <= nc; ++j) {
    const double vol = node_weight(in.grid, j);
    const Vec2 right = j < nc ? in.flux.cell[j] * upwind_node(w, in.flux, j) : Vec2{0.0, 0.0};
    const Vec2 left = j > 0 ? in.flux.cell[j - 1] * upwind_node(w, in.flux, j - 1) : Vec2{0.0, 0.0};
    // int b_x over the control volume, b taken as the node average at its edges
    const Vec2 bdiff = 0.5 * (b[std::min(j + 1, nc)] - b[std::max(j - 1, 0)]);
    const Vec2 f = eval(forcing.transverse, in.grid.node_positions[j], t1);
    const Vec2 momentum = (m_old[j] * vol) * w[j] - dt * (right - left) + dt * bdiff + (dt * vol) * f;
    w_new[j] = (1.0 / (m_new[j] * vol)) * momentum;
  }
  check_finite(w_new, "w", t1);
  return w_new;
}

TransverseSystem assemble_induction(const SubstepInput& in, const ForcingSpec& forcing) {
  const int nc = in.grid.n_cells;
  const double dx = in.grid.dx;
  const double dt = in.dt;
  const double t1 = in.start.t + dt;
  const auto& u = in.latest.u;
  const auto& w = in.latest.w;
  const auto& b = in.start.b;

  TransverseSystem sys{TridiagonalSystem(nc - 1), TridiagonalSystem(nc - 1)};
  const std::vector<double> ones(nc - 1, 1.0);
  for (int j = 1; j < nc; ++j) {
    const int k = j - 1;
    const Vec2 ub_x = (0.5 / dx) * (u[j + 1] * b[j + 1] - u[j - 1] * b[j - 1]);
    const Vec2 w_x = (0.5 / dx) * (w[j + 1] - w[j - 1]);
    const Vec2 f = eval(forcing.induction, in.grid.node_positions[j], t1);
    for (int c = 0; c < 2; ++c) sys.component[c].rhs[k] = b[j][c] - dt * ub_x[c] + dt * w_x[c] + dt * f[c];
  }
  for (auto& comp : sys.component) fill_diffusion(comp, ones, dt * in.params.nu / (dx * dx));
  return sys;
}

std::vector<Vec2> advance_induction(const SubstepInput& in, const ForcingSpec& forcing) {
  const int nc = in.grid.n_cells;
  const TransverseSystem sys = assemble_induction(in, forcing);
  std::vector<Vec2> b_new(nc + 1, Vec2{0.0, 0.0});
  for (int c = 0; c < 2; ++c) {
    const auto x = tridiag_solve(sys.component[c]);
    for (int j = 1; j < nc; ++j) b_new[j][c] = x[j - 1];
  }
  check_finite(b_new, "b", in.start.t + in.dt);
  return b_new;
}

TridiagonalSystem assemble_temperature(const SubstepInput& in, const ForcingSpec& forcing) {
  const int nc = in.grid.n_cells;
  const double dx = in.grid.dx;
  const double dt = in.dt;
  const double t1 = in.start.t + dt;
  const double cv = in.params.c_v;
  const auto& theta = in.start.theta;
  const auto& rho_new = in.latest.rho;
  const auto& u = in.latest.u;
  const auto& w = in.latest.w;
  const auto& b = in.latest.b;

  // kappa frozen at (rho^{n+1}, theta^n); arithmetic mean on interior faces,
  // zero flux through the walls.
  std::vector<double> k_cell(nc);
  for (int i = 0; i < nc; ++i) k_cell[i] = kappa(rho_new[i], theta[i], in.params.kappa_model);
  std::vector<double> coef(nc + 1, 0.0);
  for (int j = 1; j < nc; ++j) coef[j] = dt * 0.5 * (k_cell[j - 1] + k_cell[j]) / (dx * dx);

  TridiagonalSystem sys(nc);
  for (int i = 0; i < nc; ++i) {
    const auto theta_up = [&](int j) { return in.flux.face[j] >= 0.0 ? theta[j - 1] : theta[j]; };
    const double flux_r = i + 1 < nc ? in.flux.face[i + 1] * theta_up(i + 1) : 0.0;
    const double flux_l = i > 0 ? in.flux.face[i] * theta_up(i) : 0.0;
    const double u_x = (u[i + 1] - u[i]) / dx;
    const Vec2 w_x = (1.0 / dx) * (w[i + 1] - w[i]);
    const Vec2 b_x = (1.0 / dx) * (b[i + 1] - b[i]);
    const double p = in.params.gamma * rho_new[i] * theta[i];

    sys.rhs[i] = cv * in.start.rho[i] * theta[i] - dt * cv * (flux_r - flux_l) / dx - dt * p * u_x +
                 dt * dissipation_q(u_x, w_x, b_x, in.params) + dt * eval(forcing.energy, in.grid.cell_centers[i], t1);
    sys.diag[i] = cv * rho_new[i] + coef[i] + coef[i + 1];
    sys.lower[i] = i > 0 ? -coef[i] : 0.0;
    sys.upper[i] = i + 1 < nc ? -coef[i + 1] : 0.0;
  }
  return sys;
}

std::vector<double> advance_temperature(const SubstepInput& in, const ForcingSpec& forcing) {
  // Solved for the increment theta^{n+1} - theta^n, with A theta^n formed from
  // neighbour differences: a uniform state then has an exactly zero right-hand
  // side and stays bitwise fixed.
  TridiagonalSystem sys = assemble_temperature(in, forcing);
  const auto& th = in.start.theta;
  const std::size_t n = th.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? -sys.lower[i] : 0.0;
    const double right = i + 1 < n ? -sys.upper[i] : 0.0;
    double a_theta = in.params.c_v * in.latest.rho[i] * th[i];
    if (i > 0) a_theta -= left * (th[i - 1] - th[i]);
    if (i + 1 < n) a_theta -= right * (th[i + 1] - th[i]);
    sys.rhs[i] -= a_theta;
  }
  auto theta = tridiag_solve(sys);
  for (std::size_t i = 0; i < n; ++i) theta[i] += th[i];
  const double t1 = in.start.t + in.dt;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > 0.0) || !std::isfinite(theta[i])) {
      fail("theta", static_cast<int>(i), t1, "temperature lost positivity");
    }
  }
  return theta;
}

FlowState step(const FlowState& s, const GridSpec& grid, double dt, const PhysParams& params, const BoundaryData& bdry,
               const ForcingSpec& forcing) {
  if (!(dt > 0.0)) throw InvalidInput("step: dt must be > 0");
  const MassFlux F = mass_flux(s);
  FlowState next = s;
  next.t = s.t + dt;
  next.rho = advance_density(s, grid, dt, forcing);

  const SubstepInput in{s, next, F, grid, params, dt};
  next.u = advance_velocity(in, forcing);
  next.w = advance_transverse(in, bdry, forcing);
  next.b = advance_induction(in, forcing);
  next.theta = advance_temperature(in, forcing);
  return next;
}

Trajectory run(const FlowState& initial, const GridSpec& grid, const PhysParams& params, const BoundaryData& bdry,
               const TimeConfig& cfg, const ForcingSpec& forcing) {
  params.validate();
  cfg.validate();
  validate_state(initial, grid, params.is_limit() ? nullptr : &bdry, 1e-10);

  Trajectory traj;
  traj.snapshots.push_back(initial);
  traj.snapshot_times.push_back(initial.t);
  traj.diagnostics.push_back(record(initial, grid, params));

  FlowState state = initial;
  long steps = 0;
  const double t_end = cfg.t_end;
  const double t_eps = 1e-12 * std::max(1.0, t_end);

  while (t_end - state.t > t_eps) {
    double dt = 0.0;
    try {
      dt = stable_dt(state, grid, params, cfg);
    } catch (const StepFailure& e) {
      FailureReport r{state.t, 0.0, e.field, e.index, grid.node_positions[e.index], e.what()};
      throw RunAborted(r);
    }
    const bool last = dt >= t_end - state.t - t_eps;
    if (last) dt = t_end - state.t;

    FlowState next;
    for (;;) {
      try {
        next = step(state, grid, dt, params, bdry, forcing);
        break;
      } catch (const StepFailure& e) {
        dt *= 0.5;
        if (dt < cfg.dt_min) {
          const bool cell_field = e.field == "rho" || e.field == "theta";
          const double x = e.index < 0 ? 0.0
                           : cell_field ? grid.cell_centers[e.index]
                                        : grid.node_positions[e.index];
          FailureReport r{e.t, dt, e.field, e.index, x, e.what()};
          throw RunAborted(r);
        }
      }
    }
    if (last && next.t != t_end && std::abs(next.t - t_end) <= t_eps) next.t = t_end;
    state = std::move(next);
    ++steps;

    DiagnosticsRecord d = record(state, grid, params);
    d.dt = dt;
    traj.diagnostics.push_back(std::move(d));

    const bool done = t_end - state.t <= t_eps;
    if (done || steps % cfg.snapshot_stride == 0) {
      traj.snapshots.push_back(state);
      traj.snapshot_times.push_back(state.t);
    }
  }
  return traj;
}

Trajectory run_limit(const FlowState& initial, const GridSpec& grid, const PhysParams& params,
                     const BoundaryData& bdry, const TimeConfig& cfg, const ForcingSpec& forcing) {
  if (params.mu != 0.0) throw InvalidInput("run_limit requires physics.mu = 0");
  return run(initial, grid, params, bdry, cfg, forcing);
}

}  // namespace planemhd
