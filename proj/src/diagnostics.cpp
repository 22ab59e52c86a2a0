#include "planemhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "planemhd/eos.hpp"

namespace planemhd {

namespace {

void check_matched(const Trajectory& a, const Trajectory& b, const GridSpec& grid) {
  if (a.snapshots.size() != b.snapshots.size() || a.snapshot_times.size() != b.snapshot_times.size()) {
    throw InvalidInput("trajectories have different snapshot counts (" + std::to_string(a.snapshots.size()) +
                       " vs " + std::to_string(b.snapshots.size()) + ")");
  }
  const double scale = std::max(1.0, a.t_end());
  for (std::size_t k = 0; k < a.snapshot_times.size(); ++k) {
    if (std::abs(a.snapshot_times[k] - b.snapshot_times[k]) > 1e-9 * scale) {
      throw InvalidInput("snapshot times differ at index " + std::to_string(k));
    }
  }
  for (const auto* traj : {&a, &b}) {
    for (const auto& s : traj->snapshots) {
      if (s.n_cells() != grid.n_cells) throw InvalidInput("trajectory grid does not match n_cells");
    }
  }
}

double sq(double x) { return x * x; }

}  // namespace

double weight_omega(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("weight_omega: x must lie in [0, 1]");
  return std::min(x, 1.0 - x);
}

double weight_omega_delta(double x, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidInput("weight_omega_delta: delta must lie in (0, 1/2)");
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("weight_omega_delta: x must lie in [0, 1]");
  return std::min({x, delta, 1.0 - x});
}

DiagnosticsRecord record(const FlowState& s, const GridSpec& grid, const PhysParams& params) {
  const int nc = grid.n_cells;
  const double dx = grid.dx;
  const auto rho_n = interpolate_to_nodes(s.rho);

  DiagnosticsRecord d;
  d.t = s.t;
  d.min_rho = d.min_theta = std::numeric_limits<double>::infinity();
  d.max_rho = d.max_theta = -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 4; ++n) d.weighted_w_grad[n] = 0.0;

  for (int i = 0; i < nc; ++i) {
    const double rho = s.rho[i];
    const double theta = s.theta[i];
    d.mass += rho * dx;
    d.total_energy += rho * internal_energy(theta, params.c_v) * dx;
    d.total_entropy += rho * entropy_density(rho, theta, params.gamma) * dx;
    d.min_rho = std::min(d.min_rho, rho);
    d.max_rho = std::max(d.max_rho, rho);
    d.min_theta = std::min(d.min_theta, theta);
    d.max_theta = std::max(d.max_theta, theta);

    const double u_x = (s.u[i + 1] - s.u[i]) / dx;
    const Vec2 w_x = (1.0 / dx) * (s.w[i + 1] - s.w[i]);
    const Vec2 b_x = (1.0 / dx) * (s.b[i + 1] - s.b[i]);
    d.dissipation_integral += dissipation_q(u_x, w_x, b_x, params) * dx;
    const double wx2 = norm_sq(w_x);
    d.w_grad_l2 += wx2 * dx;
    d.w_grad_l1 += std::sqrt(wx2) * dx;
    const double om = weight_omega(grid.cell_centers[i]);
    double pw = 1.0;
    for (int n = 1; n <= 4; ++n) {
      pw *= om;
      d.weighted_w_grad[n] += pw * wx2 * dx;
    }
  }
  // kinetic and magnetic parts live on the nodes
  for (int j = 0; j <= nc; ++j) {
    ConstitutiveSample node{rho_n[j], 0.0, s.u[j], s.w[j], s.b[j]};
    d.total_energy += total_energy_density(node, params.c_v) * node_weight(grid, j);
  }
  const Vec2 wx_left = (1.0 / dx) * (s.w[1] - s.w[0]);
  const Vec2 wx_right = (1.0 / dx) * (s.w[nc] - s.w[nc - 1]);
  d.boundary_work_rate = dot(s.w[nc], wx_right) - dot(s.w[0], wx_left);
  return d;
}

std::vector<double> energy_balance_residual(const Trajectory& traj, const PhysParams& params) {
  std::vector<double> r;
  if (traj.diagnostics.empty()) return r;
  const auto& d = traj.diagnostics;
  const double e0 = d.front().total_energy;
  double work = 0.0;
  r.reserve(d.size());
  r.push_back(0.0);
  for (std::size_t k = 1; k < d.size(); ++k) {
    const double h = d[k].t - d[k - 1].t;
    work += 0.5 * h * (d[k].boundary_work_rate + d[k - 1].boundary_work_rate);
    r.push_back(d[k].total_energy - e0 - params.mu * work);
  }
  return r;
}

double entropy_monotonicity(const Trajectory& traj, const GridSpec& grid, const PhysParams& params) {
  if (traj.snapshots.size() < 2) return 0.0;
  auto total = [&](const FlowState& s) {
    double acc = 0.0;
    for (int i = 0; i < grid.n_cells; ++i) acc += s.rho[i] * entropy_density(s.rho[i], s.theta[i], params.gamma) * grid.dx;
    return acc;
  };
  double prev = total(traj.snapshots.front());
  double min_inc = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
    const double cur = total(traj.snapshots[k]);
    min_inc = std::min(min_inc, cur - prev);
    prev = cur;
  }
  return min_inc;
}

double entropy_tolerance(const Trajectory& traj, const GridSpec& grid) { return 10.0 * traj.max_step() * grid.dx; }

ErrorNorms error_norms(const Trajectory& traj, const Trajectory& reference, const GridSpec& grid) {
  check_matched(traj, reference, grid);
  const int nc = grid.n_cells;
  const double dx = grid.dx;

  ErrorNorms e;
  std::vector<double> grad_sq(traj.snapshots.size(), 0.0);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const FlowState& a = traj.snapshots[k];
    const FlowState& r = reference.snapshots[k];
    double state = 0.0;
    double grad = 0.0;
    for (int i = 0; i < nc; ++i) {
      state += (sq(a.rho[i] - r.rho[i]) + sq(a.theta[i] - r.theta[i])) * dx;
      const double du_x = ((a.u[i + 1] - a.u[i]) - (r.u[i + 1] - r.u[i])) / dx;
      const Vec2 db_x = (1.0 / dx) * ((a.b[i + 1] - a.b[i]) - (r.b[i + 1] - r.b[i]));
      grad += (sq(du_x) + norm_sq(db_x)) * dx;
    }
    for (int j = 0; j <= nc; ++j) {
      state += (sq(a.u[j] - r.u[j]) + norm_sq(a.w[j] - r.w[j]) + norm_sq(a.b[j] - r.b[j])) * node_weight(grid, j);
    }
    for (int j = 1; j < nc; ++j) {
      const double dth_x = ((a.theta[j] - a.theta[j - 1]) - (r.theta[j] - r.theta[j - 1])) / dx;
      grad += sq(dth_x) * dx;
    }
    e.state_error = std::max(e.state_error, std::sqrt(state));
    grad_sq[k] = grad;
  }
  double integral = 0.0;
  for (std::size_t k = 1; k < grad_sq.size(); ++k) {
    integral += 0.5 * (traj.snapshot_times[k] - traj.snapshot_times[k - 1]) * (grad_sq[k] + grad_sq[k - 1]);
  }
  e.gradient_error = std::sqrt(integral);
  e.combined = e.state_error + e.gradient_error;
  return e;
}

double FieldDeviation::max() const { return std::max({rho, u, w, b, theta}); }

FieldDeviation sup_deviation(const Trajectory& traj, const Trajectory& reference, const GridSpec& grid, double delta) {
  if (delta != 0.0 && !(delta > 0.0 && delta < 0.5)) {
    throw InvalidInput("sup_deviation: delta must be 0 or lie in (0, 1/2)");
  }
  check_matched(traj, reference, grid);
  auto inside = [delta](double x) { return delta == 0.0 || (x > delta && x < 1.0 - delta); };

  bool any = false;
  for (double x : grid.cell_centers) any = any || inside(x);
  for (double x : grid.node_positions) any = any || inside(x);
  if (!any) {
    throw InvalidInput("no grid point inside (delta, 1 - delta); largest usable delta is below " +
                       std::to_string(0.5 - 0.5 * grid.dx));
  }

  FieldDeviation dev;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const FlowState& a = traj.snapshots[k];
    const FlowState& r = reference.snapshots[k];
    for (int i = 0; i < grid.n_cells; ++i) {
      if (!inside(grid.cell_centers[i])) continue;
      dev.rho = std::max(dev.rho, std::abs(a.rho[i] - r.rho[i]));
      dev.theta = std::max(dev.theta, std::abs(a.theta[i] - r.theta[i]));
    }
    for (int j = 0; j <= grid.n_cells; ++j) {
      if (!inside(grid.node_positions[j])) continue;
      dev.u = std::max(dev.u, std::abs(a.u[j] - r.u[j]));
      dev.w = std::max(dev.w, norm(a.w[j] - r.w[j]));
      dev.b = std::max(dev.b, norm(a.b[j] - r.b[j]));
    }
  }
  return dev;
}

double interior_sup_deviation(const Trajectory& traj, const Trajectory& reference, const GridSpec& grid,
                              double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidInput("interior_sup_deviation: delta must lie in (0, 1/2)");
  return sup_deviation(traj, reference, grid, delta).max();
}

double interior_w_grad_sq(const FlowState& s, const GridSpec& grid, double delta) {
  double acc = 0.0;
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.cell_centers[i];
    if (x <= delta || x >= 1.0 - delta) continue;
    acc += norm_sq((1.0 / grid.dx) * (s.w[i + 1] - s.w[i])) * grid.dx;
  }
  return acc;
}

}  // namespace planemhd
