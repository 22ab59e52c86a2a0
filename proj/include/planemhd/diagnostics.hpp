// Discrete conserved quantities, weighted norms and error functionals.
//
// Quadrature: midpoint rule for cell quantities, trapezoid weights for node
// quantities, trapezoid rule in time.  Gradients are the forward differences
// the solver uses: u_x, w_x, b_x at cell centers, theta_x at interior nodes.
#pragma once

#include <vector>

#include "planemhd/core.hpp"

namespace planemhd {

/// min(x, 1 - x) on [0, 1].
double weight_omega(double x);

/// min(x, delta, 1 - x) on [0, 1] for delta in (0, 1/2).
double weight_omega_delta(double x, double delta);

DiagnosticsRecord record(const FlowState& s, const GridSpec& grid, const PhysParams& params);

/// r(t_k) = E(t_k) - E(0) - mu * int_0^{t_k} (w . w_x)|_0^1 ds, one entry per
/// diagnostics record.
std::vector<double> energy_balance_residual(const Trajectory& traj, const PhysParams& params);

/// Smallest increment of int rho S dx between consecutive snapshots (0 when
/// there are fewer than two snapshots).
double entropy_monotonicity(const Trajectory& traj, const GridSpec& grid, const PhysParams& params);

/// 10 dt dx with dt the largest accepted step of the trajectory.
double entropy_tolerance(const Trajectory& traj, const GridSpec& grid);

struct ErrorNorms {
  double state_error = 0.0;
  double gradient_error = 0.0;
  double combined = 0.0;
};

/// Distances between two trajectories sharing grid and snapshot times:
///   state_error    = max_k ||(rho, u, w, b, theta) diff||_{L2}
///   gradient_error = ||(u_x, b_x, theta_x) diff||_{L2(Q_T)}
ErrorNorms error_norms(const Trajectory& traj, const Trajectory& reference, const GridSpec& grid);

struct FieldDeviation {
  double rho = 0.0;
  double u = 0.0;
  double w = 0.0;
  double b = 0.0;
  double theta = 0.0;

  double max() const;
};

/// Per-field sup over snapshots and grid points of the absolute deviation.
/// delta = 0 takes the closed domain [0, 1]; delta in (0, 1/2) takes only the
/// points strictly inside (delta, 1 - delta).
FieldDeviation sup_deviation(const Trajectory& traj, const Trajectory& reference, const GridSpec& grid,
                             double delta);

double interior_sup_deviation(const Trajectory& traj, const Trajectory& reference, const GridSpec& grid,
                              double delta);

/// int_{delta}^{1-delta} |w_x|^2 dx over the cells centered in (delta, 1 - delta).
double interior_w_grad_sq(const FlowState& s, const GridSpec& grid, double delta);

}  // namespace planemhd
