// Smooth prescribed solutions and the source terms that make them exact
// solutions of the forced system.
#pragma once

#include "planemhd/core.hpp"
#include "planemhd/solver.hpp"

namespace planemhd {

/// f(x, t) = offset + amplitude * S(k pi x) * (1 + beta sin(omega t)) with S
/// sin or cos.
struct Mode {
  double offset = 0.0;
  double amplitude = 0.0;
  double k = 1.0;
  bool cosine = false;
  double beta = 0.0;
  double omega = 0.0;

  double value(double x, double t) const;
  double d_x(double x, double t) const;
  double d_xx(double x, double t) const;
  double d_t(double x, double t) const;
};

/// Admissible choices keep u and b sine modes (zero at the walls) and theta a
/// cosine mode (zero flux at the walls).
struct ManufacturedSolution {
  Mode rho;
  Mode u;
  Mode w[2];
  Mode b[2];
  Mode theta;

  /// Steady, u = 0: every term is treated by centred differences.
  static ManufacturedSolution steady();
  /// Time-dependent, u = 0.
  static ManufacturedSolution unsteady();
  /// Time-dependent with nonzero u; upwinding limits the spatial order to one.
  static ManufacturedSolution advecting();

  FlowState sample(const GridSpec& grid, double t) const;
  BoundaryData boundary() const;
  ForcingSpec forcing(const PhysParams& params) const;

  /// Checks the admissibility conditions above; throws InvalidInput.
  void validate() const;
};

/// sqrt of the sum over fields of squared discrete L2 differences (cells with
/// dx, nodes with trapezoid weights).
double state_l2_distance(const FlowState& a, const FlowState& b, const GridSpec& grid);

}  // namespace planemhd
