// Semi-implicit, operator-split time integration of the plane-MHD system
//
//   rho_t + (rho u)_x                         = 0
//   (rho u)_t + (rho u^2 + p + |b|^2/2)_x     = (lambda u_x)_x
//   (rho w)_t + (rho u w - b)_x               = (mu w_x)_x
//   b_t + (u b - w)_x                         = (nu b_x)_x
//   (rho e)_t + (rho u e)_x - (kappa theta_x)_x + p u_x = lambda u_x^2 + mu |w_x|^2 + nu |b_x|^2
//
// with u = b = theta_x = 0 and w = w^{-/+}(t) at the walls.  mu = 0 selects
// the limit system, where the transverse equation is purely hyperbolic and no
// wall condition is imposed on w.
//
// One step runs density -> velocity -> transverse -> induction -> temperature;
// each sub-step sees the most recent fields.  Advection and coupling terms are
// explicit (first-order upwind for advective fluxes), diffusion is implicit
// Euler with one tridiagonal solve per component.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planemhd/core.hpp"
#include "planemhd/tridiag.hpp"

namespace planemhd {

struct TimeConfig {
  double t_end = 1.0;
  double cfl = 0.4;
  double dt_max = 1e-2;
  double dt_min = 1e-10;
  int snapshot_stride = 10;
  double linear_solver_tol = 1e-12;

  void validate() const;
};

using ScalarSource = std::function<double(double x, double t)>;
using VectorSource = std::function<Vec2(double x, double t)>;

/// Optional right-hand sides added to the conservative equations above.
struct ForcingSpec {
  ScalarSource continuity;
  ScalarSource momentum;
  VectorSource transverse;
  VectorSource induction;
  ScalarSource energy;
};

class StepFailure : public std::runtime_error {
 public:
  StepFailure(std::string field, int index, double t, const std::string& what)
      : std::runtime_error(what), field(std::move(field)), index(index), t(t) {}

  std::string field;
  int index;
  double t;
};

struct FailureReport {
  double t = 0.0;
  double dt = 0.0;
  std::string field;
  int index = -1;
  double x = 0.0;
  std::string message;
};

class RunAborted : public std::runtime_error {
 public:
  explicit RunAborted(FailureReport r) : std::runtime_error(r.message), report(std::move(r)) {}
  FailureReport report;
};

/// Upwind mass fluxes.  face[j] = rho_upwind u_j at node j (zero at the walls);
/// cell[i] = (face[i] + face[i+1]) / 2 is the flux through cell center i, i.e.
/// between the node control volumes j = i and j = i + 1.
struct MassFlux {
  std::vector<double> face;
  std::vector<double> cell;
};

MassFlux mass_flux(const FlowState& s);

/// Everything a sub-step reads.  `start` holds the fields at t_n, `latest` the
/// partially advanced fields of the current step.
struct SubstepInput {
  const FlowState& start;
  const FlowState& latest;
  const MassFlux& flux;
  const GridSpec& grid;
  const PhysParams& params;
  double dt;
};

struct TransverseSystem {
  TridiagonalSystem component[2];
};

/// cfl dx / max_j(|u_j| + c_j) clamped to dt_max, with c^2 = gamma theta + |b|^2 / rho
/// at the nodes.  Throws StepFailure if the CFL bound is below dt_min.
double stable_dt(const FlowState& s, const GridSpec& grid, const PhysParams& params, const TimeConfig& cfg);

std::vector<double> advance_density(const FlowState& s, const GridSpec& grid, double dt,
                                    const ForcingSpec& forcing = {});

TridiagonalSystem assemble_velocity(const SubstepInput& in, const ForcingSpec& forcing = {});
std::vector<double> advance_velocity(const SubstepInput& in, const ForcingSpec& forcing = {});

/// Only defined for mu > 0; the unknowns are the interior nodes 1..N-1.
TransverseSystem assemble_transverse(const SubstepInput& in, const BoundaryData& bdry,
                                     const ForcingSpec& forcing = {});
std::vector<Vec2> advance_transverse(const SubstepInput& in, const BoundaryData& bdry,
                                     const ForcingSpec& forcing = {});

TransverseSystem assemble_induction(const SubstepInput& in, const ForcingSpec& forcing = {});
std::vector<Vec2> advance_induction(const SubstepInput& in, const ForcingSpec& forcing = {});

TridiagonalSystem assemble_temperature(const SubstepInput& in, const ForcingSpec& forcing = {});
std::vector<double> advance_temperature(const SubstepInput& in, const ForcingSpec& forcing = {});

FlowState step(const FlowState& s, const GridSpec& grid, double dt, const PhysParams& params,
               const BoundaryData& bdry, const ForcingSpec& forcing = {});

/// Integrates to cfg.t_end.  Snapshots every cfg.snapshot_stride accepted steps
/// plus the initial and final states; one DiagnosticsRecord per accepted step.
/// Failed sub-steps are retried with half the step down to dt_min, after which
/// RunAborted is thrown.
Trajectory run(const FlowState& initial, const GridSpec& grid, const PhysParams& params, const BoundaryData& bdry,
               const TimeConfig& cfg, const ForcingSpec& forcing = {});

/// run() for the mu = 0 limit system; rejects params.mu != 0.
Trajectory run_limit(const FlowState& initial, const GridSpec& grid, const PhysParams& params,
                     const BoundaryData& bdry, const TimeConfig& cfg, const ForcingSpec& forcing = {});

}  // namespace planemhd
