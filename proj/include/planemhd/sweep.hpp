// Shear-viscosity sweeps: runs a scenario for a decreasing list of mu, measures
// each run against a reference (the mu = 0 limit run or the smallest-mu run),
// estimates boundary-layer thickness and fits power laws in mu.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "planemhd/core.hpp"
#include "planemhd/diagnostics.hpp"
#include "planemhd/solver.hpp"

namespace planemhd {

enum class ReferenceKind { limit, finest };

std::string to_string(ReferenceKind k);
ReferenceKind reference_kind_from_string(const std::string& s);

/// Everything of a run except mu.
struct Scenario {
  GridSpec grid;
  PhysParams params;
  FlowState initial;
  BoundaryData bdry;
  TimeConfig time;
};

struct SweepPlan {
  std::vector<double> mu_values;  // strictly decreasing, > 0
  Scenario scenario;
  ReferenceKind reference = ReferenceKind::limit;
  double bl_tol = 0.0;  // <= 0 selects 0.05 * max boundary amplitude
  std::vector<double> tau_deltas{0.05, 0.1, 0.2};
  int max_workers = 0;  // <= 0: one worker per run

  void validate() const;
  double resolved_bl_tol() const;
};

struct PowerLawFit {
  bool valid = false;
  double exponent = 0.0;
  double prefactor = 0.0;
  double max_log_residual = 0.0;
  std::vector<std::size_t> used;  // indices of the points entering the fit
  std::string note;
};

/// Least squares on (ln x, ln y).  Needs >= 3 points with positive coordinates.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// fit_power_law over points ordered by decreasing x; the first point (largest
/// x) is dropped when its log-residual exceeds 3x the median residual.
PowerLawFit fit_power_law_excluding_preasymptotic(const std::vector<double>& x, const std::vector<double>& y);

struct ThicknessEstimate {
  double delta = 0.0;
  bool saturated = false;  // no candidate <= 1/4 met the tolerance; delta = 1/4
};

/// Smallest delta in {dx, 2dx, ...} with delta <= 1/4 such that the interior
/// sup deviation over (delta, 1 - delta) is <= tol.
ThicknessEstimate bl_thickness(const Trajectory& traj, const Trajectory& reference, double tol, const GridSpec& grid);

struct MuRun {
  double mu = 0.0;
  bool ok = false;
  std::optional<FailureReport> failure;
  std::string error;  // non-solver failure (e.g. mismatched snapshot times)

  ErrorNorms errors;
  ThicknessEstimate thickness;
  double w_full_sup = 0.0;             // sup over [0,1] x [0,T] of |w - w_ref|
  double max_w_grad_sq = 0.0;          // max_t ||w_x||^2_{L2}
  double scaled_w_grad = 0.0;          // mu^{1/2} max_t ||w_x||^2_{L2}
  double max_w_grad_l1 = 0.0;          // max_t ||w_x||_{L1}
  std::map<int, double> max_weighted;  // max_t int omega^n |w_x|^2
  std::map<double, double> interior_grad;  // delta -> max_t ||w_x||^2_{L2(delta,1-delta)}
  double max_theta = 0.0, min_theta = 0.0, max_rho = 0.0, min_rho = 0.0;
};

struct SweepResult {
  std::vector<MuRun> runs;  // aligned with plan.mu_values
  std::optional<FailureReport> reference_failure;
  double bl_tol = 0.0;
  PowerLawFit rate_fit;       // combined error vs mu
  PowerLawFit thickness_fit;  // delta* vs mu, unsaturated runs only
  std::vector<std::string> notes;
};

/// Runs the reference and every mu concurrently.  Failed runs are recorded and
/// skipped; fits need three successes.
SweepResult run_sweep(const SweepPlan& plan);

struct TauRow {
  double mu = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  double value = 0.0;  // max_t ||w_x||^2_{L2(delta,1-delta)}
};

/// Affine upper envelope value <= c1 tau + c2 + max_error obtained from the
/// minimax (Chebyshev) affine fit of the rows with tau <= 1.
struct TauEnvelope {
  bool valid = false;
  double c1 = 0.0;
  double c2 = 0.0;
  double max_error = 0.0;
  double relative_residual = 0.0;  // max_error / max |value|
};

/// For fixed delta the interior-gradient bound C (tau + tau^3 + ...) +
/// C mu^{(n-1)/2} / delta^n is a function of tau alone, so envelopes are fitted
/// per delta.
struct ThicknessReport {
  PowerLawFit alpha_fit;
  std::vector<TauRow> tau_table;  // every (mu, delta) pair
  std::map<double, TauEnvelope> envelopes;   // per delta, rows with tau <= 1
  std::map<double, bool> decreasing_in_mu;   // per delta, rows with tau <= 1
  std::vector<std::string> notes;

  /// Largest relative residual over the valid envelopes (0 if none).
  double worst_envelope_residual() const;
};

/// Minimax affine fit of value against tau over the rows with tau <= 1.
TauEnvelope fit_tau_envelope(const std::vector<TauRow>& rows);

ThicknessReport thickness_scaling_report(const SweepResult& result, const std::vector<double>& tau_deltas);

}  // namespace planemhd
