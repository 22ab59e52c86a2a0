// Deterministic CSV/JSON emission.  CSV files start with a
// "# config_hash=<hex>" line; JSON files carry "config_hash" as the first key.
// Floats in CSV use %.17g.
#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "json.hpp"
#include "planemhd/core.hpp"
#include "planemhd/solver.hpp"
#include "planemhd/sweep.hpp"

namespace planemhd {

using ordered_json = nlohmann::ordered_json;

/// t, x, rho, u, w1, w2, b1, b2, theta at every node of every snapshot; the
/// cell fields rho and theta are interpolated to the nodes.
void write_snapshots_csv(std::ostream& os, const Trajectory& traj, const std::string& hash);

/// One row per DiagnosticsRecord, including the running energy-balance residual.
void write_diagnostics_csv(std::ostream& os, const Trajectory& traj, const PhysParams& params,
                           const std::string& hash);

/// mu, combined/state/gradient error, delta*, saturation, scaled norms and bounds.
void write_sweep_csv(std::ostream& os, const SweepResult& result, const std::string& hash);

/// mu, delta*, saturated, full-domain w deviation, tolerance.
void write_thickness_csv(std::ostream& os, const SweepResult& result, const std::string& hash);

/// mu, delta, tau, value of the interior-gradient table.
void write_tau_table_csv(std::ostream& os, const ThicknessReport& report, const std::string& hash);

ordered_json to_json(const FailureReport& r);
ordered_json to_json(const PowerLawFit& f);
ordered_json to_json(const TauEnvelope& e);

/// Writes `text` to `dir / name`, creating `dir`; throws on I/O failure.
std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text);

}  // namespace planemhd
