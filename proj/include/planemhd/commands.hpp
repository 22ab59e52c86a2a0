// Subcommands behind the planemhd executable.  Each returns the process exit
// status: 0 when all requested work succeeded.
#pragma once

#include <filesystem>
#include <ostream>

#include "planemhd/config.hpp"

namespace planemhd {

/// snapshots.csv, diagnostics.csv, summary.json.
int cmd_run(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// cmd_run with physics.mu forced to 0.
int cmd_limit(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// sweep.csv, fits.json.
int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// thickness.csv, tau_table.csv, thickness.json.
int cmd_bl(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// verify_report.json.
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

}  // namespace planemhd
