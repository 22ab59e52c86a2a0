// Sectioned key = value run configuration.
//
//   # comment            (also ';')
//   [grid]      n_cells
//   [physics]   lambda mu nu gamma c_v kappa1 kappa2 q
//   [initial]   preset (uniform|bump|wb-zero)  or  table (CSV path)
//   [boundary]  preset (zero|constant|cosine-ramp) amplitude ramp_period
//   [time]      t_end cfl dt_max dt_min snapshot_stride linear_solver_tol
//   [output]    directory formats (comma list of csv, json)
//   [sweep]     mu_values reference (limit|finest) bl_tol (number|auto)
//               tau_deltas workers
//
// grid.n_cells and time.t_end are required; everything else has a default.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "planemhd/core.hpp"
#include "planemhd/solver.hpp"
#include "planemhd/sweep.hpp"

namespace planemhd {

class ConfigError : public InvalidInput {
 public:
  ConfigError(std::string section, std::string key, int line, const std::string& what);

  std::string section;
  std::string key;
  int line;  // 1-based; 0 when the key is missing altogether
};

struct SweepSettings {
  std::vector<double> mu_values{1e-2, 1e-3, 1e-4, 1e-5};
  ReferenceKind reference = ReferenceKind::limit;
  double bl_tol = 0.0;  // 0: 0.05 * max boundary amplitude
  std::vector<double> tau_deltas{0.05, 0.1, 0.2};
  int workers = 0;

  bool operator==(const SweepSettings&) const = default;
};

struct RunConfig {
  int n_cells = 0;
  PhysParams physics;
  InitialPreset initial_preset = InitialPreset::uniform;
  std::string initial_table;  // non-empty selects a tabulated profile
  BoundaryPreset boundary_preset = BoundaryPreset::zero;
  double amplitude = 0.0;
  double ramp_period = 0.25;
  TimeConfig time;
  std::string output_directory = "out";
  std::vector<std::string> formats{"csv", "json"};
  SweepSettings sweep;

  std::filesystem::path base_dir;  // resolves a relative initial_table; not emitted

  bool wants(const std::string& format) const;
  GridSpec grid() const;
  BoundaryData boundary() const;
  FlowState initial_state(const GridSpec& grid) const;
  Scenario scenario() const;
  SweepPlan sweep_plan() const;
};

bool same_settings(const RunConfig& a, const RunConfig& b);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text with every key resolved; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

/// FNV-1a 64-bit hash of emit_config, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Applies command-line overrides and re-validates.
void apply_overrides(RunConfig& cfg, std::optional<double> mu, std::optional<int> n_cells,
                     std::optional<double> t_end);

/// CSV with header x,rho,u,w1,w2,b1,b2,theta and one row per node.
TabulatedProfile load_profile_table(const std::filesystem::path& path);

/// printf "%.17g"; round-trips every finite double.
std::string format_double(double v);

}  // namespace planemhd
