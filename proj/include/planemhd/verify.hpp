// Self-checks behind the `verify` subcommand: steady state, conservation,
// agreement of the tridiagonal solves with dense LU, and manufactured-solution
// convergence orders.
#pragma once

#include <string>
#include <vector>

#include "planemhd/config.hpp"

namespace planemhd {

struct VerifyCheck {
  std::string suite;
  std::string name;
  double value = 0.0;
  std::string relation;  // "<=" or ">="
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool all_pass() const;
};

/// Uniform state, zero boundary data, 1000 CFL steps on cfg's grid and gas.
std::vector<VerifyCheck> verify_steady_state(const RunConfig& cfg);

/// Runs cfg's scenario: mass drift, positivity, entropy increments.
std::vector<VerifyCheck> verify_conservation(const RunConfig& cfg);

/// Each implicit sub-step on `samples` random states of 16 cells against a
/// dense LU solve of the same system.
std::vector<VerifyCheck> verify_oracle_equivalence(const RunConfig& cfg, int samples = 100, unsigned seed = 12345);

/// Spatial order on a steady solution (32, 64, 128 cells) and temporal order on
/// an unsteady one (256 cells, dt = 1e-3 and 5e-4).
std::vector<VerifyCheck> verify_manufactured(const RunConfig& cfg);

VerifyReport run_verification(const RunConfig& cfg);

}  // namespace planemhd
