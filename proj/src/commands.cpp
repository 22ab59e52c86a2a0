#include "planemhd/commands.hpp"

#include <sstream>

#include "planemhd/diagnostics.hpp"
#include "planemhd/io.hpp"
#include "planemhd/verify.hpp"

namespace planemhd {

namespace {

void write_resolved_config(const RunConfig& cfg, const std::string& hash, const std::filesystem::path& out) {
  write_file(out, "resolved_config.ini", "# config_hash=" + hash + "\n" + emit_config(cfg));
}

template <class Writer>
void write_csv(const std::filesystem::path& out, const std::string& name, Writer&& w) {
  std::ostringstream os;
  w(os);
  write_file(out, name, os.str());
}

ordered_json record_json(const DiagnosticsRecord& d) {
  ordered_json j;
  j["t"] = d.t;
  j["mass"] = d.mass;
  j["total_energy"] = d.total_energy;
  j["total_entropy"] = d.total_entropy;
  j["min_rho"] = d.min_rho;
  j["max_rho"] = d.max_rho;
  j["min_theta"] = d.min_theta;
  j["max_theta"] = d.max_theta;
  j["dissipation_integral"] = d.dissipation_integral;
  j["w_grad_l2"] = d.w_grad_l2;
  j["w_grad_l1"] = d.w_grad_l1;
  return j;
}

int run_and_report(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log, const char* command) {
  const std::string hash = config_hash(cfg);
  const Scenario sc = cfg.scenario();
  write_resolved_config(cfg, hash, out);

  ordered_json summary;
  summary["config_hash"] = hash;
  summary["command"] = command;
  summary["mu"] = sc.params.mu;
  summary["n_cells"] = sc.grid.n_cells;
  summary["t_end"] = sc.time.t_end;

  Trajectory tr;
  try {
    tr = sc.params.is_limit() ? run_limit(sc.initial, sc.grid, sc.params, sc.bdry, sc.time)
                              : run(sc.initial, sc.grid, sc.params, sc.bdry, sc.time);
  } catch (const RunAborted& e) {
    summary["status"] = "aborted";
    summary["failure"] = to_json(e.report);
    if (cfg.wants("json")) write_file(out, "summary.json", summary.dump(2) + "\n");
    log << command << ": aborted: " << e.what() << "\n";
    return 1;
  }

  const auto residual = energy_balance_residual(tr, sc.params);
  double drift = 0.0, max_res = 0.0;
  const double m0 = tr.diagnostics.front().mass;
  for (const auto& d : tr.diagnostics) drift = std::max(drift, std::abs(d.mass - m0) / m0);
  for (double r : residual) max_res = std::max(max_res, std::abs(r));

  summary["status"] = "completed";
  summary["steps"] = tr.diagnostics.size() - 1;
  summary["snapshots"] = tr.snapshots.size();
  summary["max_dt"] = tr.max_step();
  summary["relative_mass_drift"] = drift;
  summary["max_energy_residual"] = max_res;
  summary["min_entropy_increment"] = entropy_monotonicity(tr, sc.grid, sc.params);
  summary["entropy_tolerance"] = entropy_tolerance(tr, sc.grid);
  summary["initial"] = record_json(tr.diagnostics.front());
  summary["final"] = record_json(tr.diagnostics.back());

  if (cfg.wants("csv")) {
    write_csv(out, "snapshots.csv", [&](std::ostream& os) { write_snapshots_csv(os, tr, hash); });
    write_csv(out, "diagnostics.csv", [&](std::ostream& os) { write_diagnostics_csv(os, tr, sc.params, hash); });
  }
  if (cfg.wants("json")) write_file(out, "summary.json", summary.dump(2) + "\n");
  log << command << ": completed " << tr.diagnostics.size() - 1 << " steps to t = " << tr.t_end()
      << ", relative mass drift " << drift << "\n";
  return 0;
}

bool sweep_succeeded(const SweepResult& r) {
  if (r.reference_failure) return false;
  for (const auto& run : r.runs) {
    if (!run.ok) return false;
  }
  return true;
}

ordered_json sweep_failures(const SweepResult& r) {
  ordered_json arr = ordered_json::array();
  if (r.reference_failure) {
    ordered_json j = to_json(*r.reference_failure);
    j["mu"] = "reference";
    arr.push_back(j);
  }
  for (const auto& run : r.runs) {
    if (run.ok) continue;
    ordered_json j = run.failure ? to_json(*run.failure) : ordered_json::object();
    j["mu"] = run.mu;
    if (!run.error.empty()) j["message"] = run.error;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace

int cmd_run(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  return run_and_report(cfg, out, log, "run");
}

int cmd_limit(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  RunConfig c = cfg;
  c.physics.mu = 0.0;
  return run_and_report(c, out, log, "limit");
}

int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const std::string hash = config_hash(cfg);
  write_resolved_config(cfg, hash, out);
  const SweepResult result = run_sweep(cfg.sweep_plan());

  if (cfg.wants("csv")) write_csv(out, "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, result, hash); });
  if (cfg.wants("json")) {
    ordered_json fits;
    fits["config_hash"] = hash;
    fits["reference"] = to_string(cfg.sweep.reference);
    fits["bl_tol"] = result.bl_tol;
    fits["rate_exponent"] = result.rate_fit.exponent;
    fits["rate_fit"] = to_json(result.rate_fit);
    fits["thickness_exponent"] = result.thickness_fit.exponent;
    fits["thickness_fit"] = to_json(result.thickness_fit);
    fits["notes"] = result.notes;
    fits["failures"] = sweep_failures(result);
    write_file(out, "fits.json", fits.dump(2) + "\n");
  }
  log << "sweep: rate exponent " << result.rate_fit.exponent << " (max log residual "
      << result.rate_fit.max_log_residual << "), thickness exponent " << result.thickness_fit.exponent << "\n";
  return sweep_succeeded(result) ? 0 : 1;
}

int cmd_bl(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const std::string hash = config_hash(cfg);
  write_resolved_config(cfg, hash, out);
  const SweepResult result = run_sweep(cfg.sweep_plan());
  const ThicknessReport report = thickness_scaling_report(result, cfg.sweep.tau_deltas);

  if (cfg.wants("csv")) {
    write_csv(out, "thickness.csv", [&](std::ostream& os) { write_thickness_csv(os, result, hash); });
    write_csv(out, "tau_table.csv", [&](std::ostream& os) { write_tau_table_csv(os, report, hash); });
  }
  if (cfg.wants("json")) {
    ordered_json j;
    j["config_hash"] = hash;
    j["bl_tol"] = result.bl_tol;
    j["alpha_fit"] = to_json(report.alpha_fit);
    ordered_json env = ordered_json::array();
    for (const auto& [delta, e] : report.envelopes) {
      ordered_json row = to_json(e);
      row["delta"] = delta;
      row["decreasing_in_mu"] = report.decreasing_in_mu.at(delta);
      env.push_back(row);
    }
    j["tau_envelopes"] = env;
    j["worst_envelope_residual"] = report.worst_envelope_residual();
    j["notes"] = report.notes;
    j["failures"] = sweep_failures(result);
    write_file(out, "thickness.json", j.dump(2) + "\n");
  }
  log << "bl: thickness exponent " << report.alpha_fit.exponent << ", worst tau-envelope residual "
      << report.worst_envelope_residual() << "\n";
  return sweep_succeeded(result) ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const std::string hash = config_hash(cfg);
  const VerifyReport rep = run_verification(cfg);

  ordered_json j;
  j["config_hash"] = hash;
  j["all_pass"] = rep.all_pass();
  ordered_json checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    ordered_json row;
    row["suite"] = c.suite;
    row["name"] = c.name;
    row["value"] = c.value;
    row["relation"] = c.relation;
    row["threshold"] = c.threshold;
    row["pass"] = c.pass;
    if (!c.detail.empty()) row["detail"] = c.detail;
    checks.push_back(row);
    log << (c.pass ? "PASS " : "FAIL ") << c.suite << "/" << c.name << ": " << c.value << " " << c.relation << " "
        << c.threshold << "\n";
  }
  j["checks"] = checks;
  write_file(out, "verify_report.json", j.dump(2) + "\n");
  return rep.all_pass() ? 0 : 1;
}

}  // namespace planemhd
