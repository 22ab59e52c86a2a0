#include "planemhd/io.hpp"

#include <fstream>
#include <sstream>

#include "planemhd/config.hpp"
#include "planemhd/diagnostics.hpp"

namespace planemhd {

namespace {

std::string f(double v) { return format_double(v); }

}  // namespace

void write_snapshots_csv(std::ostream& os, const Trajectory& traj, const std::string& hash) {
  os << "# config_hash=" << hash << "\n";
  os << "t,x,rho,u,w1,w2,b1,b2,theta\n";
  for (const auto& s : traj.snapshots) {
    const int nc = s.n_cells();
    const auto rho = interpolate_to_nodes(s.rho);
    const auto theta = interpolate_to_nodes(s.theta);
    for (int j = 0; j <= nc; ++j) {
      const double x = static_cast<double>(j) / nc;
      os << f(s.t) << ',' << f(x) << ',' << f(rho[j]) << ',' << f(s.u[j]) << ',' << f(s.w[j][0]) << ','
         << f(s.w[j][1]) << ',' << f(s.b[j][0]) << ',' << f(s.b[j][1]) << ',' << f(theta[j]) << '\n';
    }
  }
}

void write_diagnostics_csv(std::ostream& os, const Trajectory& traj, const PhysParams& params,
                           const std::string& hash) {
  const auto residual = energy_balance_residual(traj, params);
  os << "# config_hash=" << hash << "\n";
  os << "t,dt,mass,total_energy,total_entropy,min_rho,max_rho,min_theta,max_theta,dissipation_integral,"
        "w_grad_l2,w_grad_l1,boundary_work_rate,weighted_w_grad_1,weighted_w_grad_2,weighted_w_grad_3,"
        "weighted_w_grad_4,energy_residual\n";
  for (std::size_t k = 0; k < traj.diagnostics.size(); ++k) {
    const auto& d = traj.diagnostics[k];
    auto weighted = [&d](int n) {
      const auto it = d.weighted_w_grad.find(n);
      return it == d.weighted_w_grad.end() ? 0.0 : it->second;
    };
    os << f(d.t) << ',' << f(d.dt) << ',' << f(d.mass) << ',' << f(d.total_energy) << ',' << f(d.total_entropy)
       << ',' << f(d.min_rho) << ',' << f(d.max_rho) << ',' << f(d.min_theta) << ',' << f(d.max_theta) << ','
       << f(d.dissipation_integral) << ',' << f(d.w_grad_l2) << ',' << f(d.w_grad_l1) << ','
       << f(d.boundary_work_rate) << ',' << f(weighted(1)) << ',' << f(weighted(2)) << ',' << f(weighted(3)) << ','
       << f(weighted(4)) << ',' << f(residual[k]) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& result, const std::string& hash) {
  os << "# config_hash=" << hash << "\n";
  os << "mu,ok,combined_error,state_error,gradient_error,bl_thickness,bl_saturated,w_full_sup,"
        "scaled_w_grad,max_w_grad_l2,max_w_grad_l1,max_weighted_1,max_weighted_2,max_weighted_3,max_weighted_4,"
        "min_rho,max_rho,min_theta,max_theta\n";
  for (const auto& r : result.runs) {
    auto weighted = [&r](int n) {
      const auto it = r.max_weighted.find(n);
      return it == r.max_weighted.end() ? 0.0 : it->second;
    };
    os << f(r.mu) << ',' << (r.ok ? 1 : 0) << ',' << f(r.errors.combined) << ',' << f(r.errors.state_error) << ','
       << f(r.errors.gradient_error) << ',' << f(r.thickness.delta) << ',' << (r.thickness.saturated ? 1 : 0) << ','
       << f(r.w_full_sup) << ',' << f(r.scaled_w_grad) << ',' << f(r.max_w_grad_sq) << ',' << f(r.max_w_grad_l1)
       << ',' << f(weighted(1)) << ',' << f(weighted(2)) << ',' << f(weighted(3)) << ',' << f(weighted(4)) << ','
       << f(r.min_rho) << ',' << f(r.max_rho) << ',' << f(r.min_theta) << ',' << f(r.max_theta) << '\n';
  }
}

void write_thickness_csv(std::ostream& os, const SweepResult& result, const std::string& hash) {
  os << "# config_hash=" << hash << "\n";
  os << "mu,ok,bl_thickness,bl_saturated,w_full_sup,tol\n";
  for (const auto& r : result.runs) {
    os << f(r.mu) << ',' << (r.ok ? 1 : 0) << ',' << f(r.thickness.delta) << ',' << (r.thickness.saturated ? 1 : 0)
       << ',' << f(r.w_full_sup) << ',' << f(result.bl_tol) << '\n';
  }
}

void write_tau_table_csv(std::ostream& os, const ThicknessReport& report, const std::string& hash) {
  os << "# config_hash=" << hash << "\n";
  os << "mu,delta,tau,interior_w_grad_sq\n";
  for (const auto& row : report.tau_table) {
    os << f(row.mu) << ',' << f(row.delta) << ',' << f(row.tau) << ',' << f(row.value) << '\n';
  }
}

ordered_json to_json(const FailureReport& r) {
  ordered_json j;
  j["t"] = r.t;
  j["dt"] = r.dt;
  j["field"] = r.field;
  j["index"] = r.index;
  j["x"] = r.x;
  j["message"] = r.message;
  return j;
}

ordered_json to_json(const PowerLawFit& fit) {
  ordered_json j;
  j["valid"] = fit.valid;
  j["exponent"] = fit.exponent;
  j["prefactor"] = fit.prefactor;
  j["max_log_residual"] = fit.max_log_residual;
  j["used"] = fit.used;
  j["note"] = fit.note;
  return j;
}

ordered_json to_json(const TauEnvelope& e) {
  ordered_json j;
  j["valid"] = e.valid;
  j["c1"] = e.c1;
  j["c2"] = e.c2;
  j["max_error"] = e.max_error;
  j["relative_residual"] = e.relative_residual;
  return j;
}

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
  return path;
}

}  // namespace planemhd
