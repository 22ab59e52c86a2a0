#include "planemhd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

namespace planemhd {

std::string to_string(ReferenceKind k) { return k == ReferenceKind::limit ? "limit" : "finest"; }

ReferenceKind reference_kind_from_string(const std::string& s) {
  if (s == "limit") return ReferenceKind::limit;
  if (s == "finest") return ReferenceKind::finest;
  throw InvalidInput("unknown reference kind '" + s + "' (expected limit or finest)");
}

void SweepPlan::validate() const {
  if (mu_values.empty()) throw InvalidInput("sweep.mu_values must not be empty");
  for (std::size_t k = 0; k < mu_values.size(); ++k) {
    if (!(mu_values[k] > 0.0)) throw InvalidInput("sweep.mu_values must all be > 0");
    if (k > 0 && !(mu_values[k] < mu_values[k - 1])) {
      throw InvalidInput("sweep.mu_values must be strictly decreasing");
    }
  }
  for (double d : tau_deltas) {
    if (!(d > 0.0 && d < 0.5)) throw InvalidInput("sweep.tau_deltas must lie in (0, 1/2)");
  }
  scenario.params.validate();
  scenario.time.validate();
}

double SweepPlan::resolved_bl_tol() const {
  if (bl_tol > 0.0) return bl_tol;
  const double amp = scenario.bdry.max_amplitude(scenario.time.t_end);
  return amp > 0.0 ? 0.05 * amp : 0.05;
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidInput("fit_power_law: x and y differ in length");
  if (x.size() < 3) throw InvalidInput("fit_power_law: at least 3 points are required");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) {
      throw InvalidInput("fit_power_law: coordinates must be > 0 (point " + std::to_string(k) + ")");
    }
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (sxx == 0.0) throw InvalidInput("fit_power_law: x values must not all coincide");

  PowerLawFit fit;
  fit.valid = true;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.prefactor = std::exp(intercept);
  for (std::size_t k = 0; k < n; ++k) {
    fit.max_log_residual = std::max(fit.max_log_residual, std::abs(ly[k] - (intercept + fit.exponent * lx[k])));
    fit.used.push_back(k);
  }
  return fit;
}

PowerLawFit fit_power_law_excluding_preasymptotic(const std::vector<double>& x, const std::vector<double>& y) {
  PowerLawFit fit = fit_power_law(x, y);
  if (x.size() < 4) return fit;

  const double intercept = std::log(fit.prefactor);
  std::vector<double> res(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    res[k] = std::abs(std::log(y[k]) - (intercept + fit.exponent * std::log(x[k])));
  }
  std::vector<double> sorted = res;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

  const auto largest = static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin());
  if (res[largest] <= 3.0 * median) return fit;

  std::vector<double> xs, ys;
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k == largest) continue;
    xs.push_back(x[k]);
    ys.push_back(y[k]);
    idx.push_back(k);
  }
  PowerLawFit refit = fit_power_law(xs, ys);
  refit.used = idx;
  std::ostringstream os;
  os << "largest x = " << x[largest] << " excluded: log-residual " << res[largest] << " exceeds 3x median "
     << median;
  refit.note = os.str();
  return refit;
}

ThicknessEstimate bl_thickness(const Trajectory& traj, const Trajectory& reference, double tol, const GridSpec& grid) {
  if (!(tol > 0.0)) throw InvalidInput("bl_thickness: tol must be > 0");
  // Validates matching and yields nothing else of use here for delta = 0.
  (void)sup_deviation(traj, reference, grid, 0.0);

  // Pointwise sup over time of the largest field deviation.
  const int nc = grid.n_cells;
  std::vector<double> cell_dev(nc, 0.0), node_dev(nc + 1, 0.0);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const FlowState& a = traj.snapshots[k];
    const FlowState& r = reference.snapshots[k];
    for (int i = 0; i < nc; ++i) {
      cell_dev[i] = std::max({cell_dev[i], std::abs(a.rho[i] - r.rho[i]), std::abs(a.theta[i] - r.theta[i])});
    }
    for (int j = 0; j <= nc; ++j) {
      node_dev[j] = std::max({node_dev[j], std::abs(a.u[j] - r.u[j]), norm(a.w[j] - r.w[j]), norm(a.b[j] - r.b[j])});
    }
  }

  for (int k = 1; k * grid.dx <= 0.25 + 1e-12; ++k) {
    const double delta = k * grid.dx;
    double sup = 0.0;
    for (int i = 0; i < nc; ++i) {
      const double x = grid.cell_centers[i];
      if (x > delta && x < 1.0 - delta) sup = std::max(sup, cell_dev[i]);
    }
    for (int j = 0; j <= nc; ++j) {
      const double x = grid.node_positions[j];
      if (x > delta && x < 1.0 - delta) sup = std::max(sup, node_dev[j]);
    }
    if (sup <= tol) return {delta, false};
  }
  return {0.25, true};
}

namespace {

Trajectory run_at(const Scenario& sc, double mu) {
  PhysParams p = sc.params;
  p.mu = mu;
  return mu == 0.0 ? run_limit(sc.initial, sc.grid, p, sc.bdry, sc.time) : run(sc.initial, sc.grid, p, sc.bdry, sc.time);
}

struct Outcome {
  std::optional<Trajectory> traj;
  std::optional<FailureReport> failure;
  std::string error;
};

Outcome guarded_run(const Scenario& sc, double mu) {
  Outcome o;
  try {
    o.traj = run_at(sc, mu);
  } catch (const RunAborted& e) {
    o.failure = e.report;
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  return o;
}

// Runs jobs with at most `workers` in flight, keeping results in input order.
std::vector<Outcome> run_all(const Scenario& sc, const std::vector<double>& mus, int workers) {
  std::vector<Outcome> out(mus.size());
  const std::size_t batch = workers > 0 ? static_cast<std::size_t>(workers) : mus.size();
  for (std::size_t start = 0; start < mus.size(); start += batch) {
    std::vector<std::future<Outcome>> futs;
    const std::size_t stop = std::min(mus.size(), start + batch);
    for (std::size_t k = start; k < stop; ++k) {
      futs.push_back(std::async(std::launch::async, guarded_run, std::cref(sc), mus[k]));
    }
    for (std::size_t k = start; k < stop; ++k) out[k] = futs[k - start].get();
  }
  return out;
}

void summarize(MuRun& r, const Trajectory& traj, const Trajectory& ref, const SweepPlan& plan, double tol) {
  const GridSpec& grid = plan.scenario.grid;
  r.errors = error_norms(traj, ref, grid);
  r.thickness = bl_thickness(traj, ref, tol, grid);
  r.w_full_sup = sup_deviation(traj, ref, grid, 0.0).w;

  r.min_theta = r.min_rho = std::numeric_limits<double>::infinity();
  r.max_theta = r.max_rho = -std::numeric_limits<double>::infinity();
  for (const auto& d : traj.diagnostics) {
    r.max_w_grad_sq = std::max(r.max_w_grad_sq, d.w_grad_l2);
    r.max_w_grad_l1 = std::max(r.max_w_grad_l1, d.w_grad_l1);
    for (const auto& [n, v] : d.weighted_w_grad) r.max_weighted[n] = std::max(r.max_weighted[n], v);
    r.max_theta = std::max(r.max_theta, d.max_theta);
    r.min_theta = std::min(r.min_theta, d.min_theta);
    r.max_rho = std::max(r.max_rho, d.max_rho);
    r.min_rho = std::min(r.min_rho, d.min_rho);
  }
  r.scaled_w_grad = std::sqrt(r.mu) * r.max_w_grad_sq;
  for (double delta : plan.tau_deltas) {
    double v = 0.0;
    for (const auto& s : traj.snapshots) v = std::max(v, interior_w_grad_sq(s, grid, delta));
    r.interior_grad[delta] = v;
  }
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan) {
  plan.validate();
  SweepResult result;
  result.bl_tol = plan.resolved_bl_tol();

  std::vector<double> mus = plan.mu_values;
  if (plan.reference == ReferenceKind::limit) mus.push_back(0.0);
  std::vector<Outcome> outcomes = run_all(plan.scenario, mus, plan.max_workers);

  const Outcome& ref_out = plan.reference == ReferenceKind::limit ? outcomes.back() : outcomes[plan.mu_values.size() - 1];
  if (!ref_out.traj) {
    result.reference_failure = ref_out.failure;
    if (!ref_out.failure) result.reference_failure = FailureReport{0.0, 0.0, "reference", -1, 0.0, ref_out.error};
    result.notes.push_back("reference run failed; no errors computed");
  }

  for (std::size_t k = 0; k < plan.mu_values.size(); ++k) {
    MuRun r;
    r.mu = plan.mu_values[k];
    Outcome& o = outcomes[k];
    if (!o.traj) {
      r.failure = o.failure;
      r.error = o.error;
    } else if (ref_out.traj) {
      try {
        summarize(r, *o.traj, *ref_out.traj, plan, result.bl_tol);
        r.ok = true;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
    result.runs.push_back(std::move(r));
  }

  std::vector<double> mu_ok, err_ok, mu_bl, delta_bl;
  for (const auto& r : result.runs) {
    if (!r.ok) continue;
    if (r.errors.combined > 0.0) {
      mu_ok.push_back(r.mu);
      err_ok.push_back(r.errors.combined);
    }
    if (!r.thickness.saturated) {
      mu_bl.push_back(r.mu);
      delta_bl.push_back(r.thickness.delta);
    } else {
      std::ostringstream os;
      os << "mu = " << r.mu << ": boundary-layer thickness saturated at 1/4, excluded from the thickness fit";
      result.notes.push_back(os.str());
    }
  }
  if (mu_ok.size() >= 3) {
    result.rate_fit = fit_power_law_excluding_preasymptotic(mu_ok, err_ok);
  } else {
    result.rate_fit.note = "fewer than 3 successful runs with nonzero error";
  }
  if (mu_bl.size() >= 3) {
    result.thickness_fit = fit_power_law(mu_bl, delta_bl);
  } else {
    result.thickness_fit.note = "fewer than 3 unsaturated thickness estimates";
  }
  return result;
}

TauEnvelope fit_tau_envelope(const std::vector<TauRow>& rows) {
  std::vector<const TauRow*> pts;
  for (const auto& r : rows) {
    if (r.tau <= 1.0) pts.push_back(&r);
  }
  TauEnvelope env;
  if (pts.size() < 2) return env;

  // The minimax error is convex and piecewise linear in the slope with kinks at
  // pairwise slopes, so the optimum is one of them.
  std::vector<double> slopes{0.0};
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (pts[a]->tau != pts[b]->tau) slopes.push_back((pts[b]->value - pts[a]->value) / (pts[b]->tau - pts[a]->tau));
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (double c1 : slopes) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto* p : pts) {
      const double r = p->value - c1 * p->tau;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double err = 0.5 * (hi - lo);
    if (err < best) {
      best = err;
      env.c1 = c1;
      env.c2 = 0.5 * (hi + lo);
    }
  }
  double vmax = 0.0;
  for (const auto* p : pts) vmax = std::max(vmax, std::abs(p->value));
  env.max_error = best;
  env.relative_residual = vmax > 0.0 ? best / vmax : 0.0;
  env.valid = std::isfinite(env.c1) && std::isfinite(env.c2);
  return env;
}

ThicknessReport thickness_scaling_report(const SweepResult& result, const std::vector<double>& tau_deltas) {
  ThicknessReport rep;
  std::vector<double> mu_bl, delta_bl;
  for (const auto& r : result.runs) {
    if (!r.ok) continue;
    if (r.thickness.saturated) {
      std::ostringstream os;
      os << "mu = " << r.mu << " excluded: thickness saturated";
      rep.notes.push_back(os.str());
      continue;
    }
    mu_bl.push_back(r.mu);
    delta_bl.push_back(r.thickness.delta);
  }
  if (mu_bl.size() >= 3) {
    rep.alpha_fit = fit_power_law(mu_bl, delta_bl);
  } else {
    rep.alpha_fit.note = "fewer than 3 unsaturated thickness estimates";
  }

  for (double delta : tau_deltas) {
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    std::vector<TauRow> rows;
    for (const auto& r : result.runs) {
      if (!r.ok) continue;
      const auto it = r.interior_grad.find(delta);
      if (it == r.interior_grad.end()) continue;
      TauRow row{r.mu, delta, std::sqrt(r.mu) / delta, it->second};
      rows.push_back(row);
      rep.tau_table.push_back(row);
      if (row.tau <= 1.0) {
        if (!(row.value < prev)) decreasing = false;
        prev = row.value;
      }
    }
    rep.decreasing_in_mu[delta] = decreasing;
    rep.envelopes[delta] = fit_tau_envelope(rows);
    if (!rep.envelopes[delta].valid) {
      std::ostringstream os;
      os << "delta = " << delta << ": fewer than 2 rows with tau <= 1, no envelope";
      rep.notes.push_back(os.str());
    }
  }
  return rep;
}

double ThicknessReport::worst_envelope_residual() const {
  double worst = 0.0;
  for (const auto& [delta, env] : envelopes) {
    if (env.valid) worst = std::max(worst, env.relative_residual);
  }
  return worst;
}

}  // namespace planemhd
