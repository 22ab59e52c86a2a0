#include "planemhd/core.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace planemhd {

namespace {

std::string at_index(const char* field, std::size_t i) {
  std::ostringstream os;
  os << field << "[" << i << "]";
  return os.str();
}

}  // namespace

GridSpec GridSpec::uniform(int n_cells) {
  if (n_cells < 8) {
    throw InvalidInput("grid.n_cells must be >= 8, got " + std::to_string(n_cells));
  }
  GridSpec g;
  g.n_cells = n_cells;
  g.dx = 1.0 / n_cells;
  g.cell_centers.resize(n_cells);
  g.node_positions.resize(n_cells + 1);
  for (int i = 0; i < n_cells; ++i) g.cell_centers[i] = (i + 0.5) * g.dx;
  for (int j = 0; j <= n_cells; ++j) g.node_positions[j] = static_cast<double>(j) / n_cells;
  return g;
}

void KappaModel::validate() const {
  if (!(kappa1 > 0.0)) throw InvalidInput("physics.kappa1 must be > 0");
  if (!(kappa2 >= 0.0)) throw InvalidInput("physics.kappa2 must be >= 0");
  if (!(q > 0.0)) throw InvalidInput("physics.q must be > 0");
}

void PhysParams::validate() const {
  if (!(lambda > 0.0)) throw InvalidInput("physics.lambda must be > 0");
  if (!(mu >= 0.0)) throw InvalidInput("physics.mu must be >= 0");
  if (!(nu > 0.0)) throw InvalidInput("physics.nu must be > 0");
  if (!(gamma > 0.0)) throw InvalidInput("physics.gamma must be > 0");
  if (!(c_v > 0.0)) throw InvalidInput("physics.c_v must be > 0");
  kappa_model.validate();
}

std::string to_string(BoundaryPreset p) {
  switch (p) {
    case BoundaryPreset::zero: return "zero";
    case BoundaryPreset::constant: return "constant";
    case BoundaryPreset::cosine_ramp: return "cosine-ramp";
    case BoundaryPreset::custom: return "custom";
  }
  return "custom";
}

BoundaryPreset boundary_preset_from_string(const std::string& s) {
  if (s == "zero") return BoundaryPreset::zero;
  if (s == "constant") return BoundaryPreset::constant;
  if (s == "cosine-ramp") return BoundaryPreset::cosine_ramp;
  throw InvalidInput("unknown boundary preset '" + s + "' (expected zero|constant|cosine-ramp)");
}

BoundaryData BoundaryData::zero() {
  BoundaryData d;
  d.w_minus = [](double) { return Vec2{0.0, 0.0}; };
  d.w_plus = d.w_minus;
  d.preset = BoundaryPreset::zero;
  return d;
}

BoundaryData BoundaryData::constant(double amplitude) {
  BoundaryData d;
  d.w_minus = [amplitude](double) { return Vec2{amplitude, 0.0}; };
  d.w_plus = d.w_minus;
  d.preset = BoundaryPreset::constant;
  d.amplitude = amplitude;
  return d;
}

BoundaryData BoundaryData::cosine_ramp(double amplitude, double ramp_period) {
  if (!(ramp_period > 0.0)) throw InvalidInput("boundary.ramp_period must be > 0");
  BoundaryData d;
  d.w_minus = [amplitude, ramp_period](double t) {
    const double r = t >= ramp_period ? 1.0 : 0.5 * (1.0 - std::cos(std::numbers::pi * t / ramp_period));
    return Vec2{amplitude * r, 0.0};
  };
  d.w_plus = d.w_minus;
  d.preset = BoundaryPreset::cosine_ramp;
  d.amplitude = amplitude;
  d.ramp_period = ramp_period;
  return d;
}

BoundaryData BoundaryData::custom(std::function<Vec2(double)> w_minus, std::function<Vec2(double)> w_plus) {
  BoundaryData d;
  d.w_minus = std::move(w_minus);
  d.w_plus = std::move(w_plus);
  d.preset = BoundaryPreset::custom;
  return d;
}

double BoundaryData::max_amplitude(double t_end, int samples) const {
  double m = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = samples > 1 ? t_end * k / (samples - 1) : 0.0;
    m = std::max({m, norm(w_minus(t)), norm(w_plus(t))});
  }
  return m;
}

void validate_state(const FlowState& s, const GridSpec& grid, const BoundaryData* bdry, double wall_tol) {
  const std::size_t nc = grid.n_cells;
  const std::size_t nn = nc + 1;
  if (s.rho.size() != nc || s.theta.size() != nc || s.u.size() != nn || s.w.size() != nn ||
      s.b.size() != nn) {
    throw InvalidInput("field sizes do not match grid with n_cells = " + std::to_string(nc));
  }
  for (std::size_t i = 0; i < nc; ++i) {
    if (!(s.rho[i] > 0.0) || !std::isfinite(s.rho[i])) {
      throw InvalidInput("nonpositive density at " + at_index("rho", i));
    }
    if (!(s.theta[i] > 0.0) || !std::isfinite(s.theta[i])) {
      throw InvalidInput("nonpositive temperature at " + at_index("theta", i));
    }
  }
  for (std::size_t j : {std::size_t{0}, nn - 1}) {
    if (std::abs(s.u[j]) > wall_tol) throw InvalidInput("u must vanish at wall node " + at_index("u", j));
    if (norm(s.b[j]) > wall_tol) throw InvalidInput("b must vanish at wall node " + at_index("b", j));
  }
  if (bdry != nullptr) {
    if (norm(s.w.front() - bdry->w_minus(s.t)) > wall_tol) {
      throw InvalidInput("w[0] does not match w^-(t)");
    }
    if (norm(s.w.back() - bdry->w_plus(s.t)) > wall_tol) {
      throw InvalidInput("w[" + std::to_string(nn - 1) + "] does not match w^+(t)");
    }
  }
}

double Trajectory::max_step() const {
  double m = 0.0;
  for (const auto& d : diagnostics) m = std::max(m, d.dt);
  return m;
}

std::string to_string(InitialPreset p) {
  switch (p) {
    case InitialPreset::uniform: return "uniform";
    case InitialPreset::bump: return "bump";
    case InitialPreset::wb_zero: return "wb-zero";
  }
  return "uniform";
}

InitialPreset initial_preset_from_string(const std::string& s) {
  if (s == "uniform") return InitialPreset::uniform;
  if (s == "bump") return InitialPreset::bump;
  if (s == "wb-zero") return InitialPreset::wb_zero;
  throw InvalidInput("unknown initial preset '" + s + "' (expected uniform|bump|wb-zero)");
}

FlowState make_initial_state(const GridSpec& grid, InitialPreset preset, const BoundaryData& bdry) {
  const int nc = grid.n_cells;
  FlowState s;
  s.t = 0.0;
  s.rho.assign(nc, 1.0);
  s.theta.assign(nc, 1.0);
  s.u.assign(nc + 1, 0.0);
  s.w.assign(nc + 1, Vec2{0.0, 0.0});
  s.b.assign(nc + 1, Vec2{0.0, 0.0});

  const double pi = std::numbers::pi;
  const Vec2 wm = bdry.w_minus(0.0);
  const Vec2 wp = bdry.w_plus(0.0);

  switch (preset) {
    case InitialPreset::uniform:
      s.w.front() = wm;
      s.w.back() = wp;
      break;
    case InitialPreset::bump:
    case InitialPreset::wb_zero:
      for (int i = 0; i < nc; ++i) {
        const double x = grid.cell_centers[i];
        s.rho[i] = 1.0 + 0.2 * std::cos(pi * x);
        s.theta[i] = 1.0 + 0.2 * std::cos(2.0 * pi * x);
      }
      if (preset == InitialPreset::bump) {
        for (int j = 0; j <= nc; ++j) {
          const double x = grid.node_positions[j];
          s.w[j] = (1.0 - x) * wm + x * wp;
        }
      } else if (norm(wm) != 0.0 || norm(wp) != 0.0) {
        throw InvalidInput("wb-zero preset requires w^-(0) = w^+(0) = 0");
      }
      break;
  }
  validate_state(s, grid, &bdry);
  return s;
}

FlowState make_initial_state(const GridSpec& grid, const TabulatedProfile& table, const BoundaryData& bdry) {
  const std::size_t nn = grid.n_cells + 1;
  if (table.rho.size() != nn || table.u.size() != nn || table.w.size() != nn || table.b.size() != nn ||
      table.theta.size() != nn) {
    throw InvalidInput("tabulated profile must have n_cells + 1 = " + std::to_string(nn) + " rows");
  }
  for (std::size_t j = 0; j < nn; ++j) {
    if (!(table.rho[j] > 0.0)) throw InvalidInput("nonpositive density in table at " + at_index("rho", j));
    if (!(table.theta[j] > 0.0)) {
      throw InvalidInput("nonpositive temperature in table at " + at_index("theta", j));
    }
  }
  FlowState s;
  s.t = 0.0;
  s.rho.resize(nn - 1);
  s.theta.resize(nn - 1);
  for (std::size_t i = 0; i + 1 < nn; ++i) {
    s.rho[i] = 0.5 * (table.rho[i] + table.rho[i + 1]);
    s.theta[i] = 0.5 * (table.theta[i] + table.theta[i + 1]);
  }
  s.u = table.u;
  s.w = table.w;
  s.b = table.b;
  validate_state(s, grid, &bdry);
  return s;
}

std::vector<double> interpolate_to_nodes(std::span<const double> cell_values) {
  const std::size_t nc = cell_values.size();
  std::vector<double> out(nc + 1, 0.0);
  if (nc == 0) return out;
  out.front() = cell_values.front();
  out.back() = cell_values.back();
  for (std::size_t j = 1; j < nc; ++j) out[j] = 0.5 * (cell_values[j - 1] + cell_values[j]);
  return out;
}

}  // namespace planemhd
