#include "planemhd/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "planemhd/eos.hpp"

namespace planemhd {

namespace {

constexpr double pi = std::numbers::pi;

Mode mode(double offset, double amplitude, double k, bool cosine, double beta = 0.0, double omega = 0.0) {
  return Mode{offset, amplitude, k, cosine, beta, omega};
}

}  // namespace

double Mode::value(double x, double t) const {
  const double s = cosine ? std::cos(k * pi * x) : std::sin(k * pi * x);
  return offset + amplitude * s * (1.0 + beta * std::sin(omega * t));
}

double Mode::d_x(double x, double t) const {
  const double s = cosine ? -std::sin(k * pi * x) : std::cos(k * pi * x);
  return amplitude * k * pi * s * (1.0 + beta * std::sin(omega * t));
}

double Mode::d_xx(double x, double t) const {
  const double s = cosine ? std::cos(k * pi * x) : std::sin(k * pi * x);
  return -amplitude * k * k * pi * pi * s * (1.0 + beta * std::sin(omega * t));
}

double Mode::d_t(double x, double t) const {
  const double s = cosine ? std::cos(k * pi * x) : std::sin(k * pi * x);
  return amplitude * s * beta * omega * std::cos(omega * t);
}

ManufacturedSolution ManufacturedSolution::steady() {
  ManufacturedSolution m;
  m.rho = mode(1.0, 0.2, 1.0, true);
  m.u = mode(0.0, 0.0, 1.0, false);
  m.w[0] = mode(0.3, 0.5, 1.0, false);
  m.w[1] = mode(0.0, 0.3, 2.0, true);
  m.b[0] = mode(0.0, 0.3, 1.0, false);
  m.b[1] = mode(0.0, 0.2, 2.0, false);
  m.theta = mode(1.0, 0.2, 1.0, true);
  return m;
}

ManufacturedSolution ManufacturedSolution::unsteady() {
  const double omega = 2.0 * pi;
  ManufacturedSolution m;
  m.rho = mode(1.0, 0.2, 1.0, true, 0.5, omega);
  m.u = mode(0.0, 0.0, 1.0, false);
  m.w[0] = mode(0.3, 0.5, 1.0, false, 0.5, omega);
  m.w[1] = mode(0.0, 0.3, 2.0, true, 0.5, 1.5 * omega);
  m.b[0] = mode(0.0, 0.3, 1.0, false, 0.5, omega);
  m.b[1] = mode(0.0, 0.2, 2.0, false, 0.5, 1.5 * omega);
  m.theta = mode(1.0, 0.2, 1.0, true, 0.5, omega);
  return m;
}

ManufacturedSolution ManufacturedSolution::advecting() {
  ManufacturedSolution m = unsteady();
  m.u = mode(0.0, 0.3, 1.0, false, 0.5, 2.0 * pi);
  return m;
}

void ManufacturedSolution::validate() const {
  auto vanishes_at_walls = [](const Mode& m) { return m.offset == 0.0 && (m.amplitude == 0.0 || !m.cosine); };
  if (!vanishes_at_walls(u)) throw InvalidInput("manufactured u must be a sine mode without offset");
  for (const auto& c : b) {
    if (!vanishes_at_walls(c)) throw InvalidInput("manufactured b must be sine modes without offset");
  }
  if (theta.amplitude != 0.0 && !theta.cosine) throw InvalidInput("manufactured theta must be a cosine mode");
  if (rho.offset - std::abs(rho.amplitude) * (1.0 + std::abs(rho.beta)) <= 0.0) {
    throw InvalidInput("manufactured rho must stay positive");
  }
  if (theta.offset - std::abs(theta.amplitude) * (1.0 + std::abs(theta.beta)) <= 0.0) {
    throw InvalidInput("manufactured theta must stay positive");
  }
}

FlowState ManufacturedSolution::sample(const GridSpec& grid, double t) const {
  FlowState s;
  s.t = t;
  for (double x : grid.cell_centers) {
    s.rho.push_back(rho.value(x, t));
    s.theta.push_back(theta.value(x, t));
  }
  for (double x : grid.node_positions) {
    s.u.push_back(u.value(x, t));
    s.w.push_back(Vec2{w[0].value(x, t), w[1].value(x, t)});
    s.b.push_back(Vec2{b[0].value(x, t), b[1].value(x, t)});
  }
  // sin(k pi) is only zero to rounding
  s.u.front() = s.u.back() = 0.0;
  s.b.front() = s.b.back() = Vec2{0.0, 0.0};
  return s;
}

BoundaryData ManufacturedSolution::boundary() const {
  const Mode w0 = w[0], w1 = w[1];
  return BoundaryData::custom([w0, w1](double t) { return Vec2{w0.value(0.0, t), w1.value(0.0, t)}; },
                              [w0, w1](double t) { return Vec2{w0.value(1.0, t), w1.value(1.0, t)}; });
}

ForcingSpec ManufacturedSolution::forcing(const PhysParams& params) const {
  const ManufacturedSolution m = *this;
  ForcingSpec f;

  f.continuity = [m](double x, double t) {
    return m.rho.d_t(x, t) + m.rho.d_x(x, t) * m.u.value(x, t) + m.rho.value(x, t) * m.u.d_x(x, t);
  };

  f.momentum = [m, params](double x, double t) {
    const double r = m.rho.value(x, t), r_x = m.rho.d_x(x, t), r_t = m.rho.d_t(x, t);
    const double u = m.u.value(x, t), u_x = m.u.d_x(x, t), u_t = m.u.d_t(x, t);
    const double th = m.theta.value(x, t), th_x = m.theta.d_x(x, t);
    double bb_x = 0.0;
    for (const auto& c : m.b) bb_x += c.value(x, t) * c.d_x(x, t);
    return r_t * u + r * u_t + r_x * u * u + 2.0 * r * u * u_x + params.gamma * (r_x * th + r * th_x) + bb_x -
           params.lambda * m.u.d_xx(x, t);
  };

  f.transverse = [m, params](double x, double t) {
    const double r = m.rho.value(x, t), r_x = m.rho.d_x(x, t), r_t = m.rho.d_t(x, t);
    const double u = m.u.value(x, t), u_x = m.u.d_x(x, t);
    Vec2 out{};
    for (int c = 0; c < 2; ++c) {
      const Mode& w = m.w[c];
      const double wv = w.value(x, t);
      out[c] = r_t * wv + r * w.d_t(x, t) + (r_x * u + r * u_x) * wv + r * u * w.d_x(x, t) - m.b[c].d_x(x, t) -
               params.mu * w.d_xx(x, t);
    }
    return out;
  };

  f.induction = [m, params](double x, double t) {
    const double u = m.u.value(x, t), u_x = m.u.d_x(x, t);
    Vec2 out{};
    for (int c = 0; c < 2; ++c) {
      const Mode& b = m.b[c];
      out[c] = b.d_t(x, t) + u_x * b.value(x, t) + u * b.d_x(x, t) - m.w[c].d_x(x, t) - params.nu * b.d_xx(x, t);
    }
    return out;
  };

  f.energy = [m, params](double x, double t) {
    const double r = m.rho.value(x, t), r_x = m.rho.d_x(x, t), r_t = m.rho.d_t(x, t);
    const double u = m.u.value(x, t), u_x = m.u.d_x(x, t);
    const double th = m.theta.value(x, t), th_x = m.theta.d_x(x, t), th_t = m.theta.d_t(x, t);
    const double th_xx = m.theta.d_xx(x, t);
    const KappaModel& km = params.kappa_model;
    const double k = kappa(r, th, km);
    const double k_x = km.kappa1 * km.q * std::pow(th, km.q - 1.0) * th_x + km.kappa2 * r_x;
    const double cv = params.c_v;
    // (rho u theta)_x
    const double flux_x = r_x * u * th + r * u_x * th + r * u * th_x;
    const Vec2 w_x{m.w[0].d_x(x, t), m.w[1].d_x(x, t)};
    const Vec2 b_x{m.b[0].d_x(x, t), m.b[1].d_x(x, t)};
    return cv * (r_t * th + r * th_t) + cv * flux_x - (k_x * th_x + k * th_xx) +
           pressure(r, th, params.gamma) * u_x - dissipation_q(u_x, w_x, b_x, params);
  };
  return f;
}

double state_l2_distance(const FlowState& a, const FlowState& b, const GridSpec& grid) {
  double acc = 0.0;
  for (int i = 0; i < grid.n_cells; ++i) {
    const double dr = a.rho[i] - b.rho[i];
    const double dt = a.theta[i] - b.theta[i];
    acc += (dr * dr + dt * dt) * grid.dx;
  }
  for (int j = 0; j <= grid.n_cells; ++j) {
    const double du = a.u[j] - b.u[j];
    acc += (du * du + norm_sq(a.w[j] - b.w[j]) + norm_sq(a.b[j] - b.b[j])) * node_weight(grid, j);
  }
  return std::sqrt(acc);
}

}  // namespace planemhd
