// Hand-rolled generators and dense reference assemblies shared by the tests.
//
// The dense oracles rebuild each implicit sub-step from the scheme definition
// as a full Eigen matrix and solve it with LU.  They share no code with the
// solver beyond the constitutive relations.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "planemhd/core.hpp"
#include "planemhd/eos.hpp"
#include "planemhd/solver.hpp"

namespace planemhd::testing {

struct StateGen {
  std::mt19937_64 rng;
  explicit StateGen(unsigned long seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

  /// Positive rho and theta, u and b vanishing at the walls, w matching bdry at t.
  FlowState state(const GridSpec& g, const BoundaryData& bdry, double t = 0.0, double amp = 1.0) {
    const int nc = g.n_cells;
    FlowState s;
    s.t = t;
    s.rho.resize(nc);
    s.theta.resize(nc);
    s.u.assign(nc + 1, 0.0);
    s.w.assign(nc + 1, Vec2{0.0, 0.0});
    s.b.assign(nc + 1, Vec2{0.0, 0.0});
    for (int i = 0; i < nc; ++i) {
      s.rho[i] = uniform(0.5, 2.0);
      s.theta[i] = uniform(0.5, 2.0);
    }
    for (int j = 1; j < nc; ++j) {
      s.u[j] = amp * uniform(-1.0, 1.0);
      s.w[j] = Vec2{amp * uniform(-1.0, 1.0), amp * uniform(-1.0, 1.0)};
      s.b[j] = Vec2{amp * uniform(-1.0, 1.0), amp * uniform(-1.0, 1.0)};
    }
    s.w.front() = bdry.w_minus(t);
    s.w.back() = bdry.w_plus(t);
    return s;
  }

  PhysParams params() {
    PhysParams p;
    p.lambda = uniform(0.1, 2.0);
    p.mu = uniform(1e-3, 1.0);
    p.nu = uniform(0.1, 2.0);
    p.gamma = uniform(1.1, 1.7);
    p.c_v = uniform(0.5, 2.0);
    p.kappa_model.kappa1 = uniform(0.1, 2.0);
    p.kappa_model.kappa2 = uniform(0.0, 1.0);
    p.kappa_model.q = uniform(0.5, 3.0);
    return p;
  }
};

namespace oracle {

inline double node_mass(const std::vector<double>& rho, int j) {
  const int nc = static_cast<int>(rho.size());
  if (j == 0) return rho[0];
  if (j == nc) return rho[nc - 1];
  return 0.5 * (rho[j - 1] + rho[j]);
}

struct Fluxes {
  std::vector<double> face;  // nodes
  std::vector<double> cell;  // cell centers
};

inline Fluxes fluxes(const FlowState& s) {
  const int nc = s.n_cells();
  Fluxes f{std::vector<double>(nc + 1, 0.0), std::vector<double>(nc, 0.0)};
  for (int j = 1; j < nc; ++j) f.face[j] = s.u[j] * (s.u[j] > 0.0 ? s.rho[j - 1] : s.rho[j]);
  for (int i = 0; i < nc; ++i) f.cell[i] = 0.5 * (f.face[i] + f.face[i + 1]);
  return f;
}

// Dirichlet second-difference matrix on the n interior nodes, scaled by coef.
inline Eigen::MatrixXd laplacian(int n, double coef) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    a(k, k) = 2.0 * coef;
    if (k > 0) a(k, k - 1) = -coef;
    if (k + 1 < n) a(k, k + 1) = -coef;
  }
  return a;
}

// Upwinded node quantity advected through the node control volumes.
template <class Get>
double node_adv(const Fluxes& f, int j, double dx, Get q) {
  const auto up = [&](int i) { return f.cell[i] >= 0.0 ? q(i) : q(i + 1); };
  return (f.cell[j] * up(j) - f.cell[j - 1] * up(j - 1)) / dx;
}

/// Interior velocities u_1..u_{N-1}.
inline Eigen::VectorXd velocity(const FlowState& start, const FlowState& latest, const GridSpec& g,
                                const PhysParams& p, double dt) {
  const int nc = g.n_cells, n = nc - 1;
  const double dx = g.dx;
  const Fluxes f = fluxes(start);
  Eigen::MatrixXd a = laplacian(n, dt * p.lambda / (dx * dx));
  Eigen::VectorXd r(n);
  const auto ptot = [&](int i) {
    return p.gamma * latest.rho[i] * latest.theta[i] + 0.25 * (norm_sq(latest.b[i]) + norm_sq(latest.b[i + 1]));
  };
  for (int j = 1; j < nc; ++j) {
    a(j - 1, j - 1) += node_mass(latest.rho, j);
    r(j - 1) = node_mass(start.rho, j) * start.u[j] -
               dt * node_adv(f, j, dx, [&](int i) { return start.u[i]; }) - dt * (ptot(j) - ptot(j - 1)) / dx;
  }
  return a.partialPivLu().solve(r);
}

/// Interior transverse velocities, component c, for mu > 0.
inline Eigen::VectorXd transverse(const FlowState& start, const FlowState& latest, const GridSpec& g,
                                  const PhysParams& p, const BoundaryData& bdry, double dt, int c) {
  const int nc = g.n_cells, n = nc - 1;
  const double dx = g.dx;
  const double t1 = start.t + dt;
  const double coef = dt * p.mu / (dx * dx);
  const Fluxes f = fluxes(start);
  Eigen::MatrixXd a = laplacian(n, coef);
  Eigen::VectorXd r(n);
  for (int j = 1; j < nc; ++j) {
    a(j - 1, j - 1) += node_mass(latest.rho, j);
    r(j - 1) = node_mass(start.rho, j) * start.w[j][c] -
               dt * node_adv(f, j, dx, [&](int i) { return start.w[i][c]; }) +
               dt * (latest.b[j + 1][c] - latest.b[j - 1][c]) / (2.0 * dx);
  }
  r(0) += coef * bdry.w_minus(t1)[c];
  r(n - 1) += coef * bdry.w_plus(t1)[c];
  return a.partialPivLu().solve(r);
}

/// Interior magnetic field, component c.
inline Eigen::VectorXd induction(const FlowState& start, const FlowState& latest, const GridSpec& g,
                                 const PhysParams& p, double dt, int c) {
  const int nc = g.n_cells, n = nc - 1;
  const double dx = g.dx;
  Eigen::MatrixXd a = laplacian(n, dt * p.nu / (dx * dx)) + Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd r(n);
  for (int j = 1; j < nc; ++j) {
    const double ub = latest.u[j + 1] * start.b[j + 1][c] - latest.u[j - 1] * start.b[j - 1][c];
    const double wd = latest.w[j + 1][c] - latest.w[j - 1][c];
    r(j - 1) = start.b[j][c] - dt * ub / (2.0 * dx) + dt * wd / (2.0 * dx);
  }
  return a.partialPivLu().solve(r);
}

/// Cell temperatures with Neumann walls, kappa frozen at (rho^{n+1}, theta^n).
inline Eigen::VectorXd temperature(const FlowState& start, const FlowState& latest, const GridSpec& g,
                                   const PhysParams& p, double dt) {
  const int nc = g.n_cells;
  const double dx = g.dx;
  const Fluxes f = fluxes(start);
  const auto& th = start.theta;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nc, nc);
  Eigen::VectorXd r(nc);
  for (int j = 1; j < nc; ++j) {
    const double kf = 0.5 * (kappa(latest.rho[j - 1], th[j - 1], p.kappa_model) +
                             kappa(latest.rho[j], th[j], p.kappa_model));
    const double c = dt * kf / (dx * dx);
    a(j - 1, j - 1) += c;
    a(j, j) += c;
    a(j - 1, j) -= c;
    a(j, j - 1) -= c;
  }
  for (int i = 0; i < nc; ++i) {
    a(i, i) += p.c_v * latest.rho[i];
    const auto adv = [&](int j) {
      if (j == 0 || j == nc) return 0.0;
      return f.face[j] * (f.face[j] >= 0.0 ? th[j - 1] : th[j]);
    };
    const double ux = (latest.u[i + 1] - latest.u[i]) / dx;
    Vec2 wx, bx;
    for (int c = 0; c < 2; ++c) {
      wx[c] = (latest.w[i + 1][c] - latest.w[i][c]) / dx;
      bx[c] = (latest.b[i + 1][c] - latest.b[i][c]) / dx;
    }
    const double q = p.lambda * ux * ux + p.mu * norm_sq(wx) + p.nu * norm_sq(bx);
    r(i) = p.c_v * start.rho[i] * th[i] - dt * p.c_v * (adv(i + 1) - adv(i)) / dx -
           dt * p.gamma * latest.rho[i] * th[i] * ux + dt * q;
  }
  return a.partialPivLu().solve(r);
}

/// Largest deviation of each implicit sub-step from its dense oracle for one
/// state, following the sub-step order of a full step.
struct SubstepErrors {
  double velocity = 0.0;
  double transverse = 0.0;
  double induction = 0.0;
  double temperature = 0.0;
  double max() const { return std::max({velocity, transverse, induction, temperature}); }
};

inline SubstepErrors compare_step(const FlowState& s, const GridSpec& g, const PhysParams& p,
                                  const BoundaryData& bdry, double dt) {
  SubstepErrors e;
  const MassFlux F = mass_flux(s);
  FlowState next = s;
  next.t = s.t + dt;
  next.rho = advance_density(s, g, dt);
  const SubstepInput in{s, next, F, g, p, dt};
  const int nc = g.n_cells;

  next.u = advance_velocity(in);
  const Eigen::VectorXd u_ref = velocity(s, next, g, p, dt);
  for (int j = 1; j < nc; ++j) e.velocity = std::max(e.velocity, std::abs(next.u[j] - u_ref(j - 1)));

  next.w = advance_transverse(in, bdry);
  for (int c = 0; c < 2; ++c) {
    const Eigen::VectorXd ref = transverse(s, next, g, p, bdry, dt, c);
    for (int j = 1; j < nc; ++j) e.transverse = std::max(e.transverse, std::abs(next.w[j][c] - ref(j - 1)));
  }

  next.b = advance_induction(in);
  for (int c = 0; c < 2; ++c) {
    const Eigen::VectorXd ref = induction(s, next, g, p, dt, c);
    for (int j = 1; j < nc; ++j) e.induction = std::max(e.induction, std::abs(next.b[j][c] - ref(j - 1)));
  }

  next.theta = advance_temperature(in);
  const Eigen::VectorXd th_ref = temperature(s, next, g, p, dt);
  for (int i = 0; i < nc; ++i) e.temperature = std::max(e.temperature, std::abs(next.theta[i] - th_ref(i)));
  return e;
}

}  // namespace oracle

}  // namespace planemhd::testing
