#include "planemhd/eos.hpp"

#include <cmath>

namespace planemhd {

double pressure(double rho, double theta, double gamma) {
  if (!(rho > 0.0)) throw InvalidInput("pressure: rho must be > 0");
  if (!(theta >= 0.0)) throw InvalidInput("pressure: theta must be >= 0");
  return gamma * rho * theta;
}

double internal_energy(double theta, double c_v) {
  if (!(theta >= 0.0)) throw InvalidInput("internal_energy: theta must be >= 0");
  return c_v * theta;
}

double kappa(double rho, double theta, const KappaModel& model) {
  if (!(rho > 0.0) || !(theta > 0.0)) throw InvalidInput("kappa: rho and theta must be > 0");
  return model.kappa1 * (1.0 + std::pow(theta, model.q)) + model.kappa2 * rho;
}

double total_energy_density(const ConstitutiveSample& s, double c_v) {
  return s.rho * (c_v * s.theta + 0.5 * s.u * s.u + 0.5 * norm_sq(s.w)) + 0.5 * norm_sq(s.b);
}

double entropy_density(double rho, double theta, double gamma) {
  if (!(rho > 0.0) || !(theta > 0.0)) throw InvalidInput("entropy_density: rho and theta must be > 0");
  return std::log(theta) - gamma * std::log(rho);
}

double dissipation_q(double u_x, const Vec2& w_x, const Vec2& b_x, const PhysParams& params) {
  return params.lambda * u_x * u_x + params.mu * norm_sq(w_x) + params.nu * norm_sq(b_x);
}

}  // namespace planemhd
