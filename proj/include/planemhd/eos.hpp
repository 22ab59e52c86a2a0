// Pointwise constitutive relations for a perfect gas with p = gamma rho theta
// and e = c_v theta.
#pragma once

#include "planemhd/core.hpp"

namespace planemhd {

struct ConstitutiveSample {
  double rho = 1.0;
  double theta = 1.0;
  double u = 0.0;
  Vec2 w{0.0, 0.0};
  Vec2 b{0.0, 0.0};
};

double pressure(double rho, double theta, double gamma);
double internal_energy(double theta, double c_v);

/// kappa1 (1 + theta^q) + kappa2 rho.  Never below kappa1 (1 + theta^q).
double kappa(double rho, double theta, const KappaModel& model);

/// rho (c_v theta + |u|^2/2 + |w|^2/2) + |b|^2/2
double total_energy_density(const ConstitutiveSample& s, double c_v);

/// ln theta - gamma ln rho
double entropy_density(double rho, double theta, double gamma);

/// lambda u_x^2 + mu |w_x|^2 + nu |b_x|^2
double dissipation_q(double u_x, const Vec2& w_x, const Vec2& b_x, const PhysParams& params);

}  // namespace planemhd
