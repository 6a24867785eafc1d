#ifndef EPSH_PARAMS_HPP
#define EPSH_PARAMS_HPP

#include <cmath>

#include "epsh/errors.hpp"

namespace epsh {

// Physical constants and far-field / wall data of the ion fluid model.
struct PlasmaParams {
  double m = 1.0;           // ion mass, > 0
  double R = 1.0;           // gas constant, > 0
  double gamma = 5.0 / 3.0; // heat capacity ratio, > 1
  double u_plus = -2.0;     // far-field normal velocity, < 0
  double theta_plus = 1.0;  // far-field temperature, > 0
  double phi_b = 0.0;       // wall potential

  static PlasmaParams make(double m, double R, double gamma, double u_plus,
                           double theta_plus, double phi_b) {
    if (!(m > 0.0)) throw ConfigError("m must be positive");
    if (!(R > 0.0)) throw ConfigError("R must be positive");
    if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
    if (!(theta_plus > 0.0)) throw ConfigError("theta_plus must be positive");
    if (!(u_plus < 0.0)) throw ConfigError("u_plus must be negative");
    return PlasmaParams{m, R, gamma, u_plus, theta_plus, phi_b};
  }

  // Ion acoustic speed at temperature theta.
  double sound_speed(double theta) const {
    return std::sqrt(gamma * R * theta / m);
  }
};

// m u+^2 - gamma R theta+ - 1; positive iff the sheath admissibility
// criterion for the end state holds.
inline double bohm_margin(const PlasmaParams& p) {
  return p.m * p.u_plus * p.u_plus - p.gamma * p.R * p.theta_plus - 1.0;
}

}  // namespace epsh

#endif
