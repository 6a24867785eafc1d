#ifndef EPSH_SHEATH1D_HPP
#define EPSH_SHEATH1D_HPP

#include <vector>

#include "epsh/params.hpp"

namespace epsh {

// Tabulated monotone half-line sheath profile.
struct StationaryProfile1D {
  double L1 = 0.0;
  int n1 = 0;
  double h = 0.0;
  std::vector<double> x, rho, u, theta, phi, dphi;
  double alpha_fit = 0.0;  // fitted decay exponent of |phi|
};

// Density branch of the Bernoulli first integral
//   H(rho) = (m u+^2 / 2)(rho^-2 - 1) + (gamma R theta+ /(gamma-1))(rho^(gamma-1) - 1),
// i.e. the unique root of H(rho) = phi on the branch through rho = 1
// (requires m u+^2 > gamma R theta+ so that H'(1) < 0).
double bernoulli_density(double phi, const PlasmaParams& p);

// H evaluated directly; exposed for independent cross-checks.
double bernoulli_integral(double rho, const PlasmaParams& p);

// Sonic point of the branch and the most negative admissible phi.
double sonic_density(const PlasmaParams& p);
double sonic_phi_limit(const PlasmaParams& p);

// W(phi) = int_0^phi (rho(s) - e^-s) ds by adaptive quadrature; the
// monotone orbit satisfies (phi')^2 = 2 W(phi).
double sagdeev_potential(double phi, const PlasmaParams& p);

// W''(0) in closed form: 1 - 1/(m u+^2 - gamma R theta+).
double sagdeev_curvature_origin(const PlasmaParams& p);

// Integrates phi' = -sgn(phi) sqrt(2 W(phi)) from phi(0) = phi_b and
// reconstructs (rho, u, theta) through the first integrals.
StationaryProfile1D solve_stationary_halfline(const PlasmaParams& p,
                                              double L1, int n1);

// Least-squares decay exponent of -log|phi| over x in [L1/4, L1/2].
double fit_decay_alpha(const StationaryProfile1D& prof);

// Sup-norm residuals of the stationary system under fourth-order centered
// differencing of the tabulated profile (interior nodes only).
struct SpResiduals {
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
  double poisson = 0.0;
  double sup() const;
};
SpResiduals sp_residuals(const StationaryProfile1D& prof,
                         const PlasmaParams& p);

double least_squares_slope(const std::vector<double>& xs,
                           const std::vector<double>& ys);

}  // namespace epsh

#endif
