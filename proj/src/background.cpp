#include "epsh/background.hpp"

#include <cmath>
#include <string>

namespace epsh {
namespace {

double d2H(double rho, const PlasmaParams& p) {
  return 3.0 * p.m * p.u_plus * p.u_plus / std::pow(rho, 4.0) +
         (p.gamma - 2.0) * p.gamma * p.R * p.theta_plus *
             std::pow(rho, p.gamma - 3.0);
}

double dH(double rho, const PlasmaParams& p) {
  return -p.m * p.u_plus * p.u_plus / (rho * rho * rho) +
         p.gamma * p.R * p.theta_plus * std::pow(rho, p.gamma - 2.0);
}

}  // namespace

Background background_from_profile(const StationaryProfile1D& prof,
                                   const PlasmaParams& p) {
  const std::size_t n = prof.x.size();
  Background bg;
  bg.params = p;
  bg.alpha_fit = prof.alpha_fit;
  bg.rho = prof.rho;
  bg.phi = prof.phi;
  bg.dphi = prof.dphi;
  bg.u = prof.u;
  bg.theta = prof.theta;
  bg.v.resize(n);
  bg.dv.resize(n);
  bg.d2v.resize(n);
  bg.du.resize(n);
  bg.d2u.resize(n);
  bg.dtheta.resize(n);
  bg.d2theta.resize(n);
  bg.d2phi.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double rho = prof.rho[i];
    const double phi = prof.phi[i];
    const double dphi = prof.dphi[i];
    const double hp = dH(rho, p);
    const double drho = dphi / hp;
    const double d2phi = rho - std::exp(-phi);
    const double d2rho = d2phi / hp - dphi * d2H(rho, p) * drho / (hp * hp);

    bg.v[i] = std::log(rho);
    bg.dv[i] = drho / rho;
    bg.d2v[i] = d2rho / rho - bg.dv[i] * bg.dv[i];
    bg.du[i] = -p.u_plus * drho / (rho * rho);
    bg.d2u[i] =
        -p.u_plus * (d2rho / (rho * rho) - 2.0 * drho * drho / (rho * rho * rho));
    bg.dtheta[i] =
        (p.gamma - 1.0) * p.theta_plus * std::pow(rho, p.gamma - 2.0) * drho;
    bg.d2theta[i] = (p.gamma - 1.0) * p.theta_plus *
                    ((p.gamma - 2.0) * std::pow(rho, p.gamma - 3.0) * drho * drho +
                     std::pow(rho, p.gamma - 2.0) * d2rho);
    bg.d2phi[i] = d2phi;
  }

  // Far-field closeness at the truncation row. The analytic bound decays
  // past machine resolution of the states for deep truncations, so it is
  // floored at a few ulps of the far-field values.
  const std::size_t last = n - 1;
  const double floor_ulp =
      64.0 * 2.220446049250313e-16 *
      (1.0 + std::abs(p.u_plus) + p.theta_plus + std::abs(p.phi_b));
  const double bound =
      10.0 * std::abs(p.phi_b) * std::exp(-bg.alpha_fit * prof.L1) + floor_ulp;
  const double dev =
      std::max({std::abs(bg.v[last]), std::abs(bg.u[last] - p.u_plus),
                std::abs(bg.theta[last] - p.theta_plus), std::abs(bg.phi[last])});
  if (dev > bound)
    throw NotConverged("background far-field deviation " + std::to_string(dev) +
                       " exceeds the truncation bound " + std::to_string(bound) +
                       "; increase L1");
  return bg;
}

Background make_background(const PlasmaParams& p, const Grid& g) {
  return background_from_profile(solve_stationary_halfline(p, g.L1, g.n1), p);
}

}  // namespace epsh
