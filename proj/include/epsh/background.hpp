#ifndef EPSH_BACKGROUND_HPP
#define EPSH_BACKGROUND_HPP

#include <vector>

#include "epsh/grid.hpp"
#include "epsh/params.hpp"
#include "epsh/sheath1d.hpp"

namespace epsh {

// Half-line profile composed with the graph map: since y1 = x1 - M(x2),
// the composed background is a function of y1 alone and one table row
// serves every transverse column. Derivatives are analytic (through the
// first integrals), never numerical differences of the tables.
struct Background {
  PlasmaParams params;
  double alpha_fit = 0.0;
  std::vector<double> rho, v, dv, d2v, u, du, d2u, theta, dtheta, d2theta,
      phi, dphi, d2phi;

  std::size_t nodes() const { return v.size(); }
};

Background background_from_profile(const StationaryProfile1D& prof,
                                   const PlasmaParams& p);

// Solves the half-line problem on the grid's y1 nodes and composes it.
Background make_background(const PlasmaParams& p, const Grid& g);

}  // namespace epsh

#endif
