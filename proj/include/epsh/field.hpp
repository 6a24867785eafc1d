#ifndef EPSH_FIELD_HPP
#define EPSH_FIELD_HPP

#include <array>
#include <vector>

#include "epsh/grid.hpp"

namespace epsh {

// Perturbation unknowns on a grid: psi (log density), eta (velocity,
// dim components), zeta (temperature), sigma (potential). sigma is zero
// on the wall row and the truncation row by construction.
struct FieldState {
  double t = 0.0;
  int dim = 1;
  std::vector<double> psi, eta1, eta2, zeta, sigma;

  static FieldState zeros(const Grid& g) {
    FieldState s;
    s.dim = g.dim;
    s.psi.assign(g.size(), 0.0);
    s.eta1.assign(g.size(), 0.0);
    if (g.dim == 2) s.eta2.assign(g.size(), 0.0);
    s.zeta.assign(g.size(), 0.0);
    s.sigma.assign(g.size(), 0.0);
    return s;
  }

  int ncomp() const { return 2 + dim; }

  // Hyperbolic components (psi, eta..., zeta), in equation order.
  std::array<std::vector<double>*, 4> comps() {
    if (dim == 2) return {&psi, &eta1, &eta2, &zeta};
    return {&psi, &eta1, &zeta, nullptr};
  }
  std::array<const std::vector<double>*, 4> comps() const {
    if (dim == 2) return {&psi, &eta1, &eta2, &zeta};
    return {&psi, &eta1, &zeta, nullptr};
  }
};

}  // namespace epsh

#endif
