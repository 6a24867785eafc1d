#ifndef EPSH_BOUNDARY_HPP
#define EPSH_BOUNDARY_HPP

#include <vector>

#include "epsh/params.hpp"

namespace epsh {

struct GaussBump {
  double a = 0.0;  // amplitude
  double c = 0.0;  // center
  double w = 1.0;  // width, > 0
};

// Wall graph M: the physical domain is { x1 > M(x2) }. Restricted to a
// finite sum of Gaussians so M and all derivatives are bounded, square
// integrable, and available in closed form.
class BoundaryProfile {
public:
  static BoundaryProfile flat() { return BoundaryProfile{}; }
  static BoundaryProfile gaussian_sum(std::vector<GaussBump> bumps);

  bool is_flat() const { return bumps_.empty(); }
  const std::vector<GaussBump>& bumps() const { return bumps_; }

  double M(double s) const;
  double Mp(double s) const;   // M'
  double Mpp(double s) const;  // M''

  // Supremum of |M'| over the line (exact for <=1 bump, sampled otherwise).
  double max_abs_slope() const;

private:
  std::vector<GaussBump> bumps_;
};

// inf over the wall of -u+/sqrt(1+M'^2) - sqrt(gamma R theta+ / m);
// positive iff the far-field outflow stays supersonic along the whole wall.
double supersonic_outflow_margin(const PlasmaParams& p,
                                 const BoundaryProfile& b);

}  // namespace epsh

#endif
