#ifndef EPSH_COEFFS_HPP
#define EPSH_COEFFS_HPP

#include "epsh/background.hpp"
#include "epsh/boundary.hpp"
#include "epsh/eig.hpp"
#include "epsh/field.hpp"
#include "epsh/grid.hpp"
#include "epsh/params.hpp"

namespace epsh {

// Local fluid state entering the coefficient matrices: v = log rho,
// velocity (u1, u2), temperature theta. u2 is ignored in dim 1.
struct LocalState {
  double v = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double theta = 0.0;
};

inline int state_size(int dim) { return dim + 2; }

// Symmetrizer multiplying the time derivative:
// diag(R theta, m, [m,] R/((gamma-1) theta)). Positive definite for
// theta > 0.
SmallMat symmetrizer(const LocalState& V, const PlasmaParams& p, int dim);

// Symmetric matrix of the direction j = 1..dim (the quasilinear flux in
// that coordinate). j = 0 returns the symmetrizer.
SmallMat convection_matrix(int j, const LocalState& V, const PlasmaParams& p,
                           int dim);

// Symbol in an arbitrary direction xi: xi1 A1 + xi2 A2.
SmallMat symbol_matrix(const LocalState& V, const double* xi,
                       const PlasmaParams& p, int dim);

// Background point data entering the zero-order coupling.
struct BackgroundPoint {
  double v = 0.0, dv = 0.0;
  double u = 0.0, du = 0.0;
  double theta = 0.0, dtheta = 0.0;
  double phi = 0.0, dphi = 0.0, d2phi = 0.0;
};
BackgroundPoint background_point(const Background& bg, int i);

// Zero-order coupling of the perturbation to the background gradient
// (the right-hand side carries A0 * this * Psi).
SmallMat background_coupling(const BackgroundPoint& b, double Mp,
                             const PlasmaParams& p, int dim);

// Forcing in the velocity slots from the wall curvature:
// (0, -m u u' M') in dim 2, zero in dim 1. `h_out` has dim entries.
void curvature_forcing(const BackgroundPoint& b, double Mp,
                       const PlasmaParams& p, int dim, double* h_out);

// Nonlinear source terms of the potential equation.
double charge_nonlinearity(double psi, double v_bg);              // g0
double boltzmann_nonlinearity(double sigma, double phi_bg);       // g1
double boltzmann_nonlinearity_dsigma(double sigma, double phi_bg);
double curvature_source(double dphi_bg, double d2phi_bg, double Mp,
                        double Mpp, int dim);                     // g2

// Boundary and depth quadratic forms on (div eta, grad psi, grad zeta),
// size 1 + 2 dim. The wall form is positive definite exactly when the
// outflow through n is supersonic; the negated depth form is positive
// definite exactly when m u1^2 > gamma R theta.
SmallMat wall_flux_form(const LocalState& V, const double* n,
                        const PlasmaParams& p, int dim);
SmallMat depth_flux_form(const LocalState& V, const PlasmaParams& p, int dim);

// Minimum over wall nodes of the outflow margin
//   u . grad(M - x1)/sqrt(1+|grad M|^2) - sqrt(gamma R theta / m)
// with u and theta taken from the perturbed state.
double local_supersonic_margin(const FieldState& s, const Background& bg,
                               const BoundaryProfile& b, const Grid& g,
                               const PlasmaParams& p);

}  // namespace epsh

#endif
