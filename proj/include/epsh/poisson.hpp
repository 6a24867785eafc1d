#ifndef EPSH_POISSON_HPP
#define EPSH_POISSON_HPP

#include <vector>

#include "epsh/background.hpp"
#include "epsh/boundary.hpp"
#include "epsh/field.hpp"
#include "epsh/grid.hpp"

namespace epsh {

// Potential solves on the graph-mapped grid. In the computational
// coordinates the physical Laplacian reads
//   (1 + M'^2) d_11 - 2 M' d_12 + d_22 - M'' d_1,
// with M' = M'(y2); it reduces to d_11 (+ d_22) for a flat wall.
// Dirichlet rows at the wall (i = 0) and the truncation (i = n1); the
// transverse direction is a periodic strip.
struct EllipticProblem {
  const Grid* grid = nullptr;
  const Background* bg = nullptr;
  const BoundaryProfile* boundary = nullptr;
};

// Discrete transformed Laplacian at an interior node.
double laplacian_at(const std::vector<double>& f, const Grid& g,
                    const BoundaryProfile& b, int i, int j);

// Residual of the screened equation
//   Lap sigma - sigma - psi - g0 - g1(sigma) - g2
// on the interior rows (boundary rows of the output are zero).
std::vector<double> sigma_equation_residual(const std::vector<double>& sigma,
                                            const std::vector<double>& psi,
                                            const EllipticProblem& prob);

struct SolveStats {
  int newton_steps = 0;
  int linear_iters = 0;
  double residual = 0.0;
};

// Damped Newton on the Boltzmann nonlinearity; each step solves the
// screened linear system to 1e-2 of the current nonlinear residual.
// `warm` seeds the iteration when provided (same size as the grid).
std::vector<double> solve_sigma(const EllipticProblem& prob,
                                const std::vector<double>& psi, double tol,
                                const std::vector<double>* warm = nullptr,
                                SolveStats* stats = nullptr);

// Original nonlinear potential equation Lap phi = rho - e^-phi with
// phi = phi_b at the wall and 0 at the truncation.
std::vector<double> solve_potential_nonlinear(const std::vector<double>& rho,
                                              double phi_b, const Grid& g,
                                              const BoundaryProfile& b,
                                              double tol,
                                              SolveStats* stats = nullptr);

// Purely linear screened solve (Lap - 1) x = source with zero Dirichlet
// rows; the nonlinearities switched off. Used by verification paths.
std::vector<double> solve_screened_linear(const std::vector<double>& source,
                                          const Grid& g,
                                          const BoundaryProfile& b, double tol);

// Pointwise bracket of sigma + phi_bg between the barrier constants
//   M1 = max(sup|phi_bg|, -inf v_bg + 1), M2 = max(sup|phi_bg|, sup v_bg + 1).
struct PoissonBounds {
  double M1 = 0.0, M2 = 0.0;
  double margin_low = 0.0, margin_high = 0.0;
  double margin() const { return margin_low < margin_high ? margin_low : margin_high; }
};
PoissonBounds poisson_bounds_margins(const std::vector<double>& sigma,
                                     const Background& bg, const Grid& g);
// Same, but a violated bracket raises BoundsViolated with the location.
PoissonBounds poisson_bounds_check(const std::vector<double>& sigma,
                                   const Background& bg, const Grid& g);

namespace ref {
// Naive serial operator application kept as the benchmark / test twin.
double laplacian_at(const std::vector<double>& f, const Grid& g,
                    const BoundaryProfile& b, int i, int j);
}  // namespace ref

}  // namespace epsh

#endif
