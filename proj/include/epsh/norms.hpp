#ifndef EPSH_NORMS_HPP
#define EPSH_NORMS_HPP

#include <vector>

#include "epsh/field.hpp"
#include "epsh/grid.hpp"

namespace epsh {

// Exponentially weighted discrete Sobolev norm
//   sqrt( sum_{j<=k} int e^{beta y1} |grad^j f|^2 dx ),
// with grad the full derivative tensor in the computational coordinates,
// second-order stencils, and the node-cell midpoint quadrature. The graph
// map is volume preserving, so the area element is 1.
//
// Reductions use a fixed blocked summation order: results are
// bit-identical for any thread count.
double weighted_norm(const std::vector<double>& f, int k, double beta,
                     const Grid& g);

// Norm of the hyperbolic components of a state (root of the sum of the
// squared component norms).
double weighted_norm_state(const FieldState& s, int k, double beta,
                           const Grid& g);

double sup_abs(const std::vector<double>& f);
double sup_abs_state(const FieldState& s);

namespace ref {
// Plain serial reference used by tests and the kernel benchmark; naive
// accumulation in index order, derivatives recomputed pointwise.
double weighted_norm(const std::vector<double>& f, int k, double beta,
                     const Grid& g);
}  // namespace ref

}  // namespace epsh

#endif
