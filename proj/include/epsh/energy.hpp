#ifndef EPSH_ENERGY_HPP
#define EPSH_ENERGY_HPP

#include "epsh/evolve.hpp"

namespace epsh {

// Weighted quadratic energy of a state:
//   int e^{beta y1} ( psi^2 + <A0 Psi, Psi> + m (div eta)^2
//                     + R theta |grad psi|^2 + R/((gamma-1) theta) |grad zeta|^2 ),
// with physical-coordinate gradients through the graph map.
double energy_functional(const FieldState& s, const SystemContext& ctx,
                         double beta);

// Assembles one diagnostic record (norms, energy, wall margins, potential
// bracket margins).
RunRecord compute_record(const FieldState& s, const FieldState& dpsi,
                         const SystemContext& ctx, double dt,
                         std::uint64_t step_no, double n3_running);

}  // namespace epsh

#endif
