#ifndef EPSH_CHECKPOINT_HPP
#define EPSH_CHECKPOINT_HPP

#include <cstdint>
#include <string>

#include "epsh/field.hpp"
#include "epsh/grid.hpp"

namespace epsh {

// Binary snapshot of a FieldState.
// Layout: magic "EPSH", u32 version (= 1), u32 dim, u64 n1, u64 n2,
// f64 L1, f64 L2, f64 t, u64 step, then the raw arrays psi, eta1,
// (eta2,) zeta, sigma as little-endian f64.
void write_checkpoint(const std::string& path, const FieldState& s,
                      const Grid& g, std::uint64_t step);

struct CheckpointInfo {
  std::uint64_t step = 0;
};

// Validates the header against the grid and fills the state.
CheckpointInfo read_checkpoint(const std::string& path, const Grid& g,
                               FieldState& s);

}  // namespace epsh

#endif
