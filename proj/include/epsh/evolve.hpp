#ifndef EPSH_EVOLVE_HPP
#define EPSH_EVOLVE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "epsh/background.hpp"
#include "epsh/boundary.hpp"
#include "epsh/coeffs.hpp"
#include "epsh/field.hpp"
#include "epsh/grid.hpp"
#include "epsh/params.hpp"
#include "epsh/poisson.hpp"
#include "epsh/report.hpp"

namespace epsh {

struct EvolveConfig {
  double cfl = 0.4;
  double t_end = 0.0;
  int diag_stride = 10;         // steps between diagnostic records
  double tol_steady = 0.0;      // 0 disables steady detection
  double snapshot_interval = 0.0;  // 0 disables state snapshots
  bool check_positivity = true;    // temperature positivity each stage
  bool check_supersonic = true;    // wall outflow margin each step
  double sigma_tol = 1e-10;
  int sponge_cells = 5;
  double sponge_strength = 0.25;
  bool limiter = false;  // minmod safeguard on the biased slopes
  // test switches: freeze coefficient matrices at the end state and/or
  // drop the potential coupling, background coupling, and forcing
  bool freeze_coefficients = false;
  bool disable_sources = false;

  void validate() const {
    if (!(cfl > 0.0 && cfl <= 0.9))
      throw ConfigError("cfl must lie in (0, 0.9]");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (diag_stride < 1) throw ConfigError("diag_stride must be >= 1");
  }
};

// Everything a run needs: parameters, geometry, composed background, and
// the weight of the diagnostic norms.
struct SystemContext {
  PlasmaParams params;
  Grid grid;
  BoundaryProfile boundary;
  Background bg;
  EvolveConfig cfg;
  double beta = 0.25;
  std::vector<double> Mp, Mpp;  // per transverse column (dim 2)

  static SystemContext make(const PlasmaParams& p, const Grid& g,
                            const BoundaryProfile& b, const EvolveConfig& cfg,
                            double beta_override = 0.0);
  EllipticProblem elliptic() const { return EllipticProblem{&grid, &bg, &boundary}; }
};

// Largest stable step: cfl * min over nodes and directions of
// h_dir / (|u_dir| + sound speed).
double cfl_dt(const FieldState& s, const SystemContext& ctx);

// Time derivative of the hyperbolic components given the potential
// perturbation: characteristic-upwinded biased differences per grid
// direction, one-sided interior stencils on the wall row, the far row
// pinned to the end state.
void rhs_into(const FieldState& s, const std::vector<double>& sigma,
              const SystemContext& ctx, FieldState& out);
FieldState rhs(const FieldState& s, const std::vector<double>& sigma,
               const SystemContext& ctx);

// Two-stage strong-stability-preserving step; the potential is re-solved
// at every stage and carried on the state for warm starting.
void step(FieldState& s, double dt, const SystemContext& ctx);

// sup over components of |A0 . dPsi/dt|: the defect of the
// time-independent system at this state.
double steady_residual_sup(const FieldState& s, const FieldState& dpsi,
                           const SystemContext& ctx);

struct Trajectory {
  std::vector<double> times;
  std::vector<FieldState> states;
};

struct EvolveResult {
  FieldState final_state;
  std::uint64_t steps = 0;
  bool steady = false;
  double rhs_norm_final = 0.0;
  std::vector<RunRecord> records;
  Trajectory trajectory;
  std::vector<Finding> findings;
};

// Marches until t_end (or steady detection), streaming diagnostic
// records. Deterministic: identical contexts and initial data give
// bit-identical results for any thread budget. `on_step` runs after every
// accepted step (checkpoint hook).
EvolveResult evolve(
    FieldState init, const SystemContext& ctx,
    const std::function<void(const RunRecord&)>& on_record = {},
    const std::function<void(const FieldState&, std::uint64_t)>& on_step = {});

namespace ref {
// Matrix-route right-hand side: assembles the direction symbols and
// splits them through spectral projectors built from the known speeds.
// Slow; used to cross-check the closed-form kernel.
FieldState rhs(const FieldState& s, const std::vector<double>& sigma,
               const SystemContext& ctx);
}  // namespace ref

}  // namespace epsh

#endif
