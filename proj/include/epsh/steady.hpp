#ifndef EPSH_STEADY_HPP
#define EPSH_STEADY_HPP

#include <cstdint>
#include <vector>

#include "epsh/evolve.hpp"

namespace epsh {

// Stationary solution obtained as the long-time limit of the evolution
// seeded from the composed background.
struct StationarySolution {
  FieldState fields;            // terminal Psi and sigma
  double resid_sup = 0.0;       // sup of the time-independent defect
  double resid_norm = 0.0;      // ||dPsi/dt||_{0,beta} at the end
  double sigma_resid_sup = 0.0; // potential equation defect
  std::uint64_t steps = 0;
  double t_final = 0.0;
  std::uint64_t config_hash = 0;
  std::vector<RunRecord> records;
  Trajectory trajectory;
};

struct SteadyOptions {
  double tol = 1e-7;       // steady detection on ||dPsi/dt||_{0,beta}
  double t_star = 5.0;     // snapshot spacing for the translation check
  double max_time = 400.0; // NotConverged beyond this
};

StationarySolution compute_stationary(
    const SystemContext& ctx, const SteadyOptions& opt,
    const std::function<void(const RunRecord&)>& on_record = {});

// Translation differences d_k = ||Psi((k+1)T*) - Psi(k T*)||_{1,beta} and
// the rate of their geometric decay.
struct CauchyReport {
  std::vector<double> d;
  double lambda = 0.0;
  bool degenerate = false;  // too few usable (nonzero) differences to fit
};
CauchyReport translation_cauchy_check(const Trajectory& traj, double t_star,
                                      const Grid& g, double beta);

// Least-squares decay exponent of -log sup|Psi - Psi_s| over the middle
// half of the trajectory window.
double fit_lambda(const Trajectory& traj, const StationarySolution& st,
                  const Grid& g);

std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace epsh

#endif
