#include "epsh/energy.hpp"

#include <cmath>

#include "epsh/eig.hpp"
#include "epsh/norms.hpp"
#include "epsh/parallel.hpp"
#include "epsh/stencil.hpp"

namespace epsh {

double energy_functional(const FieldState& s, const SystemContext& ctx,
                         double beta) {
  const Grid& g = ctx.grid;
  const PlasmaParams& p = ctx.params;
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");

  const std::size_t cols = g.cols();
  return deterministic_sum(
      g.rows(),
      [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const double w = g.w1(i) * g.w2() * std::exp(beta * g.y1(i));
        double rowsum = 0.0;
        for (int j = 0; j < static_cast<int>(cols); ++j) {
          const std::size_t k = ii * cols + j;
          const double psi = s.psi[k];
          const double eta1 = s.eta1[k];
          const double eta2 = g.dim == 2 ? s.eta2[k] : 0.0;
          const double zeta = s.zeta[k];
          const double theta = ctx.bg.theta[i] + zeta;
          if (!(theta > 0.0))
            throw TemperatureNonpositive("theta = " + std::to_string(theta));

          const double mp = g.dim == 2 ? ctx.Mp[j] : 0.0;
          const double p1 = d_y1(s.psi.data(), g, i, j);
          const double z1 = d_y1(s.zeta.data(), g, i, j);
          const double e11 = d_y1(s.eta1.data(), g, i, j);
          double div = e11, gp = p1 * p1, gz = z1 * z1;
          if (g.dim == 2) {
            const double p2 = d_y2(s.psi.data(), g, i, j) - mp * p1;
            const double z2 = d_y2(s.zeta.data(), g, i, j) - mp * z1;
            const double e21 = d_y1(s.eta2.data(), g, i, j);
            const double e22 = d_y2(s.eta2.data(), g, i, j) - mp * e21;
            div = e11 + e22;
            gp += p2 * p2;
            gz += z2 * z2;
          }
          const double quad =
              psi * psi +
              (p.R * theta * psi * psi + p.m * (eta1 * eta1 + eta2 * eta2) +
               p.R / ((p.gamma - 1.0) * theta) * zeta * zeta) +
              p.m * div * div + p.R * theta * gp +
              p.R / ((p.gamma - 1.0) * theta) * gz;
          rowsum += quad;
        }
        return w * rowsum;
      },
      1);
}

RunRecord compute_record(const FieldState& s, const FieldState& dpsi,
                         const SystemContext& ctx, double dt,
                         std::uint64_t step_no, double n3_running) {
  const Grid& g = ctx.grid;
  const double beta = ctx.beta;
  RunRecord r;
  r.t = s.t;
  r.dt = dt;
  r.step = step_no;
  for (int k = 0; k <= 3; ++k)
    r.psi_norm[k] = weighted_norm_state(s, k, beta, g);
  for (int k = 0; k <= 2; ++k)
    r.sigma_norm[k] = weighted_norm(s.sigma, k, beta, g);
  r.energy = energy_functional(s, ctx, beta);
  r.sup_psi = sup_abs_state(s);
  r.sup_sigma = sup_abs(s.sigma);
  r.rhs_norm = weighted_norm_state(dpsi, 0, beta, g);
  r.n3_running = std::max(n3_running, r.psi_norm[3]);

  // wall margins
  double eigF = 1e300;
  for (int j = 0; j < static_cast<int>(g.cols()); ++j) {
    const std::size_t k = g.idx(0, j);
    LocalState V;
    V.v = ctx.bg.v[0] + s.psi[k];
    V.u1 = ctx.bg.u[0] + s.eta1[k];
    V.u2 = g.dim == 2 ? s.eta2[k] : 0.0;
    V.theta = ctx.bg.theta[0] + s.zeta[k];
    const double mp = g.dim == 2 ? ctx.Mp[j] : 0.0;
    const double den = std::sqrt(1.0 + mp * mp);
    double n[2] = {-1.0 / den, mp / den};
    eigF = std::min(eigF,
                    min_eigenvalue(wall_flux_form(V, n, ctx.params, g.dim)));
  }
  r.wall_eig_F = eigF;
  r.wall_eig_normal =
      local_supersonic_margin(s, ctx.bg, ctx.boundary, g, ctx.params);

  const auto pb = poisson_bounds_margins(s.sigma, ctx.bg, g);
  r.bounds_margin_low = pb.margin_low;
  r.bounds_margin_high = pb.margin_high;
  return r;
}

}  // namespace epsh
