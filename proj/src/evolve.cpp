#include "epsh/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epsh/energy.hpp"
#include "epsh/parallel.hpp"
#include "epsh/stencil.hpp"

namespace epsh {
namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

// Second-order biased differences along the normal axis. Values past the
// truncation row are the far-field state (zero perturbation); the wall
// row uses interior-only stencils.
struct AxialDiff {
  const double* f;  // component array
  std::size_t c;    // column stride
  int n1, j;
  double h;
  bool limiter;

  double at(int i) const {
    return i <= n1 ? f[static_cast<std::size_t>(i) * c + j] : 0.0;
  }
  double forward(int i) const {
    const double d2 = (-3.0 * at(i) + 4.0 * at(i + 1) - at(i + 2)) / (2.0 * h);
    if (!limiter) return d2;
    return minmod(d2, (at(i + 1) - at(i)) / h);
  }
  double backward(int i) const {
    if (i == 0) return forward(0);
    if (i == 1) return (at(2) - at(0)) / (2.0 * h);
    const double d2 = (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * h);
    if (!limiter) return d2;
    return minmod(d2, (at(i) - at(i - 1)) / h);
  }
};

// Periodic biased differences along the transverse axis.
struct TransverseDiff {
  const double* row;  // start of row i
  const Grid* g;
  double h;
  bool limiter;

  double at(int j) const { return row[g->wrap2(j)]; }
  double forward(int j) const {
    const double d2 = (-3.0 * at(j) + 4.0 * at(j + 1) - at(j + 2)) / (2.0 * h);
    if (!limiter) return d2;
    return minmod(d2, (at(j + 1) - at(j)) / h);
  }
  double backward(int j) const {
    const double d2 = (3.0 * at(j) - 4.0 * at(j - 1) + at(j - 2)) / (2.0 * h);
    if (!limiter) return d2;
    return minmod(d2, (at(j) - at(j - 1)) / h);
  }
};

// Characteristic contribution of one grid direction at one node:
// out -= L^-1 sum_k lambda_k a_k(w^bias) v_k  over the mode basis
//   v_± = (s, ±c nhat, q)/(c sqrt2), v_0 = (q, 0, -s)/c, v_perp.
void accumulate_direction(int ns, const double* l, double c, double s,
                          double q, const double* nhat, double uxi,
                          double xinorm, const double* dm, const double* dp,
                          double* out) {
  const double sq2 = std::sqrt(2.0);
  double wm[4], wp[4];
  for (int k = 0; k < ns; ++k) {
    wm[k] = l[k] * dm[k];
    wp[k] = l[k] * dp[k];
  }
  const bool two = ns == 4;
  const int zi = ns - 1;  // zeta slot
  auto par = [&](const double* w) {
    return two ? nhat[0] * w[1] + nhat[1] * w[2] : w[1];
  };
  auto perp = [&](const double* w) {
    return two ? -nhat[1] * w[1] + nhat[0] * w[2] : 0.0;
  };
  const double lam_p = uxi + c * xinorm;
  const double lam_m = uxi - c * xinorm;
  const double lam_0 = uxi;
  const double* src_p = lam_p > 0.0 ? wm : wp;
  const double* src_m = lam_m > 0.0 ? wm : wp;
  const double* src_0 = lam_0 > 0.0 ? wm : wp;

  const double ap = (s * src_p[0] + c * par(src_p) + q * src_p[zi]) / (c * sq2);
  const double am = (s * src_m[0] - c * par(src_m) + q * src_m[zi]) / (c * sq2);
  const double a0 = (q * src_0[0] - s * src_0[zi]) / c;
  const double aperp = perp(src_0);

  double W[4] = {0.0, 0.0, 0.0, 0.0};
  const double cp = lam_p * ap / (c * sq2);
  const double cm = lam_m * am / (c * sq2);
  W[0] += (cp + cm) * s;
  W[zi] += (cp + cm) * q;
  if (two) {
    W[1] += (cp - cm) * c * nhat[0] + lam_0 * aperp * -nhat[1];
    W[2] += (cp - cm) * c * nhat[1] + lam_0 * aperp * nhat[0];
  } else {
    W[1] += (cp - cm) * c;
  }
  W[0] += lam_0 * a0 * q / c;
  W[zi] += lam_0 * a0 * -s / c;

  for (int k = 0; k < ns; ++k) out[k] -= W[k] / l[k];
}

void require_positivity(const FieldState& s, const SystemContext& ctx) {
  const Grid& g = ctx.grid;
  double worst = 1e300;
  for (int i = 0; i <= g.n1; ++i) {
    const double base = ctx.bg.theta[i];
    const std::size_t row = static_cast<std::size_t>(i) * g.cols();
    for (std::size_t j = 0; j < g.cols(); ++j)
      worst = std::min(worst, base + s.zeta[row + j]);
  }
  if (!(worst > 0.0))
    throw TemperatureNonpositive("min theta = " + std::to_string(worst));
}

std::vector<double> solve_sigma_for(const FieldState& s,
                                    const SystemContext& ctx) {
  if (ctx.cfg.disable_sources)
    return std::vector<double>(ctx.grid.size(), 0.0);
  const auto prob = ctx.elliptic();
  return solve_sigma(prob, s.psi, ctx.cfg.sigma_tol, &s.sigma);
}

}  // namespace

SystemContext SystemContext::make(const PlasmaParams& p, const Grid& g,
                                  const BoundaryProfile& b,
                                  const EvolveConfig& cfg,
                                  double beta_override) {
  SystemContext ctx{p, g, b, make_background(p, g), cfg};
  ctx.beta = beta_override > 0.0 ? beta_override
                                 : std::min(ctx.bg.alpha_fit / 2.0, 0.25);
  if (g.dim == 2) {
    ctx.Mp.resize(g.cols());
    ctx.Mpp.resize(g.cols());
    for (std::size_t j = 0; j < g.cols(); ++j) {
      ctx.Mp[j] = b.Mp(g.y2(static_cast<int>(j)));
      ctx.Mpp[j] = b.Mpp(g.y2(static_cast<int>(j)));
    }
  }
  return ctx;
}

double cfl_dt(const FieldState& s, const SystemContext& ctx) {
  const Grid& g = ctx.grid;
  const PlasmaParams& p = ctx.params;
  double dt = 1e300;
  for (int i = 0; i <= g.n1; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * g.cols();
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const double theta = ctx.bg.theta[i] + s.zeta[row + j];
      if (!(theta > 0.0))
        throw TemperatureNonpositive("theta = " + std::to_string(theta));
      const double c = p.sound_speed(theta);
      const double u1 = ctx.bg.u[i] + s.eta1[row + j];
      dt = std::min(dt, g.h1 / (std::abs(u1) + c));
      if (g.dim == 2) {
        const double u2 = s.eta2[row + j];
        dt = std::min(dt, g.h2 / (std::abs(u2) + c));
      }
    }
  }
  return ctx.cfg.cfl * dt;
}

void rhs_into(const FieldState& s, const std::vector<double>& sigma,
              const SystemContext& ctx, FieldState& out) {
  const Grid& g = ctx.grid;
  const PlasmaParams& p = ctx.params;
  const int dim = g.dim;
  const int ns = state_size(dim);
  const std::size_t cols = g.cols();
  const bool sources = !ctx.cfg.disable_sources;
  const bool frozen = ctx.cfg.freeze_coefficients;
  const double Rm = p.R / p.m;

  out.t = s.t;
  out.dim = dim;
  auto comps_in = s.comps();
  auto comps_out = out.comps();

  parallel_for(static_cast<std::size_t>(g.n1), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);  // rows 0..n1-1; far row stays pinned
    const double bg_u = ctx.bg.u[i];
    const double bg_th = ctx.bg.theta[i];
    const double bg_dv = ctx.bg.dv[i];
    const double bg_du = ctx.bg.du[i];
    const double bg_dth = ctx.bg.dtheta[i];

    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t k = ii * cols + j;
      const double eta1 = s.eta1[k];
      const double eta2 = dim == 2 ? s.eta2[k] : 0.0;
      const double zeta = s.zeta[k];

      const double u1 = frozen ? p.u_plus : bg_u + eta1;
      const double u2 = frozen ? 0.0 : eta2;
      const double theta = frozen ? p.theta_plus : bg_th + zeta;

      const double sC = std::sqrt(p.R * theta / p.m);
      const double qC = std::sqrt((p.gamma - 1.0) * p.R * theta / p.m);
      const double cC = std::sqrt(p.gamma * p.R * theta / p.m);
      double l[4] = {std::sqrt(p.R * theta), std::sqrt(p.m), std::sqrt(p.m),
                     std::sqrt(p.R / ((p.gamma - 1.0) * theta))};
      if (dim == 1) l[2] = l[3];

      double acc[4] = {0.0, 0.0, 0.0, 0.0};
      double dm[4], dp[4];

      // normal direction; the graph map turns it into the symbol (1, -M')
      {
        for (int cidx = 0; cidx < ns; ++cidx) {
          AxialDiff d{comps_in[cidx]->data(), cols, g.n1, static_cast<int>(j),
                      g.h1, ctx.cfg.limiter};
          dm[cidx] = d.backward(i);
          dp[cidx] = d.forward(i);
        }
        const double xi2 = dim == 2 ? -ctx.Mp[j] : 0.0;
        const double xin = std::sqrt(1.0 + xi2 * xi2);
        const double nhat[2] = {1.0 / xin, xi2 / xin};
        const double uxi = u1 + u2 * xi2;
        accumulate_direction(ns, l, cC, sC, qC, nhat, uxi, xin, dm, dp, acc);
      }

      if (dim == 2) {
        const std::size_t row0 = ii * cols;
        for (int cidx = 0; cidx < ns; ++cidx) {
          TransverseDiff d{comps_in[cidx]->data() + row0, &g, g.h2,
                           ctx.cfg.limiter};
          dm[cidx] = d.backward(static_cast<int>(j));
          dp[cidx] = d.forward(static_cast<int>(j));
        }
        const double nhat[2] = {0.0, 1.0};
        accumulate_direction(ns, l, cC, sC, qC, nhat, u2, 1.0, dm, dp, acc);
      }

      if (sources) {
        // potential gradient in physical coordinates
        const double s1 = d_y1(sigma.data(), g, i, static_cast<int>(j));
        acc[1] += s1 / p.m;
        if (dim == 2) {
          const double s2 =
              d_y2(sigma.data(), g, i, static_cast<int>(j)) - ctx.Mp[j] * s1;
          acc[2] += s2 / p.m;
        }
        // background coupling and curvature forcing
        if (dim == 1) {
          acc[0] += -bg_dv * eta1;
          acc[1] += -bg_du * eta1 - Rm * bg_dv * zeta;
          acc[2] += -bg_dth * eta1 - (p.gamma - 1.0) * bg_du * zeta;
        } else {
          const double mp = ctx.Mp[j];
          acc[0] += bg_dv * (-eta1 + mp * eta2);
          acc[1] += bg_du * (-eta1 + mp * eta2) - Rm * bg_dv * zeta;
          acc[2] += Rm * bg_dv * mp * zeta - bg_u * bg_du * mp;
          acc[3] +=
              bg_dth * (-eta1 + mp * eta2) - (p.gamma - 1.0) * bg_du * zeta;
        }
      }

      for (int cidx = 0; cidx < ns; ++cidx)
        (*comps_out[cidx])[k] = acc[cidx];
    }
  });

  // truncation row: held at the far-field state
  const std::size_t far = static_cast<std::size_t>(g.n1) * cols;
  for (int cidx = 0; cidx < ns; ++cidx)
    for (std::size_t j = 0; j < cols; ++j) (*comps_out[cidx])[far + j] = 0.0;
}

FieldState rhs(const FieldState& s, const std::vector<double>& sigma,
               const SystemContext& ctx) {
  FieldState out = FieldState::zeros(ctx.grid);
  rhs_into(s, sigma, ctx, out);
  return out;
}

double steady_residual_sup(const FieldState& s, const FieldState& dpsi,
                           const SystemContext& ctx) {
  const Grid& g = ctx.grid;
  const PlasmaParams& p = ctx.params;
  double sup = 0.0;
  auto dc = dpsi.comps();
  const int ns = state_size(g.dim);
  for (int i = 0; i <= g.n1; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * g.cols();
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const double theta = ctx.bg.theta[i] + s.zeta[row + j];
      double a0[4] = {p.R * theta, p.m, p.m, p.R / ((p.gamma - 1.0) * theta)};
      if (g.dim == 1) a0[2] = a0[3];
      for (int c = 0; c < ns; ++c)
        sup = std::max(sup, std::abs(a0[c] * (*dc[c])[row + j]));
    }
  }
  return sup;
}

void step(FieldState& s, double dt, const SystemContext& ctx) {
  const Grid& g = ctx.grid;
  const int ns = state_size(g.dim);

  if (ctx.cfg.check_positivity) require_positivity(s, ctx);
  if (ctx.cfg.check_supersonic) {
    const double m =
        local_supersonic_margin(s, ctx.bg, ctx.boundary, g, ctx.params);
    if (!(m > 0.0))
      throw SupersonicLost("wall outflow margin " + std::to_string(m));
  }

  const std::size_t interior = static_cast<std::size_t>(g.n1) * g.cols();
  FieldState k = FieldState::zeros(g);

  // stage 1
  auto sigma0 = solve_sigma_for(s, ctx);
  rhs_into(s, sigma0, ctx, k);
  FieldState s1 = s;
  {
    auto a = s1.comps();
    auto b = k.comps();
    for (int c = 0; c < ns; ++c) {
      double* x = a[c]->data();
      const double* d = b[c]->data();
      parallel_for(interior, [&](std::size_t m) { x[m] += dt * d[m]; });
    }
  }
  if (ctx.cfg.check_positivity) require_positivity(s1, ctx);

  // stage 2: the potential is re-solved, not lagged
  s1.sigma = sigma0;
  auto sigma1 = solve_sigma_for(s1, ctx);
  rhs_into(s1, sigma1, ctx, k);
  {
    auto a = s.comps();
    auto b = s1.comps();
    auto c2 = k.comps();
    for (int c = 0; c < ns; ++c) {
      double* x = a[c]->data();
      const double* y = b[c]->data();
      const double* d = c2[c]->data();
      parallel_for(interior, [&](std::size_t m) {
        x[m] = 0.5 * x[m] + 0.5 * (y[m] + dt * d[m]);
      });
    }
  }

  // sponge: blend the last interior rows toward the far-field state
  if (ctx.cfg.sponge_cells > 0) {
    auto a = s.comps();
    const int first = g.n1 - ctx.cfg.sponge_cells;
    for (int i = std::max(first, 1); i < g.n1; ++i) {
      const double r =
          static_cast<double>(i - first + 1) / (ctx.cfg.sponge_cells + 1);
      const double w = 1.0 - ctx.cfg.sponge_strength * r * r;
      const std::size_t row = static_cast<std::size_t>(i) * g.cols();
      for (int c = 0; c < ns; ++c) {
        double* x = a[c]->data();
        for (std::size_t j = 0; j < g.cols(); ++j) x[row + j] *= w;
      }
    }
  }

  s.sigma = std::move(sigma1);
  s.t += dt;
}

EvolveResult evolve(
    FieldState init, const SystemContext& ctx,
    const std::function<void(const RunRecord&)>& on_record,
    const std::function<void(const FieldState&, std::uint64_t)>& on_step) {
  ctx.cfg.validate();
  const Grid& g = ctx.grid;

  // admissibility of the initial data
  require_positivity(init, ctx);
  {
    const double m =
        local_supersonic_margin(init, ctx.bg, ctx.boundary, g, ctx.params);
    if (!(m > 0.0))
      throw SupersonicLost("initial wall outflow margin " + std::to_string(m));
  }

  EvolveResult res;
  FieldState s = std::move(init);
  s.sigma = solve_sigma_for(s, ctx);

  const double snap = ctx.cfg.snapshot_interval;
  double next_snap = snap > 0.0 ? snap : 1e300;
  if (snap > 0.0) {
    res.trajectory.times.push_back(s.t);
    res.trajectory.states.push_back(s);
  }

  double n3run = 0.0;
  std::uint64_t steps = 0;
  auto diagnose = [&](double dt_used) {
    s.sigma = solve_sigma_for(s, ctx);
    FieldState d = rhs(s, s.sigma, ctx);
    RunRecord rec = compute_record(s, d, ctx, dt_used, steps, n3run);
    n3run = rec.n3_running;
    res.records.push_back(rec);
    if (on_record) on_record(rec);
    return rec;
  };

  RunRecord rec = diagnose(0.0);
  bool steady = ctx.cfg.tol_steady > 0.0 && rec.rhs_norm < ctx.cfg.tol_steady;

  while (!steady && s.t < ctx.cfg.t_end - 1e-12) {
    double dt = cfl_dt(s, ctx);
    dt = std::min(dt, ctx.cfg.t_end - s.t);
    if (snap > 0.0 && s.t + dt > next_snap - 1e-12)
      dt = std::max(next_snap - s.t, 1e-12);
    step(s, dt, ctx);
    ++steps;
    if (on_step) on_step(s, steps);

    if (snap > 0.0 && s.t >= next_snap - 1e-9) {
      res.trajectory.times.push_back(s.t);
      res.trajectory.states.push_back(s);
      next_snap += snap;
    }
    const bool at_end = s.t >= ctx.cfg.t_end - 1e-12;
    if (steps % static_cast<std::uint64_t>(ctx.cfg.diag_stride) == 0 ||
        at_end) {
      rec = diagnose(dt);
      if (ctx.cfg.tol_steady > 0.0 && rec.rhs_norm < ctx.cfg.tol_steady)
        steady = true;
    }
  }
  if (res.records.empty() || res.records.back().step != steps) diagnose(0.0);

  res.final_state = std::move(s);
  res.steps = steps;
  res.steady = steady;
  res.rhs_norm_final = res.records.back().rhs_norm;
  res.findings = check_energy_monotone(res.records);
  return res;
}

namespace ref {

// Matrix route: spectral projectors
//   P_k = prod_{j != k} (S - lam_j I)/(lam_k - lam_j)
// on the symmetrized symbol, using only the assembled matrices and the
// known speed set {u.xi, u.xi +- c |xi|}. Slow; test twin of the
// closed-form kernel.
FieldState rhs(const FieldState& s, const std::vector<double>& sigma,
               const SystemContext& ctx) {
  const Grid& g = ctx.grid;
  const PlasmaParams& p = ctx.params;
  const int dim = g.dim;
  const int ns = state_size(dim);
  FieldState out = FieldState::zeros(g);
  auto comps_in = s.comps();
  auto comps_out = out.comps();

  for (int i = 0; i < g.n1; ++i) {
    for (int j = 0; j < static_cast<int>(g.cols()); ++j) {
      const std::size_t k = g.idx(i, j);
      LocalState V;
      V.v = ctx.bg.v[i] + s.psi[k];
      V.u1 = ctx.cfg.freeze_coefficients ? p.u_plus : ctx.bg.u[i] + s.eta1[k];
      V.u2 = ctx.cfg.freeze_coefficients || dim == 1 ? 0.0 : s.eta2[k];
      V.theta = ctx.cfg.freeze_coefficients ? p.theta_plus
                                            : ctx.bg.theta[i] + s.zeta[k];
      const double c = p.sound_speed(V.theta);
      const auto A0 = symmetrizer(V, p, dim);
      double linv[4];
      for (int a = 0; a < ns; ++a) linv[a] = 1.0 / std::sqrt(A0(a, a));

      double acc[4] = {0, 0, 0, 0};
      for (int dir = 1; dir <= dim; ++dir) {
        double xi[2] = {0.0, 0.0};
        xi[dir - 1] = 1.0;
        if (dir == 1 && dim == 2) xi[1] = -ctx.Mp[j];
        const double xin = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        const auto A = symbol_matrix(V, xi, p, dim);
        std::vector<double> S(ns * ns);
        for (int a = 0; a < ns; ++a)
          for (int b = 0; b < ns; ++b)
            S[a * ns + b] = linv[a] * A(a, b) * linv[b];
        const double uxi = V.u1 * xi[0] + V.u2 * xi[1];
        const double lam[3] = {uxi + c * xin, uxi - c * xin, uxi};

        double dm[4], dp[4];
        for (int cidx = 0; cidx < ns; ++cidx) {
          if (dir == 1) {
            AxialDiff d{comps_in[cidx]->data(), g.cols(), g.n1, j, g.h1,
                        ctx.cfg.limiter};
            dm[cidx] = d.backward(i);
            dp[cidx] = d.forward(i);
          } else {
            TransverseDiff d{comps_in[cidx]->data() +
                                 static_cast<std::size_t>(i) * g.cols(),
                             &g, g.h2, ctx.cfg.limiter};
            dm[cidx] = d.backward(j);
            dp[cidx] = d.forward(j);
          }
        }
        for (int m = 0; m < 3; ++m) {
          std::vector<double> P(ns * ns, 0.0);
          for (int a = 0; a < ns; ++a) P[a * ns + a] = 1.0;
          for (int o = 0; o < 3; ++o) {
            if (o == m) continue;
            std::vector<double> T(ns * ns, 0.0);
            for (int a = 0; a < ns; ++a)
              for (int b = 0; b < ns; ++b) {
                double acc2 = 0.0;
                for (int e = 0; e < ns; ++e)
                  acc2 += P[a * ns + e] *
                          (S[e * ns + b] - (e == b ? lam[o] : 0.0));
                T[a * ns + b] = acc2 / (lam[m] - lam[o]);
              }
            P.swap(T);
          }
          const double* d = lam[m] > 0.0 ? dm : dp;
          double w[4], Pw[4];
          for (int a = 0; a < ns; ++a) w[a] = d[a] / linv[a];
          for (int a = 0; a < ns; ++a) {
            double acc2 = 0.0;
            for (int b = 0; b < ns; ++b) acc2 += P[a * ns + b] * w[b];
            Pw[a] = acc2;
          }
          for (int a = 0; a < ns; ++a) acc[a] -= lam[m] * Pw[a] * linv[a];
        }
      }

      if (!ctx.cfg.disable_sources) {
        const double s1 = d_y1(sigma.data(), g, i, j);
        acc[1] += s1 / p.m;
        if (dim == 2)
          acc[2] += (d_y2(sigma.data(), g, i, j) - ctx.Mp[j] * s1) / p.m;
        const auto bp = background_point(ctx.bg, i);
        const double mp = dim == 2 ? ctx.Mp[j] : 0.0;
        const auto B = background_coupling(bp, mp, p, dim);
        double psi_v[4];
        psi_v[0] = s.psi[k];
        psi_v[1] = s.eta1[k];
        if (dim == 2) {
          psi_v[2] = s.eta2[k];
          psi_v[3] = s.zeta[k];
        } else {
          psi_v[2] = s.zeta[k];
        }
        for (int a = 0; a < ns; ++a) {
          double acc2 = 0.0;
          for (int b = 0; b < ns; ++b) acc2 += B(a, b) * psi_v[b];
          acc[a] += acc2;
        }
        double h[2] = {0.0, 0.0};
        curvature_forcing(bp, mp, p, dim, h);
        acc[1] += h[0] / p.m;
        if (dim == 2) acc[2] += h[1] / p.m;
      }
      for (int cidx = 0; cidx < ns; ++cidx) (*comps_out[cidx])[k] = acc[cidx];
    }
  }
  return out;
}

}  // namespace ref
}  // namespace epsh
