#include "epsh/steady.hpp"

#include <cmath>
#include <string>

#include "epsh/norms.hpp"
#include "epsh/sheath1d.hpp"

namespace epsh {

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

StationarySolution compute_stationary(
    const SystemContext& ctx, const SteadyOptions& opt,
    const std::function<void(const RunRecord&)>& on_record) {
  if (!(bohm_margin(ctx.params) > 0.0))
    throw BohmViolated("bohm margin = " +
                       std::to_string(bohm_margin(ctx.params)));
  if (!(supersonic_outflow_margin(ctx.params, ctx.boundary) > 0.0))
    throw SupersonicLost(
        "far-field outflow margin = " +
        std::to_string(supersonic_outflow_margin(ctx.params, ctx.boundary)));

  SystemContext run_ctx = ctx;
  run_ctx.cfg.t_end = opt.max_time;
  run_ctx.cfg.tol_steady = opt.tol;
  if (run_ctx.cfg.snapshot_interval <= 0.0)
    run_ctx.cfg.snapshot_interval = opt.t_star;

  auto res = evolve(FieldState::zeros(ctx.grid), run_ctx, on_record);
  if (!res.steady)
    throw NotConverged("time derivative norm " +
                       std::to_string(res.rhs_norm_final) + " above " +
                       std::to_string(opt.tol) + " at t = " +
                       std::to_string(res.final_state.t));

  StationarySolution out;
  out.fields = std::move(res.final_state);
  out.steps = res.steps;
  out.t_final = out.fields.t;
  out.records = std::move(res.records);
  out.trajectory = std::move(res.trajectory);
  out.resid_norm = out.records.back().rhs_norm;

  const auto d = rhs(out.fields, out.fields.sigma, run_ctx);
  out.resid_sup = steady_residual_sup(out.fields, d, run_ctx);
  const auto sres =
      sigma_equation_residual(out.fields.sigma, out.fields.psi, ctx.elliptic());
  out.sigma_resid_sup = sup_abs(sres);
  return out;
}

CauchyReport translation_cauchy_check(const Trajectory& traj, double t_star,
                                      const Grid& g, double beta) {
  if (!(t_star > 0.0)) throw ConfigError("t_star must be positive");
  // locate states at k * t_star for k = 0, 1, ...
  std::vector<const FieldState*> at;
  for (int k = 0;; ++k) {
    const double want = k * t_star;
    const FieldState* best = nullptr;
    double dist = 0.45 * t_star;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double d = std::abs(traj.times[i] - want);
      if (d < dist) {
        dist = d;
        best = &traj.states[i];
      }
    }
    if (!best) break;
    at.push_back(best);
  }
  if (at.size() < 5)
    throw WindowTooShort("need samples at k t_star for k = 0..4, found " +
                         std::to_string(at.size()));

  CauchyReport rep;
  for (std::size_t k = 0; k + 1 < at.size(); ++k) {
    FieldState diff = *at[k + 1];
    auto dc = diff.comps();
    auto pc = at[k]->comps();
    for (int c = 0; c < diff.ncomp(); ++c)
      for (std::size_t m = 0; m < dc[c]->size(); ++m)
        (*dc[c])[m] -= (*pc[c])[m];
    rep.d.push_back(weighted_norm_state(diff, 1, beta, g));
  }

  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < rep.d.size(); ++k) {
    if (rep.d[k] <= 1e-300) continue;
    xs.push_back(static_cast<double>(k) * t_star);
    ys.push_back(-std::log(rep.d[k]));
  }
  if (xs.size() < 2) {
    rep.degenerate = true;
    return rep;
  }
  rep.lambda = least_squares_slope(xs, ys);
  return rep;
}

double fit_lambda(const Trajectory& traj, const StationarySolution& st,
                  const Grid& g) {
  (void)g;
  if (traj.times.size() < 4)
    throw WindowTooShort("trajectory has fewer than 4 snapshots");
  const double t0 = traj.times.front(), t1 = traj.times.back();
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t < t0 + 0.25 * (t1 - t0) || t > t0 + 0.75 * (t1 - t0)) continue;
    FieldState diff = traj.states[i];
    auto dc = diff.comps();
    auto sc = st.fields.comps();
    double sup = 0.0;
    for (int c = 0; c < diff.ncomp(); ++c)
      for (std::size_t m = 0; m < dc[c]->size(); ++m)
        sup = std::max(sup, std::abs((*dc[c])[m] - (*sc[c])[m]));
    if (sup <= 10.0 * 2.2e-16)
      throw WindowDegenerate("distance to the stationary state underflows");
    xs.push_back(t);
    ys.push_back(-std::log(sup));
  }
  if (xs.size() < 2)
    throw WindowDegenerate("middle window holds fewer than 2 snapshots");
  return least_squares_slope(xs, ys);
}

}  // namespace epsh
