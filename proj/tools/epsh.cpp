// Command-line driver: sheath profiles, perturbation runs, stationary
// construction, admissibility scans, and report rendering.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

#include "epsh/checkpoint.hpp"
#include "epsh/config.hpp"
#include "epsh/energy.hpp"
#include "epsh/norms.hpp"
#include "epsh/poisson.hpp"
#include "epsh/sheath1d.hpp"
#include "epsh/steady.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace epsh;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = "./out";
  unsigned long seed = 12345;
  bool quiet = false;
};

void info(const GlobalOpts& g, const std::string& msg) {
  if (!g.quiet) std::cout << msg << "\n";
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

Config load_config(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw ConfigError("--config is required for this subcommand");
  return Config::parse_file(g.config_path);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_profile_csv(const std::string& path,
                       const StationaryProfile1D& prof) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "x1,rho,u,theta,phi,dphi\n" << std::setprecision(17);
  for (int i = 0; i <= prof.n1; ++i)
    out << prof.x[i] << ',' << prof.rho[i] << ',' << prof.u[i] << ','
        << prof.theta[i] << ',' << prof.phi[i] << ',' << prof.dphi[i] << '\n';
}

void write_fields_csv(const std::string& path, const FieldState& s,
                      const Grid& g) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << std::setprecision(17);
  if (g.dim == 1) {
    out << "y1,psi,eta1,zeta,sigma\n";
    for (int i = 0; i <= g.n1; ++i)
      out << g.y1(i) << ',' << s.psi[i] << ',' << s.eta1[i] << ','
          << s.zeta[i] << ',' << s.sigma[i] << '\n';
  } else {
    out << "y1,y2,psi,eta1,eta2,zeta,sigma\n";
    for (int i = 0; i <= g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) {
        const std::size_t k = g.idx(i, j);
        out << g.y1(i) << ',' << g.y2(j) << ',' << s.psi[k] << ','
            << s.eta1[k] << ',' << s.eta2[k] << ',' << s.zeta[k] << ','
            << s.sigma[k] << '\n';
      }
  }
}

int cmd_stationary1d(const GlobalOpts& g) {
  const auto t0 = now_seconds();
  const auto cfg = load_config(g);
  const auto setup = RunSetup::from_config(cfg);
  const auto prof =
      solve_stationary_halfline(setup.params, setup.grid.L1, setup.grid.n1);
  const auto res = sp_residuals(prof, setup.params);

  fs::create_directories(g.out_dir);
  write_profile_csv(g.out_dir + "/profile.csv", prof);
  json j;
  j["alpha_fit"] = prof.alpha_fit;
  j["alpha_linearized"] = std::sqrt(sagdeev_curvature_origin(setup.params));
  j["bohm_margin"] = bohm_margin(setup.params);
  j["sonic_phi_limit"] = sonic_phi_limit(setup.params);
  j["residual"] = {{"mass", res.mass},
                   {"momentum", res.momentum},
                   {"energy", res.energy},
                   {"poisson", res.poisson},
                   {"sup", res.sup()}};
  j["config_hash"] = fnv1a_hash(cfg.canonical());
  j["runtime_s"] = now_seconds() - t0;
  write_json(g.out_dir + "/summary.json", j);
  info(g, "profile: " + g.out_dir + "/profile.csv  (alpha_fit = " +
              std::to_string(prof.alpha_fit) + ")");
  return 0;
}

int cmd_evolve(const GlobalOpts& g, long checkpoint_every,
               const std::string& resume) {
  const auto cfg = load_config(g);
  auto setup = RunSetup::from_config(cfg);
  auto ctx = setup.context();
  fs::create_directories(g.out_dir);

  FieldState init;
  std::uint64_t step0 = 0;
  if (!resume.empty()) {
    init = FieldState::zeros(ctx.grid);
    step0 = read_checkpoint(resume, ctx.grid, init).step;
    info(g, "resumed from " + resume + " at t = " + std::to_string(init.t));
  } else {
    init = initial_state(cfg, ctx);
  }

  NdjsonWriter writer(g.out_dir + "/run.ndjson");
  const std::string ckpt_path = g.out_dir + "/checkpoint.epshk";
  auto on_step = [&](const FieldState& s, std::uint64_t steps) {
    if (checkpoint_every > 0 &&
        steps % static_cast<std::uint64_t>(checkpoint_every) == 0)
      write_checkpoint(ckpt_path, s, ctx.grid, step0 + steps);
  };
  try {
    auto res = evolve(std::move(init), ctx,
                      [&](const RunRecord& r) { writer.write(r); }, on_step);
    write_checkpoint(g.out_dir + "/final.epshk", res.final_state, ctx.grid,
                     step0 + res.steps);
    for (const auto& f : res.findings)
      writer.write_event("finding", f.what + " at t = " + std::to_string(f.t));

    json j;
    j["steps"] = step0 + res.steps;
    j["t_final"] = res.final_state.t;
    j["steady"] = res.steady;
    j["rhs_norm_final"] = res.rhs_norm_final;
    j["sup_psi_final"] = sup_abs_state(res.final_state);
    j["beta"] = ctx.beta;
    j["findings"] = res.findings.size();
    j["config_hash"] = fnv1a_hash(cfg.canonical());
    write_json(g.out_dir + "/summary.json", j);
    info(g, "run: " + g.out_dir + "/run.ndjson  steps = " +
                std::to_string(res.steps));
    return 0;
  } catch (const SolverError& e) {
    writer.write_event("abort", e.what());
    throw;
  }
}

int cmd_stationary(const GlobalOpts& g, double tol, double t_star,
                   double max_time) {
  const auto cfg = load_config(g);
  auto setup = RunSetup::from_config(cfg);
  auto ctx = setup.context();
  fs::create_directories(g.out_dir);

  SteadyOptions opt;
  opt.tol = tol;
  opt.t_star = t_star;
  opt.max_time = max_time;

  NdjsonWriter writer(g.out_dir + "/run.ndjson");
  const auto st = compute_stationary(
      ctx, opt, [&](const RunRecord& r) { writer.write(r); });
  write_fields_csv(g.out_dir + "/stationary.csv", st.fields, ctx.grid);

  json j;
  j["resid_sup"] = st.resid_sup;
  j["resid_norm_beta"] = st.resid_norm;
  j["sigma_resid_sup"] = st.sigma_resid_sup;
  j["steps"] = st.steps;
  j["t_final"] = st.t_final;
  j["beta"] = ctx.beta;
  j["config_hash"] = fnv1a_hash(cfg.canonical());
  try {
    const auto cr =
        translation_cauchy_check(st.trajectory, opt.t_star, ctx.grid, ctx.beta);
    j["cauchy_d"] = cr.d;
    if (!cr.degenerate) j["lambda_cauchy"] = cr.lambda;
  } catch (const SolverError& e) {
    j["cauchy_error"] = e.what();
  }
  try {
    j["lambda_sup"] = fit_lambda(st.trajectory, st, ctx.grid);
  } catch (const SolverError&) {
    // trivially stationary trajectories have no decay to fit
  }
  write_json(g.out_dir + "/summary.json", j);
  info(g, "stationary: " + g.out_dir + "/stationary.csv  (residual sup = " +
              std::to_string(st.resid_sup) + ")");
  return 0;
}

int cmd_bohm_scan(const GlobalOpts& g, int count) {
  fs::create_directories(g.out_dir);
  const std::string path = g.out_dir + "/scan.csv";
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "m,R,gamma,theta_plus,u_plus,bohm_margin,wpp0_fd,min_eig_negF1,"
         "outcome\n"
      << std::setprecision(17);

  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int mismatches = 0;
  for (int k = 0; k < count; ++k) {
    // supersonic tuples away from the degenerate sign boundary, so the
    // finite-difference curvature resolves the sign
    PlasmaParams p;
    for (;;) {
      const double m = 0.5 + 1.5 * U(rng);
      const double R = 0.5 + 1.5 * U(rng);
      const double ga = 1.1 + 1.6 * U(rng);
      const double th = 0.5 + 1.5 * U(rng);
      const double sonic = std::sqrt(ga * R * th / m);
      const double up = -sonic * (1.02 + 1.2 * U(rng));
      p = PlasmaParams::make(m, R, ga, up, th, 0.0);
      const double super = m * up * up - ga * R * th;
      if (super > 0.02 && std::abs(bohm_margin(p)) > 0.05) break;
    }
    const double d = 1e-4;
    const double wpp =
        (sagdeev_potential(d, p) + sagdeev_potential(-d, p)) / (d * d);
    auto F1 =
        depth_flux_form(LocalState{0.0, p.u_plus, 0.0, p.theta_plus}, p, 1);
    for (auto& v : F1.a) v = -v;
    const double me = min_eigenvalue(F1);
    const bool sign_ok = (bohm_margin(p) > 0.0) == (wpp > 0.0);
    const bool pos_link = bohm_margin(p) > 0.0 ? me > 0.0 : true;
    const char* outcome = !sign_ok
                              ? "sign-mismatch"
                              : (!pos_link ? "positivity-mismatch" : "consistent");
    if (!sign_ok || !pos_link) ++mismatches;
    out << p.m << ',' << p.R << ',' << p.gamma << ',' << p.theta_plus << ','
        << p.u_plus << ',' << bohm_margin(p) << ',' << wpp << ',' << me << ','
        << outcome << '\n';
  }
  if (mismatches > 0)
    std::cerr << "EPSH-ERR: scan found " << mismatches
              << " inconsistent tuples (see " << path << ")\n";
  info(g, "scan: " + path + "  (" + std::to_string(count) + " tuples, " +
              std::to_string(mismatches) + " mismatches)");
  return 0;
}

int cmd_check_matrices(const GlobalOpts& g) {
  const auto cfg = load_config(g);
  const auto setup = RunSetup::from_config(cfg);
  const PlasmaParams& p = setup.params;
  const int dim = setup.grid.dim;
  const LocalState far{0.0, p.u_plus, 0.0, p.theta_plus};
  double n[2] = {-1.0, 0.0};

  // far-field margins never need the profile
  auto negF1 = depth_flux_form(far, p, dim);
  for (auto& v : negF1.a) v = -v;
  const double eig_negF1 = min_eigenvalue(negF1);
  const double eig_F_far = min_eigenvalue(wall_flux_form(far, n, p, dim));
  const double outflow = supersonic_outflow_margin(p, setup.boundary);

  std::cout << "bohm margin:                       " << bohm_margin(p) << "\n";
  std::cout << "far-field outflow margin:          " << outflow << "\n";
  std::cout << "min eig of F at the far state:     " << eig_F_far << "\n";
  std::cout << "min eig of -(depth form) at far:   " << eig_negF1 << "\n";

  double eig_F_wall = eig_F_far, eig_A0_min = 1e300;
  bool have_profile = false;
  try {
    const auto prof =
        solve_stationary_halfline(p, setup.grid.L1, setup.grid.n1);
    for (int i = 0; i <= prof.n1; ++i) {
      LocalState V{std::log(prof.rho[i]), prof.u[i], 0.0, prof.theta[i]};
      eig_A0_min =
          std::min(eig_A0_min, min_eigenvalue(symmetrizer(V, p, dim)));
      if (i == 0) eig_F_wall = min_eigenvalue(wall_flux_form(V, n, p, dim));
    }
    have_profile = true;
    std::cout << "min eig of A0 along the profile:   " << eig_A0_min << "\n";
    std::cout << "min eig of F at the wall state:    " << eig_F_wall << "\n";
  } catch (const SolverError& e) {
    std::cout << "profile unavailable (" << e.code() << ")\n";
  }

  const bool ok = eig_F_far > 0.0 && eig_negF1 > 0.0 &&
                  (!have_profile || (eig_A0_min > 0.0 && eig_F_wall > 0.0)) &&
                  have_profile;
  if (!ok) {
    std::cerr << "EPSH-ERR: RequiredPositivityFailed: margins (F far "
              << eig_F_far << ", -F1 " << eig_negF1 << ", F wall "
              << eig_F_wall << ")\n";
    return 3;
  }
  return 0;
}

int cmd_report(const GlobalOpts& g, const std::string& input) {
  render_report(input, g.out_dir);
  info(g, "report: " + g.out_dir + "/summary.txt, report.csv, plot.gp");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plasma-sheath simulation suite for the ion Euler-Poisson "
               "system in graph half-space domains"};
  app.require_subcommand(1);
  // global flags may follow the subcommand
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--config", g.config_path, "path to a key = value config");
  app.add_option("--out", g.out_dir, "output directory (default ./out)");
  app.add_option("--seed", g.seed, "seed for randomized scans");
  app.add_flag("--quiet", g.quiet, "suppress progress output");

  auto* s1d = app.add_subcommand(
      "stationary1d", "solve the half-line sheath profile and fit its decay");

  long checkpoint_every = 0;
  std::string resume;
  auto* ev = app.add_subcommand("evolve", "march the perturbation system");
  ev->add_option("--checkpoint-every", checkpoint_every,
                 "write a rolling state snapshot every N steps");
  ev->add_option("--resume", resume, "continue from a state snapshot");

  double tol = 1e-7, t_star = 5.0, max_time = 400.0;
  auto* st = app.add_subcommand(
      "stationary", "construct the stationary solution as a long-time limit");
  st->add_option("--tol", tol, "steady detection tolerance");
  st->add_option("--t-star", t_star, "translation sampling interval");
  st->add_option("--max-time", max_time, "give up beyond this time");

  int count = 200;
  auto* scan = app.add_subcommand(
      "bohm-scan", "randomized admissibility scan over parameter tuples");
  scan->add_option("--count", count, "number of tuples");

  std::string report_in;
  auto* rep = app.add_subcommand("report",
                                 "render a run record file into text outputs");
  rep->add_option("--in", report_in, "run.ndjson to render")->required();

  auto* chk = app.add_subcommand(
      "check-matrices", "eigenvalue margins of the coefficient matrices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (s1d->parsed()) return cmd_stationary1d(g);
    if (ev->parsed()) return cmd_evolve(g, checkpoint_every, resume);
    if (st->parsed()) return cmd_stationary(g, tol, t_star, max_time);
    if (scan->parsed()) return cmd_bohm_scan(g, count);
    if (chk->parsed()) return cmd_check_matrices(g);
    if (rep->parsed()) return cmd_report(g, report_in);
  } catch (const ConfigError& e) {
    std::cerr << "EPSH-ERR: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "EPSH-ERR: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "EPSH-ERR: internal: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
