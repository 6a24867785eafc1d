#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "epsh/background.hpp"
#include "epsh/params.hpp"
#include "epsh/sheath1d.hpp"

using namespace epsh;

namespace {

PlasmaParams canonical(double phi_b) {
  return PlasmaParams::make(1.0, 1.0, 5.0 / 3.0, -2.0, 1.0, phi_b);
}

// Bisection oracle on the Bernoulli integral, written independently of
// the production root finder.
double bisect_density(double phi, const PlasmaParams& p) {
  double lo = 1.0, hi = sonic_density(p);
  if (phi > 0.0) {
    hi = 1.0;
    lo = 1e-3;
    while (bernoulli_integral(lo, p) < phi) lo *= 0.5;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bernoulli_integral(mid, p) > phi)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Admissible supersonic parameter sample; stays away from the degenerate
// sign boundary so finite differences of W resolve the sign.
PlasmaParams random_supersonic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    const double m = 0.5 + 1.5 * U(rng);
    const double R = 0.5 + 1.5 * U(rng);
    const double g = 1.1 + 1.6 * U(rng);
    const double th = 0.5 + 1.5 * U(rng);
    const double sonic = std::sqrt(g * R * th / m);
    const double up = -sonic * (1.02 + 1.2 * U(rng));
    const auto p = PlasmaParams::make(m, R, g, up, th, 0.0);
    const double super = m * up * up - g * R * th;
    if (super > 0.02 && std::abs(bohm_margin(p)) > 0.05) return p;
  }
}

}  // namespace

TEST_CASE("bernoulli density: identity and canonical value") {
  const auto p = canonical(-0.05);
  CHECK(bernoulli_density(0.0, p) == 1.0);

  const double got = bernoulli_density(-0.05, p);
  CHECK(got == doctest::Approx(1.0226).epsilon(5e-4));
  CHECK(got == doctest::Approx(bisect_density(-0.05, p)).epsilon(1e-11));
  // first integral is satisfied to the solver tolerance
  CHECK(bernoulli_integral(got, p) == doctest::Approx(-0.05).epsilon(1e-11));

  // positive wall value sits on the rho < 1 side
  const double hi = bernoulli_density(0.05, p);
  CHECK(hi < 1.0);
  CHECK(hi == doctest::Approx(bisect_density(0.05, p)).epsilon(1e-11));
}

TEST_CASE("bernoulli density: linearization slope at zero") {
  const auto p = canonical(0.0);
  const double d = 1e-6;
  const double slope = (bernoulli_density(d, p) - bernoulli_density(-d, p)) / (2 * d);
  CHECK(slope == doctest::Approx(-3.0 / 7.0).epsilon(1e-6));
}

TEST_CASE("bernoulli density: branch exhaustion past the sonic point") {
  const auto p = canonical(0.0);
  const double lim = sonic_phi_limit(p);
  CHECK(lim == doctest::Approx(-0.35111).epsilon(1e-4));
  CHECK_THROWS_AS(bernoulli_density(lim - 0.05, p), BranchExhausted);
  CHECK_NOTHROW(bernoulli_density(lim * 0.99, p));
}

TEST_CASE("sagdeev potential: flatness and curvature at the origin") {
  const auto p = canonical(-0.05);
  CHECK(sagdeev_potential(0.0, p) == 0.0);
  const double d = 1e-4;
  const double wp = (sagdeev_potential(d, p) - sagdeev_potential(-d, p)) / (2 * d);
  CHECK(std::abs(wp) < 1e-9);  // W'(0) = rho(0) - 1 = 0
  const double wpp = (sagdeev_potential(d, p) + sagdeev_potential(-d, p)) / (d * d);
  CHECK(wpp == doctest::Approx(4.0 / 7.0).epsilon(1e-5));
  CHECK(sagdeev_curvature_origin(p) == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("sagdeev potential: no monotone orbit when the margin fails") {
  // supersonic (m u^2 = 3.61 > gamma R theta = 3) but margin negative
  const auto p = PlasmaParams::make(1, 1, 3.0, -1.9, 1, 0);
  CHECK(bohm_margin(p) < 0.0);
  CHECK(sagdeev_potential(1e-3, p) < 0.0);
  CHECK(sagdeev_potential(-1e-3, p) < 0.0);
}

TEST_CASE("sign equivalence of the bohm margin and W''(0)") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 100; ++k) {
    const auto p = random_supersonic(rng);
    const double d = 1e-4;
    const double wpp =
        (sagdeev_potential(d, p) + sagdeev_potential(-d, p)) / (d * d);
    CHECK(((bohm_margin(p) > 0.0) == (wpp > 0.0)));
  }
}

TEST_CASE("half-line solve: constant profile at phi_b = 0") {
  const auto prof = solve_stationary_halfline(canonical(0.0), 20.0, 512);
  for (int i = 0; i <= prof.n1; ++i) {
    CHECK(prof.phi[i] == 0.0);
    CHECK(prof.rho[i] == 1.0);
    CHECK(prof.u[i] == -2.0);
    CHECK(prof.theta[i] == 1.0);
  }
  CHECK(prof.alpha_fit == doctest::Approx(std::sqrt(4.0 / 7.0)).epsilon(1e-14));
}

TEST_CASE("half-line solve: monotone profile and small residuals") {
  for (double phib : {-0.05, +0.05}) {
    const auto p = canonical(phib);
    const auto prof = solve_stationary_halfline(p, 20.0, 2000);

    // phi runs monotonically from phi_b to 0
    CHECK(prof.phi[0] == phib);
    for (int i = 1; i <= prof.n1; ++i)
      CHECK(std::abs(prof.phi[i]) <= std::abs(prof.phi[i - 1]) * (1 + 1e-12));
    CHECK(std::abs(prof.phi[prof.n1]) < std::abs(phib));

    const auto r = sp_residuals(prof, p);
    CHECK(r.sup() < 1e-8);

    // conserved relations hold pointwise
    for (int i = 0; i <= prof.n1; i += 97) {
      CHECK(prof.rho[i] * prof.u[i] == doctest::Approx(p.u_plus).epsilon(1e-10));
      CHECK(prof.theta[i] ==
            doctest::Approx(p.theta_plus * std::pow(prof.rho[i], p.gamma - 1.0))
                .epsilon(1e-10));
      CHECK(prof.rho[i] > 0.0);
      CHECK(prof.theta[i] > 0.0);
    }
    // amplitude control
    double sup_phi = 0.0, sup_rho = 0.0;
    for (int i = 0; i <= prof.n1; ++i) {
      sup_phi = std::max(sup_phi, std::abs(prof.phi[i]));
      sup_rho = std::max(sup_rho, std::abs(prof.rho[i] - 1.0));
    }
    CHECK(sup_phi == std::abs(phib));
    CHECK(sup_rho <= 2.0 * std::abs(phib) * (3.0 / 7.0));
  }
}

TEST_CASE("half-line solve: preconditions") {
  CHECK_THROWS_AS(
      solve_stationary_halfline(PlasmaParams::make(1, 1, 3.0, -1.5, 1, -0.05),
                                20.0, 512),
      BohmViolated);
  CHECK_THROWS_AS(solve_stationary_halfline(canonical(-0.5), 20.0, 512),
                  BranchExhausted);
}

TEST_CASE("residual drops at fourth order under refinement") {
  const auto p = canonical(-0.05);
  const auto coarse = solve_stationary_halfline(p, 20.0, 250);
  const auto fine = solve_stationary_halfline(p, 20.0, 500);
  const double rc = sp_residuals(coarse, p).sup();
  const double rf = sp_residuals(fine, p).sup();
  CHECK(rc / rf >= 8.0);
}

TEST_CASE("decay exponent fit") {
  const auto p = canonical(-0.05);
  SUBCASE("synthetic exponential") {
    StationaryProfile1D prof;
    prof.L1 = 20.0;
    prof.n1 = 1000;
    prof.h = prof.L1 / prof.n1;
    prof.x.resize(prof.n1 + 1);
    prof.phi.resize(prof.n1 + 1);
    prof.dphi.resize(prof.n1 + 1);
    for (int i = 0; i <= prof.n1; ++i) {
      prof.x[i] = i * prof.h;
      prof.phi[i] = -0.05 * std::exp(-0.5 * prof.x[i]);
      prof.dphi[i] = -0.5 * prof.phi[i];
    }
    CHECK(fit_decay_alpha(prof) == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("solved profile vs the linearized rate") {
    const auto prof = solve_stationary_halfline(p, 20.0, 2000);
    const double oracle = std::sqrt(sagdeev_curvature_origin(p));
    CHECK(prof.alpha_fit == doctest::Approx(oracle).epsilon(0.05));

    // the derivative decays at the same fitted rate
    StationaryProfile1D dprof = prof;
    dprof.phi = prof.dphi;
    const double alpha_d = fit_decay_alpha(dprof);
    CHECK(alpha_d == doctest::Approx(prof.alpha_fit).epsilon(0.05));
  }
  SUBCASE("degenerate window") {
    StationaryProfile1D prof;
    prof.L1 = 20.0;
    prof.n1 = 100;
    prof.h = 0.2;
    prof.x.resize(101);
    prof.phi.assign(101, 0.0);
    for (int i = 0; i <= 100; ++i) prof.x[i] = i * prof.h;
    CHECK_THROWS_AS(fit_decay_alpha(prof), WindowDegenerate);
  }
}

TEST_CASE("background tables: derivative consistency") {
  const auto p = canonical(-0.05);
  const auto g = Grid::line(20.0, 2000);
  const auto bg = make_background(p, g);

  // analytic first derivatives match centered differences of the tables
  auto check = [&](const std::vector<double>& f, const std::vector<double>& df) {
    double worst = 0.0;
    for (int i = 1; i < g.n1; ++i) {
      const double fd = (f[i + 1] - f[i - 1]) / (2.0 * g.h1);
      worst = std::max(worst, std::abs(fd - df[i]));
    }
    CHECK(worst < 2e-6);
  };
  check(bg.v, bg.dv);
  check(bg.u, bg.du);
  check(bg.theta, bg.dtheta);
  check(bg.phi, bg.dphi);
  check(bg.dphi, bg.d2phi);
  check(bg.dv, bg.d2v);
  check(bg.du, bg.d2u);
  check(bg.dtheta, bg.d2theta);

  // rho = e^v positive, theta positive
  for (int i = 0; i <= g.n1; ++i) {
    CHECK(bg.rho[i] > 0.0);
    CHECK(bg.theta[i] > 0.0);
  }
}
