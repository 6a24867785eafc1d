#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "epsh/background.hpp"
#include "epsh/coeffs.hpp"
#include "epsh/eig.hpp"

using namespace epsh;

namespace {
PlasmaParams canonical(double phi_b = 0.0) {
  return PlasmaParams::make(1.0, 1.0, 5.0 / 3.0, -2.0, 1.0, phi_b);
}
LocalState far_state(const PlasmaParams& p) {
  return LocalState{0.0, p.u_plus, 0.0, p.theta_plus};
}
}  // namespace

TEST_CASE("symmetrizer entries and positivity") {
  const auto p = canonical();
  const auto A0 = symmetrizer(far_state(p), p, 1);
  CHECK(A0(0, 0) == 1.0);
  CHECK(A0(1, 1) == 1.0);
  CHECK(A0(2, 2) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(min_eigenvalue(A0) > 0.0);

  LocalState bad = far_state(p);
  bad.theta = -0.1;
  CHECK_THROWS_AS(symmetrizer(bad, p, 1), TemperatureNonpositive);

  // positive definite for random positive temperatures
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.05, 4.0);
  for (int k = 0; k < 50; ++k) {
    LocalState s{0.0, -1.0, 0.3, U(rng)};
    CHECK(min_eigenvalue(symmetrizer(s, p, 2)) > 0.0);
  }
}

TEST_CASE("first convection matrix at the end state") {
  const auto p = canonical();
  const auto A1 = convection_matrix(1, far_state(p), p, 1);
  const double expect[3][3] = {{-2, 1, 0}, {1, -2, 1}, {0, 1, -3}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(A1(i, j) == doctest::Approx(expect[i][j]).epsilon(1e-15));
}

TEST_CASE("characteristic speeds of the symmetrized symbol") {
  const auto p = canonical();
  const auto V = far_state(p);
  // eigenvalues of (A0)^-1 A1 equal those of L^-1 A1 L^-1 with L = sqrt(A0)
  const auto A0 = symmetrizer(V, p, 1);
  const auto A1 = convection_matrix(1, V, p, 1);
  SmallMat S(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      S(i, j) = A1(i, j) / std::sqrt(A0(i, i) * A0(j, j));
  const auto ev = sym_eigenvalues(S);
  const double c = std::sqrt(5.0 / 3.0);
  CHECK(ev[0] == doctest::Approx(-2.0 - c).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(ev[2] == doctest::Approx(-2.0 + c).epsilon(1e-12));
}

TEST_CASE("matrices are exactly symmetric and linear in the direction") {
  const auto p = canonical();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int k = 0; k < 40; ++k) {
    LocalState V{U(rng), U(rng), U(rng), 0.2 + std::abs(U(rng))};
    double xi[2] = {U(rng), U(rng)};
    const auto A = symbol_matrix(V, xi, p, 2);
    for (int i = 0; i < A.n; ++i)
      for (int j = 0; j < A.n; ++j) CHECK(A(i, j) == A(j, i));
    // A(xi) = xi1 A1 + xi2 A2 entrywise
    const auto A1 = convection_matrix(1, V, p, 2);
    const auto A2 = convection_matrix(2, V, p, 2);
    for (int i = 0; i < A.n; ++i)
      for (int j = 0; j < A.n; ++j)
        CHECK(A(i, j) ==
              doctest::Approx(xi[0] * A1(i, j) + xi[1] * A2(i, j)).epsilon(1e-14));
  }
}

TEST_CASE("background coupling and curvature forcing") {
  const auto p = canonical(-0.05);
  SUBCASE("flat wall: no transverse columns, no forcing") {
    const auto g = Grid::line(20.0, 512);
    const auto bg = make_background(p, g);
    const auto b = background_point(bg, 0);
    const auto B = background_coupling(b, 0.0, p, 2);
    // columns that multiply M' vanish for a flat wall
    CHECK(B(0, 2) == 0.0);
    CHECK(B(1, 2) == 0.0);
    CHECK(B(2, 3) == 0.0);
    CHECK(B(3, 2) == 0.0);
    double h[2];
    curvature_forcing(b, 0.0, p, 2, h);
    CHECK(h[0] == 0.0);
    CHECK(h[1] == 0.0);
  }
  SUBCASE("zero wall potential: constant background, zero coupling") {
    const auto g = Grid::line(20.0, 512);
    const auto bg = make_background(canonical(0.0), g);
    const auto b = background_point(bg, 3);
    const auto B = background_coupling(b, 0.7, p, 2);
    for (int i = 0; i < B.n; ++i)
      for (int j = 0; j < B.n; ++j) CHECK(B(i, j) == 0.0);
    double h[2];
    curvature_forcing(b, 0.7, p, 2, h);
    CHECK(h[1] == 0.0);
  }
  SUBCASE("bump forcing equals the product of the tabulated factors") {
    const auto g = Grid::line(20.0, 512);
    const auto bg = make_background(p, g);
    const auto bnd = BoundaryProfile::gaussian_sum({{1.0, 0.0, 1.0}});
    const double s = 1.0 / std::sqrt(2.0);  // below the bump flank
    const double Mp = bnd.Mp(s);
    const auto b = background_point(bg, 0);
    double h[2];
    curvature_forcing(b, Mp, p, 2, h);
    CHECK(h[1] == doctest::Approx(-p.m * bg.u[0] * bg.du[0] * Mp).epsilon(1e-15));
    CHECK(h[1] != 0.0);
  }
}

TEST_CASE("potential nonlinearities") {
  CHECK(charge_nonlinearity(0.0, 0.3) == 0.0);
  CHECK(boltzmann_nonlinearity(0.0, -0.2) == 0.0);
  CHECK(charge_nonlinearity(0.1, 0.0) ==
        doctest::Approx(std::exp(0.1) - 1.1).epsilon(1e-14));

  // quadratic smallness of g0 from the Taylor remainder
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double v = 0.3 * U(rng);
    const double psi = U(rng);
    const double bound = (std::exp(std::abs(v)) - 1.0) * std::abs(psi) +
                         std::exp(std::abs(v)) * std::exp(std::abs(psi)) * psi *
                             psi / 2.0;
    CHECK(std::abs(charge_nonlinearity(psi, v)) <= bound * (1 + 1e-12));
  }

  // dsigma derivative matches finite differences
  for (int k = 0; k < 100; ++k) {
    const double phi = 0.3 * U(rng), s = 0.8 * U(rng), d = 1e-6;
    const double fd = (boltzmann_nonlinearity(s + d, phi) -
                       boltzmann_nonlinearity(s - d, phi)) /
                      (2 * d);
    CHECK(boltzmann_nonlinearity_dsigma(s, phi) ==
          doctest::Approx(fd).epsilon(1e-6));
  }

  CHECK(curvature_source(0.3, -0.2, 0.5, 0.1, 1) == 0.0);
  CHECK(curvature_source(0.3, -0.2, 0.5, 0.1, 2) ==
        doctest::Approx(0.2 * 0.25 + 0.03).epsilon(1e-14));
}

TEST_CASE("wall flux form at the end state") {
  const auto p = canonical();
  const double n[2] = {-1.0, 0.0};
  const auto F = wall_flux_form(far_state(p), n, p, 1);
  CHECK(F(0, 0) == doctest::Approx(2.0));
  CHECK(F(1, 1) == doctest::Approx(2.0));
  CHECK(F(2, 2) == doctest::Approx(3.0));
  CHECK(F(0, 1) == doctest::Approx(-1.0));
  CHECK(F(0, 2) == doctest::Approx(-1.0));
  CHECK(min_eigenvalue(F) > 0.0);
}

TEST_CASE("depth flux form positivity boundary is the sonic line") {
  const auto p = canonical();
  SUBCASE("canonical end state is positive") {
    auto F1 = depth_flux_form(far_state(p), p, 1);
    for (auto& v : F1.a) v = -v;
    CHECK(min_eigenvalue(F1) > 0.0);
    CHECK(min_eigenvalue(F1) == doctest::Approx(0.7530204).epsilon(1e-5));
  }
  SUBCASE("random scan: margin positive whenever supersonic") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
      const double m = 0.5 + 1.5 * U(rng), R = 0.5 + 1.5 * U(rng);
      const double g = 1.1 + 1.6 * U(rng), th = 0.5 + 1.5 * U(rng);
      const double sonic = std::sqrt(g * R * th / m);
      const double up = -sonic * (0.5 + 2.0 * U(rng));
      const auto pp = PlasmaParams::make(m, R, g, up, th, 0.0);
      auto F1 = depth_flux_form(LocalState{0, up, 0, th}, pp, 1);
      for (auto& v : F1.a) v = -v;
      const double me = min_eigenvalue(F1);
      const double super = m * up * up - g * R * th;
      if (std::abs(super) < 1e-3) continue;  // numerical threshold zone
      CHECK((super > 0.0) == (me > 0.0));
      if (bohm_margin(pp) > 0.0) CHECK(me > 0.0);
    }
  }
  SUBCASE("dim-2 reduction shares the minimum eigenvalue") {
    auto F1a = depth_flux_form(far_state(p), p, 1);
    auto F1b = depth_flux_form(far_state(p), p, 2);
    for (auto& v : F1a.a) v = -v;
    for (auto& v : F1b.a) v = -v;
    CHECK(min_eigenvalue(F1a) == doctest::Approx(min_eigenvalue(F1b)).epsilon(1e-12));
  }
}

TEST_CASE("local supersonic margin") {
  const auto p = canonical(0.0);
  SUBCASE("zero perturbation, flat wall, phi_b = 0 equals the far margin") {
    const auto g = Grid::line(20.0, 64);
    const auto bg = make_background(p, g);
    auto s = FieldState::zeros(g);
    const double got =
        local_supersonic_margin(s, bg, BoundaryProfile::flat(), g, p);
    CHECK(got == supersonic_outflow_margin(p, BoundaryProfile::flat()));
  }
  SUBCASE("attracting wall keeps the margin positive for small bias") {
    const auto pp = canonical(-0.05);
    const auto g = Grid::line(20.0, 512);
    const auto bg = make_background(pp, g);
    auto s = FieldState::zeros(g);
    const double got =
        local_supersonic_margin(s, bg, BoundaryProfile::flat(), g, pp);
    CHECK(got > 0.0);
    CHECK(got == doctest::Approx(0.655034).epsilon(1e-4));
  }
  SUBCASE("large wall heating flips the sign") {
    const auto g = Grid::line(20.0, 64);
    const auto bg = make_background(p, g);
    auto s = FieldState::zeros(g);
    s.zeta[g.idx(0)] = 10.0;
    CHECK(local_supersonic_margin(s, bg, BoundaryProfile::flat(), g, p) < 0.0);
  }
  SUBCASE("nonpositive wall temperature is rejected") {
    const auto g = Grid::line(20.0, 64);
    const auto bg = make_background(p, g);
    auto s = FieldState::zeros(g);
    s.zeta[g.idx(0)] = -2.0;
    CHECK_THROWS_AS(local_supersonic_margin(s, bg, BoundaryProfile::flat(), g, p),
                    TemperatureNonpositive);
  }
}
