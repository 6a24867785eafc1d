// Kernel benchmark: OpenMP-parallel production kernels against their
// plain serial references on a mid-size strip. Run with EPSH_THREADS set
// to compare widths.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include "epsh/evolve.hpp"
#include "epsh/norms.hpp"
#include "epsh/parallel.hpp"
#include "epsh/poisson.hpp"

using namespace epsh;

namespace {

double seconds(const std::function<void()>& body, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) body();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void row(const char* name, double ser, double par, int reps) {
  std::printf("%-28s %10.3f ms %10.3f ms %8.2fx   (x%d)\n", name, 1e3 * ser,
              1e3 * par, ser / par, reps);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", thread_budget());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  const auto g = Grid::strip(40.0, 384, 12.0, 192);
  const auto bnd = BoundaryProfile::gaussian_sum({{0.5, 0.0, 2.0}});
  EvolveConfig cfg;
  cfg.t_end = 1.0;
  auto ctx = SystemContext::make(
      PlasmaParams::make(1, 1, 5.0 / 3.0, -2, 1, -0.05), g, bnd, cfg);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1e-3, 1e-3);
  FieldState s = FieldState::zeros(g);
  for (auto* f : s.comps())
    if (f)
      for (auto& v : *f) v = U(rng);
  for (int j = 0; j < g.n2; ++j)
    for (auto* f : s.comps())
      if (f) (*f)[g.idx(g.n1, j)] = 0.0;
  std::vector<double> field(g.size());
  for (auto& v : field) v = U(rng);

  {
    const int reps = 10;
    const double ser =
        seconds([&] { (void)ref::weighted_norm(field, 3, 0.25, g); }, reps);
    const double par =
        seconds([&] { (void)weighted_norm(field, 3, 0.25, g); }, reps);
    row("weighted norm (k = 3)", ser, par, reps);
  }
  {
    const auto sigma = solve_sigma(ctx.elliptic(), s.psi, 1e-9);
    FieldState out = FieldState::zeros(g);
    const int reps = 5;
    const double ser = seconds([&] { (void)ref::rhs(s, sigma, ctx); }, 2);
    const double par = seconds([&] { rhs_into(s, sigma, ctx, out); }, reps);
    row("hyperbolic right-hand side", ser, par, reps);
  }
  {
    // screened solves dominate the stepping cost; the serial column pins
    // the thread budget to one
    const int reps = 3;
    setenv("EPSH_THREADS", "1", 1);
    const double ser =
        seconds([&] { (void)solve_sigma(ctx.elliptic(), s.psi, 1e-9); }, reps);
    unsetenv("EPSH_THREADS");
    const double par =
        seconds([&] { (void)solve_sigma(ctx.elliptic(), s.psi, 1e-9); }, reps);
    row("screened potential solve", ser, par, reps);
  }
  {
    const int reps = 3;
    setenv("EPSH_THREADS", "1", 1);
    FieldState a = s;
    const double ser = seconds([&] { step(a, 1e-3, ctx); }, reps);
    unsetenv("EPSH_THREADS");
    FieldState b = s;
    const double par = seconds([&] { step(b, 1e-3, ctx); }, reps);
    row("full time step", ser, par, reps);
  }
  return 0;
}
