#ifndef EPSH_PARALLEL_HPP
#define EPSH_PARALLEL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace epsh {

// Thread budget for data-parallel kernels. EPSH_THREADS caps the width
// (0 or unset = all available). Always >= 1.
int thread_budget();

// Parallel loop over [0, n). The body must be pure per index (no shared
// writes except to disjoint slots), so results do not depend on the
// schedule.
template <class F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
  const int nt = thread_budget();
  if (nt > 1 && n > 256) {
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

// Deterministic sum of term(i) for i in [0, n). Terms are accumulated
// serially inside fixed-size blocks and the per-block partials are added
// in ascending block order, so the result is bit-identical for any
// thread count.
template <class F>
double deterministic_sum(std::size_t n, F&& term, std::size_t block = 2048) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + block - 1) / block;
  std::vector<double> partial(nblocks, 0.0);
  parallel_for(nblocks, [&](std::size_t b) {
    const std::size_t lo = b * block;
    const std::size_t hi = lo + block < n ? lo + block : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[b] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Deterministic max (order independent anyway; kept for symmetry).
template <class F>
double parallel_max(std::size_t n, F&& term, std::size_t block = 2048) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + block - 1) / block;
  std::vector<double> partial(nblocks);
  parallel_for(nblocks, [&](std::size_t b) {
    const std::size_t lo = b * block;
    const std::size_t hi = lo + block < n ? lo + block : n;
    double s = term(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double v = term(i);
      if (v > s) s = v;
    }
    partial[b] = s;
  });
  double total = partial[0];
  for (double p : partial)
    if (p > total) total = p;
  return total;
}

}  // namespace epsh

#endif
