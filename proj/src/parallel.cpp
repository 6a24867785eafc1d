#include "epsh/parallel.hpp"

#include <cstdlib>
#include <string>

namespace epsh {

int thread_budget() {
#ifdef _OPENMP
  // Re-read every call: tests flip EPSH_THREADS at runtime to verify that
  // results do not depend on the parallel width.
  int nt = omp_get_max_threads();
  if (const char* env = std::getenv("EPSH_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0 && cap < nt) nt = cap;
    } catch (...) {
      // ignore malformed values, keep the OpenMP default
    }
  }
  return nt < 1 ? 1 : nt;
#else
  return 1;
#endif
}

}  // namespace epsh
