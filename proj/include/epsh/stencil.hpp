#ifndef EPSH_STENCIL_HPP
#define EPSH_STENCIL_HPP

#include "epsh/grid.hpp"

namespace epsh {

// Second-order first derivative along y1: centered in the interior,
// one-sided three-point at the wall and truncation rows.
inline double d_y1(const double* f, const Grid& g, int i, int j) {
  const std::size_t c = g.cols();
  const double* p = f + j;
  if (i == 0)
    return (-3.0 * p[0] + 4.0 * p[c] - p[2 * c]) / (2.0 * g.h1);
  if (i == g.n1) {
    const std::size_t k = static_cast<std::size_t>(i) * c;
    return (3.0 * p[k] - 4.0 * p[k - c] + p[k - 2 * c]) / (2.0 * g.h1);
  }
  const std::size_t k = static_cast<std::size_t>(i) * c;
  return (p[k + c] - p[k - c]) / (2.0 * g.h1);
}

// Second-order first derivative along y2 (periodic strip).
inline double d_y2(const double* f, const Grid& g, int i, int j) {
  const std::size_t c = g.cols();
  const std::size_t row = static_cast<std::size_t>(i) * c;
  const int jp = g.wrap2(j + 1), jm = g.wrap2(j - 1);
  return (f[row + jp] - f[row + jm]) / (2.0 * g.h2);
}

inline double d2_y1(const double* f, const Grid& g, int i, int j) {
  const std::size_t c = g.cols();
  const std::size_t k = static_cast<std::size_t>(i) * c + j;
  if (i == 0)
    return (2.0 * f[k] - 5.0 * f[k + c] + 4.0 * f[k + 2 * c] - f[k + 3 * c]) /
           (g.h1 * g.h1);
  if (i == g.n1)
    return (2.0 * f[k] - 5.0 * f[k - c] + 4.0 * f[k - 2 * c] - f[k - 3 * c]) /
           (g.h1 * g.h1);
  return (f[k + c] - 2.0 * f[k] + f[k - c]) / (g.h1 * g.h1);
}

inline double d2_y2(const double* f, const Grid& g, int i, int j) {
  const std::size_t c = g.cols();
  const std::size_t row = static_cast<std::size_t>(i) * c;
  const int jp = g.wrap2(j + 1), jm = g.wrap2(j - 1);
  return (f[row + jp] - 2.0 * f[row + j] + f[row + jm]) / (g.h2 * g.h2);
}

// Mixed derivative d^2/dy1 dy2, centered (one-sided in y1 at the end rows).
inline double d2_y1y2(const double* f, const Grid& g, int i, int j) {
  const std::size_t c = g.cols();
  const int jp = g.wrap2(j + 1), jm = g.wrap2(j - 1);
  auto dy2_at = [&](int ii) {
    const std::size_t row = static_cast<std::size_t>(ii) * c;
    return (f[row + jp] - f[row + jm]) / (2.0 * g.h2);
  };
  if (i == 0)
    return (-3.0 * dy2_at(0) + 4.0 * dy2_at(1) - dy2_at(2)) / (2.0 * g.h1);
  if (i == g.n1)
    return (3.0 * dy2_at(i) - 4.0 * dy2_at(i - 1) + dy2_at(i - 2)) /
           (2.0 * g.h1);
  return (dy2_at(i + 1) - dy2_at(i - 1)) / (2.0 * g.h1);
}

}  // namespace epsh

#endif
