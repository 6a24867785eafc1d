#ifndef EPSH_GRID_HPP
#define EPSH_GRID_HPP

#include <cstddef>

#include "epsh/errors.hpp"

namespace epsh {

// Node-centered grid in the graph coordinates (y1, y2) with
// y1 = x1 - M(x2) in [0, L1] and, in dim 2, y2 = x2 in [-L2, L2).
//
// Normal direction: n1 cells, nodes i = 0..n1; i = 0 is the wall row and
// i = n1 the far-field truncation row. Transverse direction (dim 2): n2
// cells on a periodic strip, nodes j = 0..n2-1.
struct Grid {
  int dim = 1;
  double L1 = 0.0;
  int n1 = 0;
  double L2 = 0.0;
  int n2 = 0;
  double h1 = 0.0;
  double h2 = 0.0;

  static Grid line(double L1, int n1) {
    if (n1 < 8) throw ConfigError("n1 must be at least 8");
    if (!(L1 > 0.0)) throw ConfigError("L1 must be positive");
    Grid g;
    g.dim = 1;
    g.L1 = L1;
    g.n1 = n1;
    g.h1 = L1 / n1;
    return g;
  }

  static Grid strip(double L1, int n1, double L2, int n2) {
    if (n1 < 8 || n2 < 8) throw ConfigError("n1 and n2 must be at least 8");
    if (!(L1 > 0.0) || !(L2 > 0.0))
      throw ConfigError("L1 and L2 must be positive");
    Grid g;
    g.dim = 2;
    g.L1 = L1;
    g.n1 = n1;
    g.L2 = L2;
    g.n2 = n2;
    g.h1 = L1 / n1;
    g.h2 = 2.0 * L2 / n2;
    return g;
  }

  std::size_t rows() const { return static_cast<std::size_t>(n1) + 1; }
  std::size_t cols() const {
    return dim == 2 ? static_cast<std::size_t>(n2) : 1;
  }
  std::size_t size() const { return rows() * cols(); }
  std::size_t idx(int i, int j = 0) const { return i * cols() + j; }

  double y1(int i) const { return i * h1; }
  double y2(int j) const { return -L2 + j * h2; }
  int wrap2(int j) const {
    const int n = n2;
    return ((j % n) + n) % n;
  }

  // Quadrature weight of node i in the normal direction: each node owns
  // the cell it is the midpoint of; the two end cells are half width.
  double w1(int i) const { return (i == 0 || i == n1) ? 0.5 * h1 : h1; }
  double w2() const { return dim == 2 ? h2 : 1.0; }
};

}  // namespace epsh

#endif
