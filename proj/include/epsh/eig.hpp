#ifndef EPSH_EIG_HPP
#define EPSH_EIG_HPP

#include <cstddef>
#include <vector>

namespace epsh {

// Small dense matrix, row major, n <= 8 in practice.
struct SmallMat {
  int n = 0;
  std::vector<double> a;  // n*n, symmetric assemblers write both triangles

  explicit SmallMat(int n_ = 0) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  void set_sym(int i, int j, double v) {
    (*this)(i, j) = v;
    (*this)(j, i) = v;
  }
};

// Eigenvalues of a symmetric matrix, ascending. Householder
// tridiagonalization followed by implicit-shift QL; convergence threshold
// 1e-12 relative to the matrix norm.
std::vector<double> sym_eigenvalues(const SmallMat& m);

double min_eigenvalue(const SmallMat& m);

}  // namespace epsh

#endif
