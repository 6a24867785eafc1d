#include "epsh/eig.hpp"

#include <algorithm>
#include <cmath>

#include "epsh/errors.hpp"

namespace epsh {
namespace {

double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

// Householder reduction to tridiagonal form; d = diagonal, e = subdiagonal.
void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d,
                    std::vector<double>& e) {
  auto at = [&](int i, int j) -> double& { return a[i * n + j]; };
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (int i = n - 1; i > 0; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
      if (scale == 0.0) {
        e[i] = at(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        double f = at(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
          for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
          e[j] = g / h;
          f += e[j] * at(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = at(i, j);
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k)
            at(j, k) -= f * e[k] + g * at(i, k);
        }
      }
    } else {
      e[i] = at(i, l);
    }
    d[i] = h;
  }
  for (int i = 0; i < n; ++i) d[i] = at(i, i);
}

// Implicit-shift QL on a tridiagonal matrix; eigenvalues land in d.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, int n,
                 double tol) {
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= tol * dd + tol) break;
      }
      if (m != l) {
        if (++iter == 60)
          throw SolverError("EigFailed", "QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = hypot2(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && m - 1 >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> sym_eigenvalues(const SmallMat& m) {
  const int n = m.n;
  if (n == 0) return {};
  if (n == 1) return {m(0, 0)};
  double norm = 0.0;
  for (double v : m.a) norm = std::max(norm, std::abs(v));
  if (norm == 0.0) return std::vector<double>(n, 0.0);

  std::vector<double> a = m.a, d, e;
  tridiagonalize(a, n, d, e);
  ql_implicit(d, e, n, 1e-12);
  std::sort(d.begin(), d.end());
  return d;
}

double min_eigenvalue(const SmallMat& m) { return sym_eigenvalues(m).front(); }

}  // namespace epsh
