#include "epsh/poisson.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "epsh/coeffs.hpp"
#include "epsh/parallel.hpp"

namespace epsh {

double laplacian_at(const std::vector<double>& f, const Grid& g,
                    const BoundaryProfile& b, int i, int j) {
  const std::size_t c = g.cols();
  const std::size_t k = g.idx(i, j);
  const double d11 = (f[k + c] - 2.0 * f[k] + f[k - c]) / (g.h1 * g.h1);
  if (g.dim == 1) return d11;
  const double mp = b.Mp(g.y2(j));
  const double mpp = b.Mpp(g.y2(j));
  const int jp = g.wrap2(j + 1), jm = g.wrap2(j - 1);
  const std::size_t row = static_cast<std::size_t>(i) * c;
  const std::size_t rup = row + c, rdn = row - c;
  const double d22 =
      (f[row + jp] - 2.0 * f[k] + f[row + jm]) / (g.h2 * g.h2);
  const double d12 = (f[rup + jp] - f[rup + jm] - f[rdn + jp] + f[rdn + jm]) /
                     (4.0 * g.h1 * g.h2);
  const double d1 = (f[k + c] - f[k - c]) / (2.0 * g.h1);
  return (1.0 + mp * mp) * d11 - 2.0 * mp * d12 + d22 - mpp * d1;
}

namespace ref {
double laplacian_at(const std::vector<double>& f, const Grid& g,
                    const BoundaryProfile& b, int i, int j) {
  auto at = [&](int ii, int jj) {
    return f[g.idx(ii, g.dim == 2 ? g.wrap2(jj) : 0)];
  };
  const double d11 =
      (at(i + 1, j) - 2 * at(i, j) + at(i - 1, j)) / (g.h1 * g.h1);
  if (g.dim == 1) return d11;
  const double mp = b.Mp(g.y2(j)), mpp = b.Mpp(g.y2(j));
  const double d22 =
      (at(i, j + 1) - 2 * at(i, j) + at(i, j - 1)) / (g.h2 * g.h2);
  const double d12 = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) +
                      at(i - 1, j - 1)) /
                     (4 * g.h1 * g.h2);
  const double d1 = (at(i + 1, j) - at(i - 1, j)) / (2 * g.h1);
  return (1 + mp * mp) * d11 - 2 * mp * d12 + d22 - mpp * d1;
}
}  // namespace ref

namespace {

// Interior unknown layout: k = (i - 1) * cols + j for i = 1..n1-1.
struct Interior {
  const Grid& g;
  std::size_t cols, count;
  explicit Interior(const Grid& gg)
      : g(gg), cols(gg.cols()), count((gg.n1 - 1) * gg.cols()) {}
  int row(std::size_t k) const { return 1 + static_cast<int>(k / cols); }
  int col(std::size_t k) const { return static_cast<int>(k % cols); }
};

double inf_norm(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return parallel_max(v.size(), [&](std::size_t i) { return std::abs(v[i]); });
}

// Applies (Lap - screen) to an interior vector; Dirichlet rows enter as
// zeros through the padded scratch array.
class ScreenedOperator {
public:
  ScreenedOperator(const Grid& g, const BoundaryProfile& b,
                   const std::vector<double>& screen)
      : g_(g), b_(b), in_(g), screen_(screen), pad_(g.size(), 0.0) {}

  std::size_t size() const { return in_.count; }

  void apply(const std::vector<double>& x, std::vector<double>& out) {
    const std::size_t c = in_.cols;
    parallel_for(in_.count, [&](std::size_t k) { pad_[c + k] = x[k]; });
    parallel_for(g_.rows() - 2, [&](std::size_t r) {
      const int i = 1 + static_cast<int>(r);
      for (std::size_t j = 0; j < c; ++j) {
        const std::size_t k = r * c + j;
        out[k] = laplacian_at(pad_, g_, b_, i, static_cast<int>(j)) -
                 screen_[k] * x[k];
      }
    });
  }

  double diag(std::size_t k) const {
    double d = -2.0 / (g_.h1 * g_.h1) - screen_[k];
    if (g_.dim == 2) {
      const double mp = b_.Mp(g_.y2(in_.col(k)));
      d += -mp * mp * 2.0 / (g_.h1 * g_.h1) - 2.0 / (g_.h2 * g_.h2);
    }
    return d;
  }

private:
  const Grid& g_;
  const BoundaryProfile& b_;
  Interior in_;
  const std::vector<double>& screen_;
  std::vector<double> pad_;
};

// Tridiagonal direct solve for the one-dimensional screened operator.
void thomas_solve(const Grid& g, const std::vector<double>& screen,
                  const std::vector<double>& rhs, std::vector<double>& x) {
  const int n = g.n1 - 1;
  const double off = 1.0 / (g.h1 * g.h1);
  std::vector<double> c(n), d(n);
  double beta = -2.0 * off - screen[0];
  c[0] = off / beta;
  d[0] = rhs[0] / beta;
  for (int i = 1; i < n; ++i) {
    beta = (-2.0 * off - screen[i]) - off * c[i - 1];
    c[i] = off / beta;
    d[i] = (rhs[i] - off * d[i - 1]) / beta;
  }
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
}

// Matrix-free BiCGstab with diagonal preconditioning; deterministic
// blocked reductions, infinity-norm stopping.
void bicgstab(ScreenedOperator& A, const std::vector<double>& b,
              std::vector<double>& x, double tol) {
  const std::size_t n = A.size();
  x.assign(n, 0.0);
  std::vector<double> r = b, rhat = b, p(n, 0.0), v(n, 0.0), s(n), t(n),
      phat(n), shat(n);
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& c) {
    return deterministic_sum(n, [&](std::size_t i) { return a[i] * c[i]; });
  };
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  if (inf_norm(r) <= tol) return;
  const int max_iters = 8000;
  for (int it = 0; it < max_iters; ++it) {
    const double rho1 = dot(rhat, r);
    if (std::abs(rho1) < 1e-300) {
      rhat = r;  // restart direction
      rho = 1.0;
      alpha = 1.0;
      omega = 1.0;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      continue;
    }
    const double beta = (rho1 / rho) * (alpha / omega);
    parallel_for(n, [&](std::size_t i) {
      p[i] = r[i] + beta * (p[i] - omega * v[i]);
    });
    parallel_for(n, [&](std::size_t i) { phat[i] = p[i] / A.diag(i); });
    A.apply(phat, v);
    const double rv = dot(rhat, v);
    if (rv == 0.0) throw NotConverged("screened linear solver breakdown");
    alpha = rho1 / rv;
    parallel_for(n, [&](std::size_t i) { s[i] = r[i] - alpha * v[i]; });
    if (inf_norm(s) <= tol) {
      parallel_for(n, [&](std::size_t i) { x[i] += alpha * phat[i]; });
      return;
    }
    parallel_for(n, [&](std::size_t i) { shat[i] = s[i] / A.diag(i); });
    A.apply(shat, t);
    const double tt = dot(t, t);
    if (tt == 0.0) throw NotConverged("screened linear solver breakdown");
    omega = dot(t, s) / tt;
    parallel_for(n, [&](std::size_t i) {
      x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = s[i] - omega * t[i];
    });
    if (inf_norm(r) <= tol) return;
    rho = rho1;
  }
  throw NotConverged("screened linear solve exceeded the iteration cap");
}

void linear_solve(const Grid& g, const BoundaryProfile& b,
                  const std::vector<double>& screen,
                  const std::vector<double>& rhs, std::vector<double>& delta,
                  double tol) {
  if (g.dim == 1) {
    thomas_solve(g, screen, rhs, delta);
    return;
  }
  ScreenedOperator A(g, b, screen);
  bicgstab(A, rhs, delta, tol);
}

using FieldFn =
    std::function<void(const std::vector<double>&, std::vector<double>&)>;

// Shared damped-Newton driver: J = Lap - screen(x), full step first, up
// to 8 halvings per step; the inner solve targets 1e-2 of the current
// nonlinear residual.
std::vector<double> newton_screened(const Grid& g, const BoundaryProfile& b,
                                    std::vector<double> x, const FieldFn& resid,
                                    const FieldFn& screen, double tol,
                                    SolveStats* stats) {
  if (!(tol >= 1e-12))
    throw ConfigError("elliptic tolerance must be >= 1e-12");
  const Interior in(g);
  std::vector<double> r(in.count), scr(in.count), delta(in.count), xt(x.size()),
      rt(in.count), neg(in.count);

  resid(x, r);
  double rnorm = inf_norm(r);
  int steps = 0;
  while (rnorm > tol) {
    if (++steps > 60)
      throw NewtonDiverged("stalled at residual " + std::to_string(rnorm));
    screen(x, scr);
    parallel_for(in.count, [&](std::size_t k) { neg[k] = -r[k]; });
    linear_solve(g, b, scr, neg, delta, 0.01 * rnorm);

    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 8; ++halving) {
      xt = x;
      parallel_for(in.count,
                   [&](std::size_t k) { xt[g.cols() + k] += lambda * delta[k]; });
      resid(xt, rt);
      const double rn = inf_norm(rt);
      if (rn <= 0.5 * rnorm || rn <= tol) {
        x.swap(xt);
        r.swap(rt);
        rnorm = rn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted)
      throw NewtonDiverged("residual failed to halve in 8 damped steps (" +
                           std::to_string(rnorm) + ")");
  }
  if (stats) {
    stats->newton_steps = steps;
    stats->residual = rnorm;
  }
  return x;
}

}  // namespace

std::vector<double> sigma_equation_residual(const std::vector<double>& sigma,
                                            const std::vector<double>& psi,
                                            const EllipticProblem& prob) {
  const Grid& g = *prob.grid;
  const Background& bg = *prob.bg;
  const BoundaryProfile& b = *prob.boundary;
  std::vector<double> out(g.size(), 0.0);
  parallel_for(g.rows() - 2, [&](std::size_t r) {
    const int i = 1 + static_cast<int>(r);
    for (int j = 0; j < static_cast<int>(g.cols()); ++j) {
      const std::size_t k = g.idx(i, j);
      const double mp = g.dim == 2 ? b.Mp(g.y2(j)) : 0.0;
      const double mpp = g.dim == 2 ? b.Mpp(g.y2(j)) : 0.0;
      const double g0 = charge_nonlinearity(psi[k], bg.v[i]);
      const double g1 = boltzmann_nonlinearity(sigma[k], bg.phi[i]);
      const double g2 =
          curvature_source(bg.dphi[i], bg.d2phi[i], mp, mpp, g.dim);
      out[k] =
          laplacian_at(sigma, g, b, i, j) - sigma[k] - psi[k] - g0 - g1 - g2;
    }
  });
  return out;
}

std::vector<double> solve_sigma(const EllipticProblem& prob,
                                const std::vector<double>& psi, double tol,
                                const std::vector<double>* warm,
                                SolveStats* stats) {
  const Grid& g = *prob.grid;
  const Background& bg = *prob.bg;
  const BoundaryProfile& b = *prob.boundary;
  const Interior in(g);

  std::vector<double> x = warm ? *warm : std::vector<double>(g.size(), 0.0);
  // Dirichlet rows pinned to zero regardless of the seed.
  for (std::size_t j = 0; j < g.cols(); ++j) {
    x[g.idx(0, static_cast<int>(j))] = 0.0;
    x[g.idx(g.n1, static_cast<int>(j))] = 0.0;
  }

  auto resid = [&](const std::vector<double>& xv, std::vector<double>& out) {
    const auto full = sigma_equation_residual(xv, psi, prob);
    parallel_for(in.count, [&](std::size_t k) { out[k] = full[g.cols() + k]; });
  };
  auto screen = [&](const std::vector<double>& xv, std::vector<double>& out) {
    parallel_for(in.count, [&](std::size_t k) {
      const int i = in.row(k);
      out[k] = 1.0 + boltzmann_nonlinearity_dsigma(xv[g.cols() + k], bg.phi[i]);
    });
  };
  return newton_screened(g, b, std::move(x), resid, screen, tol, stats);
}

std::vector<double> solve_potential_nonlinear(const std::vector<double>& rho,
                                              double phi_b, const Grid& g,
                                              const BoundaryProfile& b,
                                              double tol, SolveStats* stats) {
  for (double v : rho)
    if (!(v > 0.0)) throw ConfigError("density must be positive everywhere");
  const Interior in(g);
  std::vector<double> x(g.size(), 0.0);
  for (std::size_t j = 0; j < g.cols(); ++j)
    x[g.idx(0, static_cast<int>(j))] = phi_b;

  auto resid = [&](const std::vector<double>& xv, std::vector<double>& out) {
    parallel_for(g.rows() - 2, [&](std::size_t r) {
      const int i = 1 + static_cast<int>(r);
      for (int j = 0; j < static_cast<int>(g.cols()); ++j) {
        const std::size_t k = g.idx(i, j);
        out[r * g.cols() + j] =
            laplacian_at(xv, g, b, i, j) - (rho[k] - std::exp(-xv[k]));
      }
    });
  };
  auto screen = [&](const std::vector<double>& xv, std::vector<double>& out) {
    parallel_for(in.count,
                 [&](std::size_t k) { out[k] = std::exp(-xv[g.cols() + k]); });
  };
  return newton_screened(g, b, std::move(x), resid, screen, tol, stats);
}

std::vector<double> solve_screened_linear(const std::vector<double>& source,
                                          const Grid& g,
                                          const BoundaryProfile& b,
                                          double tol) {
  if (!(tol >= 1e-12))
    throw ConfigError("elliptic tolerance must be >= 1e-12");
  const Interior in(g);
  std::vector<double> rhs(in.count), screen(in.count, 1.0), delta(in.count);
  for (std::size_t k = 0; k < in.count; ++k) rhs[k] = source[g.cols() + k];
  linear_solve(g, b, screen, rhs, delta, tol);
  std::vector<double> x(g.size(), 0.0);
  for (std::size_t k = 0; k < in.count; ++k) x[g.cols() + k] = delta[k];
  return x;
}

PoissonBounds poisson_bounds_margins(const std::vector<double>& sigma,
                                     const Background& bg, const Grid& g) {
  double sup_phi = 0.0, inf_v = 0.0, sup_v = 0.0;
  for (std::size_t i = 0; i < bg.nodes(); ++i) {
    sup_phi = std::max(sup_phi, std::abs(bg.phi[i]));
    inf_v = std::min(inf_v, bg.v[i]);
    sup_v = std::max(sup_v, bg.v[i]);
  }
  PoissonBounds out;
  out.M1 = std::max(sup_phi, -inf_v + 1.0);
  out.M2 = std::max(sup_phi, sup_v + 1.0);

  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < static_cast<int>(g.cols()); ++j) {
      const double tot = sigma[g.idx(i, j)] + bg.phi[i];
      lo = std::min(lo, tot);
      hi = std::max(hi, tot);
    }
  out.margin_high = out.M1 - hi;
  out.margin_low = lo + out.M2;
  return out;
}

PoissonBounds poisson_bounds_check(const std::vector<double>& sigma,
                                   const Background& bg, const Grid& g) {
  const PoissonBounds out = poisson_bounds_margins(sigma, bg, g);
  if (out.margin() < 0.0) {
    for (int i = 0; i <= g.n1; ++i)
      for (int j = 0; j < static_cast<int>(g.cols()); ++j) {
        const double tot = sigma[g.idx(i, j)] + bg.phi[i];
        if (tot > out.M1 || tot < -out.M2)
          throw BoundsViolated("sigma + phi leaves [-M2, M1] first at node (" +
                               std::to_string(i) + ", " + std::to_string(j) +
                               ")");
      }
  }
  return out;
}

}  // namespace epsh
