#include "epsh/sheath1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace epsh {
namespace {

double H(double rho, const PlasmaParams& p) {
  const double kin = 0.5 * p.m * p.u_plus * p.u_plus;
  const double ent = p.gamma * p.R * p.theta_plus / (p.gamma - 1.0);
  return kin * (1.0 / (rho * rho) - 1.0) +
         ent * (std::pow(rho, p.gamma - 1.0) - 1.0);
}

double dH(double rho, const PlasmaParams& p) {
  return -p.m * p.u_plus * p.u_plus / (rho * rho * rho) +
         p.gamma * p.R * p.theta_plus * std::pow(rho, p.gamma - 2.0);
}

// Safeguarded Newton for H(rho) = phi on a bracket where H is monotone
// decreasing.
double solve_branch(double phi, double lo, double hi, const PlasmaParams& p) {
  double a = lo, b = hi;  // H(a) >= phi >= H(b)
  double rho = 1.0 + phi / dH(1.0, p);
  if (!(rho > a && rho < b)) rho = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double f = H(rho, p) - phi;
    if (f > 0.0)
      a = rho;
    else
      b = rho;
    const double d = dH(rho, p);
    double next = d != 0.0 ? rho - f / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double change = std::abs(next - rho);
    rho = next;
    if (change <= 1e-15 * rho || b - a <= 1e-15 * rho) break;
  }
  return rho;
}

}  // namespace

double bernoulli_integral(double rho, const PlasmaParams& p) {
  return H(rho, p);
}

double sonic_density(const PlasmaParams& p) {
  return std::pow(p.m * p.u_plus * p.u_plus / (p.gamma * p.R * p.theta_plus),
                  1.0 / (p.gamma + 1.0));
}

double sonic_phi_limit(const PlasmaParams& p) {
  return H(sonic_density(p), p);
}

double bernoulli_density(double phi, const PlasmaParams& p) {
  const double super = p.m * p.u_plus * p.u_plus - p.gamma * p.R * p.theta_plus;
  if (!(super > 0.0))
    throw BranchExhausted("branch through rho = 1 requires m u+^2 > gamma R theta+");
  if (phi == 0.0) return 1.0;
  if (phi < 0.0) {
    const double rho_s = sonic_density(p);
    const double phi_min = H(rho_s, p);
    if (phi < phi_min)
      throw BranchExhausted("phi = " + std::to_string(phi) +
                            " is below the sonic-point value " +
                            std::to_string(phi_min));
    if (phi == phi_min) return rho_s;
    return solve_branch(phi, 1.0, rho_s, p);
  }
  // phi > 0: root in (0, 1); H -> +inf as rho -> 0+
  double lo = 0.5;
  while (H(lo, p) < phi) lo *= 0.5;
  return solve_branch(phi, lo, 1.0, p);
}

namespace {

double sheath_charge(double s, const PlasmaParams& p) {
  return bernoulli_density(s, p) - std::exp(-s);
}

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(double a, double fa, double b, double fb, double m, double fm,
             double whole, double tol, int depth, const PlasmaParams& p) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = sheath_charge(lm, p), frm = sheath_charge(rm, p);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, p) +
         adapt(m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, p);
}

}  // namespace

double sagdeev_potential(double phi, const PlasmaParams& p) {
  if (phi == 0.0) return 0.0;
  const double a = 0.0, b = phi;
  const double fa = sheath_charge(a, p), fb = sheath_charge(b, p);
  const double m = 0.5 * (a + b), fm = sheath_charge(m, p);
  const double whole = simpson(fa, fm, fb, b - a);
  return adapt(a, fa, b, fb, m, fm, whole, 1e-12, 48, p);
}

double sagdeev_curvature_origin(const PlasmaParams& p) {
  return 1.0 - 1.0 / (p.m * p.u_plus * p.u_plus - p.gamma * p.R * p.theta_plus);
}

namespace {

// Cumulative Sagdeev table on [0, phi_b] (Gauss-Legendre 7 per panel);
// keeps the orbit integration from re-running the adaptive quadrature at
// every stage.
class SagdeevTable {
public:
  SagdeevTable(double phi_b, const PlasmaParams& p) : p_(p), phi_b_(phi_b) {
    npan_ = 1024;
    dphi_ = phi_b / npan_;
    cum_.resize(npan_ + 1);
    cum_[0] = 0.0;
    for (int k = 0; k < npan_; ++k)
      cum_[k + 1] = cum_[k] + panel(k * dphi_, (k + 1) * dphi_);
  }

  double operator()(double phi) const {
    // clamp roundoff excursions just past the endpoints
    if (phi_b_ < 0.0)
      phi = std::clamp(phi, phi_b_, 0.0);
    else
      phi = std::clamp(phi, 0.0, phi_b_);
    const double pos = phi / dphi_;
    int k = static_cast<int>(pos);
    if (k >= npan_) k = npan_ - 1;
    return cum_[k] + panel(k * dphi_, phi);
  }

private:
  double panel(double a, double b) const {
    // 7-point Gauss-Legendre on [a, b]
    static const double xg[7] = {-0.9491079123427585, -0.7415311855993945,
                                 -0.4058451513773972, 0.0,
                                 0.4058451513773972,  0.7415311855993945,
                                 0.9491079123427585};
    static const double wg[7] = {0.1294849661688697, 0.2797053914892766,
                                 0.3818300505051189, 0.4179591836734694,
                                 0.3818300505051189, 0.2797053914892766,
                                 0.1294849661688697};
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 7; ++i) s += wg[i] * sheath_charge(c + hw * xg[i], p_);
    return s * hw;
  }

  const PlasmaParams& p_;
  double phi_b_;
  int npan_;
  double dphi_;
  std::vector<double> cum_;
};

}  // namespace

StationaryProfile1D solve_stationary_halfline(const PlasmaParams& p,
                                              double L1, int n1) {
  if (!(L1 > 0.0) || n1 < 8) throw ConfigError("invalid half-line grid");
  if (!(bohm_margin(p) > 0.0))
    throw BohmViolated("bohm margin = " + std::to_string(bohm_margin(p)));

  StationaryProfile1D prof;
  prof.L1 = L1;
  prof.n1 = n1;
  prof.h = L1 / n1;
  prof.x.resize(n1 + 1);
  prof.phi.resize(n1 + 1);
  for (int i = 0; i <= n1; ++i) prof.x[i] = i * prof.h;

  const double alpha0 = std::sqrt(sagdeev_curvature_origin(p));

  if (p.phi_b == 0.0) {
    // exact fixed point: constant end state
    prof.rho.assign(n1 + 1, 1.0);
    prof.u.assign(n1 + 1, p.u_plus);
    prof.theta.assign(n1 + 1, p.theta_plus);
    prof.phi.assign(n1 + 1, 0.0);
    prof.dphi.assign(n1 + 1, 0.0);
    prof.alpha_fit = alpha0;
    return prof;
  }

  if (p.phi_b < sonic_phi_limit(p))
    throw BranchExhausted("phi_b = " + std::to_string(p.phi_b) +
                          " is below the sonic-point value " +
                          std::to_string(sonic_phi_limit(p)));

  const SagdeevTable W(p.phi_b, p);
  const double sgn = p.phi_b > 0.0 ? 1.0 : -1.0;
  auto slope = [&](double phi) {
    const double w = std::max(W(phi), 0.0);
    return -sgn * std::sqrt(2.0 * w);
  };

  const double switch_at = 1e-6 * std::abs(p.phi_b);
  const int nsub = std::max(1, static_cast<int>(std::ceil(prof.h / 0.01)));
  const double hs = prof.h / nsub;

  double phi = p.phi_b;
  bool tail = false;
  double tail_phi = 0.0, tail_x = 0.0;
  prof.phi[0] = phi;
  for (int i = 1; i <= n1; ++i) {
    if (!tail && std::abs(phi) < switch_at) {
      // linearized closed-form tail; avoids stalling at the homoclinic point
      tail = true;
      tail_phi = phi;
      tail_x = prof.x[i - 1];
    }
    if (tail) {
      prof.phi[i] = tail_phi * std::exp(-alpha0 * (prof.x[i] - tail_x));
    } else {
      for (int k = 0; k < nsub; ++k) {
        const double k1 = slope(phi);
        const double k2 = slope(phi + 0.5 * hs * k1);
        const double k3 = slope(phi + 0.5 * hs * k2);
        const double k4 = slope(phi + hs * k3);
        phi += hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      prof.phi[i] = phi;
    }
    if (prof.phi[i] * sgn < 0.0 ||
        std::abs(prof.phi[i]) > std::abs(prof.phi[i - 1]) * (1.0 + 1e-12))
      throw NonMonotone("potential reversed direction at x = " +
                        std::to_string(prof.x[i]) + "; reduce the step");
  }

  prof.rho.resize(n1 + 1);
  prof.u.resize(n1 + 1);
  prof.theta.resize(n1 + 1);
  prof.dphi.resize(n1 + 1);
  for (int i = 0; i <= n1; ++i) {
    const double ph = prof.phi[i];
    const double rho = bernoulli_density(ph, p);
    prof.rho[i] = rho;
    prof.u[i] = p.u_plus / rho;
    prof.theta[i] = p.theta_plus * std::pow(rho, p.gamma - 1.0);
    const double w = std::max(W(ph), 0.0);
    prof.dphi[i] = -sgn * std::sqrt(2.0 * w);  // phi' = -sgn(phi) sqrt(2W)
  }

  prof.alpha_fit = fit_decay_alpha(prof);
  return prof;
}

double fit_decay_alpha(const StationaryProfile1D& prof) {
  std::vector<double> xs, ys;
  for (int i = 0; i <= prof.n1; ++i) {
    if (prof.x[i] < 0.25 * prof.L1 || prof.x[i] > 0.5 * prof.L1) continue;
    const double a = std::abs(prof.phi[i]);
    if (a <= 1e-10)
      throw WindowDegenerate("|phi| underflows on the fit window");
    xs.push_back(prof.x[i]);
    ys.push_back(-std::log(a));
  }
  if (xs.size() < 4) throw WindowDegenerate("fit window has too few nodes");
  return least_squares_slope(xs, ys);
}

double least_squares_slope(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n)
    throw ConfigError("slope fit needs at least two samples");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("slope fit abscissae are degenerate");
  return sxy / sxx;
}

double SpResiduals::sup() const {
  return std::max({mass, momentum, energy, poisson});
}

SpResiduals sp_residuals(const StationaryProfile1D& prof,
                         const PlasmaParams& p) {
  SpResiduals r;
  const int n = prof.n1;
  const double h = prof.h;
  auto d4 = [&](const std::vector<double>& f, int i) {
    return (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) /
           (12.0 * h);
  };
  auto d4_of = [&](auto&& fn, int i) {
    return (-fn(i + 2) + 8.0 * fn(i + 1) - 8.0 * fn(i - 1) + fn(i - 2)) /
           (12.0 * h);
  };
  auto dd4 = [&](const std::vector<double>& f, int i) {
    return (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] -
            f[i - 2]) /
           (12.0 * h * h);
  };
  for (int i = 2; i <= n - 2; ++i) {
    const double mass = d4_of(
        [&](int k) { return prof.rho[k] * prof.u[k]; }, i);
    const double mom = p.m * prof.u[i] * d4(prof.u, i) +
                       p.R * prof.theta[i] *
                           d4_of([&](int k) { return std::log(prof.rho[k]); },
                                 i) +
                       p.R * d4(prof.theta, i) - d4(prof.phi, i);
    const double en = prof.u[i] * d4(prof.theta, i) +
                      (p.gamma - 1.0) * prof.theta[i] * d4(prof.u, i);
    const double poi =
        dd4(prof.phi, i) - (prof.rho[i] - std::exp(-prof.phi[i]));
    r.mass = std::max(r.mass, std::abs(mass));
    r.momentum = std::max(r.momentum, std::abs(mom));
    r.energy = std::max(r.energy, std::abs(en));
    r.poisson = std::max(r.poisson, std::abs(poi));
  }
  return r;
}

}  // namespace epsh
