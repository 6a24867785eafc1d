#include "epsh/coeffs.hpp"

#include <cmath>
#include <string>

namespace epsh {
namespace {

void require_theta(double theta) {
  if (!(theta > 0.0))
    throw TemperatureNonpositive("theta = " + std::to_string(theta));
}

}  // namespace

SmallMat symmetrizer(const LocalState& V, const PlasmaParams& p, int dim) {
  require_theta(V.theta);
  const int ns = state_size(dim);
  SmallMat A(ns);
  A(0, 0) = p.R * V.theta;
  for (int i = 0; i < dim; ++i) A(1 + i, 1 + i) = p.m;
  A(ns - 1, ns - 1) = p.R / ((p.gamma - 1.0) * V.theta);
  return A;
}

SmallMat symbol_matrix(const LocalState& V, const double* xi,
                       const PlasmaParams& p, int dim) {
  require_theta(V.theta);
  const int ns = state_size(dim);
  const double uxi = dim == 2 ? V.u1 * xi[0] + V.u2 * xi[1] : V.u1 * xi[0];
  SmallMat A(ns);
  A(0, 0) = p.R * V.theta * uxi;
  for (int i = 0; i < dim; ++i) {
    A(1 + i, 1 + i) = p.m * uxi;
    A.set_sym(0, 1 + i, p.R * V.theta * xi[i]);
    A.set_sym(1 + i, ns - 1, p.R * xi[i]);
  }
  A(ns - 1, ns - 1) = p.R * uxi / ((p.gamma - 1.0) * V.theta);
  return A;
}

SmallMat convection_matrix(int j, const LocalState& V, const PlasmaParams& p,
                           int dim) {
  if (j == 0) return symmetrizer(V, p, dim);
  if (j < 1 || j > dim) throw ConfigError("direction out of range");
  double xi[2] = {0.0, 0.0};
  xi[j - 1] = 1.0;
  return symbol_matrix(V, xi, p, dim);
}

BackgroundPoint background_point(const Background& bg, int i) {
  BackgroundPoint b;
  b.v = bg.v[i];
  b.dv = bg.dv[i];
  b.u = bg.u[i];
  b.du = bg.du[i];
  b.theta = bg.theta[i];
  b.dtheta = bg.dtheta[i];
  b.phi = bg.phi[i];
  b.dphi = bg.dphi[i];
  b.d2phi = bg.d2phi[i];
  return b;
}

SmallMat background_coupling(const BackgroundPoint& b, double Mp,
                             const PlasmaParams& p, int dim) {
  const int ns = state_size(dim);
  SmallMat B(ns);
  const double rm = p.R / p.m;
  if (dim == 1) {
    B(0, 1) = -b.dv;
    B(1, 1) = -b.du;
    B(1, 2) = -rm * b.dv;
    B(2, 1) = -b.dtheta;
    B(2, 2) = -(p.gamma - 1.0) * b.du;
  } else {
    B(0, 1) = -b.dv;
    B(0, 2) = b.dv * Mp;
    B(1, 1) = -b.du;
    B(1, 2) = b.du * Mp;
    B(1, 3) = -rm * b.dv;
    B(2, 3) = rm * b.dv * Mp;
    B(3, 1) = -b.dtheta;
    B(3, 2) = b.dtheta * Mp;
    B(3, 3) = -(p.gamma - 1.0) * b.du;
  }
  return B;
}

void curvature_forcing(const BackgroundPoint& b, double Mp,
                       const PlasmaParams& p, int dim, double* h_out) {
  h_out[0] = 0.0;
  if (dim == 2) h_out[1] = -p.m * b.u * b.du * Mp;
}

double charge_nonlinearity(double psi, double v_bg) {
  const double ev = std::exp(v_bg);
  return (ev - 1.0) * psi + ev * (std::expm1(psi) - psi);
}

double boltzmann_nonlinearity(double sigma, double phi_bg) {
  const double ep = std::exp(-phi_bg);
  return (ep - 1.0) * sigma - ep * (std::expm1(-sigma) + sigma);
}

double boltzmann_nonlinearity_dsigma(double sigma, double phi_bg) {
  const double ep = std::exp(-phi_bg);
  return (ep - 1.0) + ep * std::expm1(-sigma);
}

double curvature_source(double dphi_bg, double d2phi_bg, double Mp, double Mpp,
                        int dim) {
  if (dim == 1) return 0.0;
  return -d2phi_bg * Mp * Mp + dphi_bg * Mpp;
}

SmallMat wall_flux_form(const LocalState& V, const double* n,
                        const PlasmaParams& p, int dim) {
  require_theta(V.theta);
  const int sz = 1 + 2 * dim;
  const double nu = dim == 2 ? n[0] * V.u1 + n[1] * V.u2 : n[0] * V.u1;
  SmallMat F(sz);
  F(0, 0) = p.m * nu;
  for (int i = 0; i < dim; ++i) {
    F.set_sym(0, 1 + i, n[i] * p.R * V.theta);
    F.set_sym(0, 1 + dim + i, n[i] * p.R);
    F(1 + i, 1 + i) = p.R * V.theta * nu;
    F(1 + dim + i, 1 + dim + i) = p.R * nu / ((p.gamma - 1.0) * V.theta);
  }
  return F;
}

SmallMat depth_flux_form(const LocalState& V, const PlasmaParams& p, int dim) {
  require_theta(V.theta);
  const int sz = 1 + 2 * dim;
  SmallMat F(sz);
  F(0, 0) = p.m * V.u1;
  F.set_sym(0, 1, p.R * V.theta);
  F.set_sym(0, 1 + dim, p.R);
  for (int i = 0; i < dim; ++i) {
    F(1 + i, 1 + i) = p.R * V.theta * V.u1;
    F(1 + dim + i, 1 + dim + i) = p.R * V.u1 / ((p.gamma - 1.0) * V.theta);
  }
  return F;
}

double local_supersonic_margin(const FieldState& s, const Background& bg,
                               const BoundaryProfile& b, const Grid& g,
                               const PlasmaParams& p) {
  double margin = 0.0;
  bool first = true;
  for (int j = 0; j < static_cast<int>(g.cols()); ++j) {
    const std::size_t k = g.idx(0, j);
    const double theta = bg.theta[0] + s.zeta[k];
    if (!(theta > 0.0))
      throw TemperatureNonpositive("theta = " + std::to_string(theta) +
                                   " at wall column " + std::to_string(j));
    const double u1 = bg.u[0] + s.eta1[k];
    const double u2 = g.dim == 2 ? s.eta2[k] : 0.0;
    const double Mp = g.dim == 2 ? b.Mp(g.y2(j)) : 0.0;
    const double out =
        (-u1 + u2 * Mp) / std::sqrt(1.0 + Mp * Mp) - p.sound_speed(theta);
    if (first || out < margin) margin = out;
    first = false;
  }
  return margin;
}

}  // namespace epsh
