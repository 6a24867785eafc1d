#include "epsh/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace epsh {

BoundaryProfile BoundaryProfile::gaussian_sum(std::vector<GaussBump> bumps) {
  for (const auto& b : bumps)
    if (!(b.w > 0.0)) throw ConfigError("bump width must be positive");
  BoundaryProfile out;
  out.bumps_ = std::move(bumps);
  return out;
}

double BoundaryProfile::M(double s) const {
  double v = 0.0;
  for (const auto& b : bumps_) {
    const double z = (s - b.c) / b.w;
    v += b.a * std::exp(-z * z);
  }
  return v;
}

double BoundaryProfile::Mp(double s) const {
  double v = 0.0;
  for (const auto& b : bumps_) {
    const double z = (s - b.c) / b.w;
    v += b.a * (-2.0 * z / b.w) * std::exp(-z * z);
  }
  return v;
}

double BoundaryProfile::Mpp(double s) const {
  double v = 0.0;
  for (const auto& b : bumps_) {
    const double z = (s - b.c) / b.w;
    v += b.a * (4.0 * z * z - 2.0) / (b.w * b.w) * std::exp(-z * z);
  }
  return v;
}

double BoundaryProfile::max_abs_slope() const {
  if (bumps_.empty()) return 0.0;
  // |M'| of a single bump peaks at c +- w/sqrt(2).
  if (bumps_.size() == 1) {
    const auto& b = bumps_[0];
    return std::abs(b.a) * std::sqrt(2.0) * std::exp(-0.5) / b.w;
  }
  double lo = bumps_[0].c, hi = bumps_[0].c;
  for (const auto& b : bumps_) {
    lo = std::min(lo, b.c - 8.0 * b.w);
    hi = std::max(hi, b.c + 8.0 * b.w);
  }
  double best = 0.0;
  const int n = 80001;
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i)
    best = std::max(best, std::abs(Mp(lo + i * h)));
  // include each bump's own critical points as candidates
  for (const auto& b : bumps_) {
    const double d = b.w / std::sqrt(2.0);
    best = std::max({best, std::abs(Mp(b.c - d)), std::abs(Mp(b.c + d))});
  }
  return best;
}

double supersonic_outflow_margin(const PlasmaParams& p,
                                 const BoundaryProfile& b) {
  const double cs = p.sound_speed(p.theta_plus);
  const double flat = -p.u_plus - cs;  // M' -> 0 far from the bumps
  if (b.is_flat()) return flat;
  // Margin is monotone decreasing in |M'|, so the infimum sits at the
  // steepest wall point.
  const double mp = b.max_abs_slope();
  const double steep = -p.u_plus / std::sqrt(1.0 + mp * mp) - cs;
  return std::min(flat, steep);
}

}  // namespace epsh
