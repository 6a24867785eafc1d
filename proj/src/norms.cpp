#include "epsh/norms.hpp"

#include <cmath>

#include "epsh/errors.hpp"
#include "epsh/parallel.hpp"
#include "epsh/stencil.hpp"

namespace epsh {
namespace {

void check_order_beta(int k, double beta) {
  if (k < 0 || k > 3)
    throw OrderUnsupported("derivative order must be in 0..3, got " +
                           std::to_string(k));
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
}

// Appends the y-derivatives of every array in `level`, producing the
// next derivative tensor (d^j components in dim d, duplicates counted,
// which matches the multinomial weights of |grad^j f|^2).
std::vector<std::vector<double>> next_level(
    const std::vector<std::vector<double>>& level, const Grid& g) {
  std::vector<std::vector<double>> out;
  out.reserve(level.size() * g.dim);
  for (const auto& f : level) {
    std::vector<double> d1(g.size());
    parallel_for(g.rows(), [&](std::size_t ii) {
      const int i = static_cast<int>(ii);
      for (std::size_t j = 0; j < g.cols(); ++j)
        d1[g.idx(i, static_cast<int>(j))] =
            d_y1(f.data(), g, i, static_cast<int>(j));
    });
    out.push_back(std::move(d1));
    if (g.dim == 2) {
      std::vector<double> d2(g.size());
      parallel_for(g.rows(), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        for (std::size_t j = 0; j < g.cols(); ++j)
          d2[g.idx(i, static_cast<int>(j))] =
              d_y2(f.data(), g, i, static_cast<int>(j));
      });
      out.push_back(std::move(d2));
    }
  }
  return out;
}

// Row-blocked weighted sum of squares over all arrays in `level`.
double level_energy(const std::vector<std::vector<double>>& level,
                    double beta, const Grid& g) {
  const std::size_t nc = g.cols();
  return deterministic_sum(
      g.rows(),
      [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const double w = g.w1(i) * g.w2() * std::exp(beta * g.y1(i));
        double s = 0.0;
        for (const auto& f : level) {
          const double* row = f.data() + ii * nc;
          double rs = 0.0;
          for (std::size_t j = 0; j < nc; ++j) rs += row[j] * row[j];
          s += rs;
        }
        return w * s;
      },
      1);
}

}  // namespace

double weighted_norm(const std::vector<double>& f, int k, double beta,
                     const Grid& g) {
  check_order_beta(k, beta);
  if (f.size() != g.size())
    throw ConfigError("field size does not match the grid");
  std::vector<std::vector<double>> level;
  level.push_back(f);
  double total = level_energy(level, beta, g);
  for (int j = 1; j <= k; ++j) {
    level = next_level(level, g);
    total += level_energy(level, beta, g);
  }
  return std::sqrt(total);
}

double weighted_norm_state(const FieldState& s, int k, double beta,
                           const Grid& g) {
  double sq = 0.0;
  for (const auto* c : s.comps()) {
    if (!c) continue;
    const double v = weighted_norm(*c, k, beta, g);
    sq += v * v;
  }
  return std::sqrt(sq);
}

double sup_abs(const std::vector<double>& f) {
  if (f.empty()) return 0.0;
  return parallel_max(f.size(), [&](std::size_t i) { return std::abs(f[i]); });
}

double sup_abs_state(const FieldState& s) {
  double m = 0.0;
  for (const auto* c : s.comps()) {
    if (!c) continue;
    const double v = sup_abs(*c);
    if (v > m) m = v;
  }
  return m;
}

namespace ref {

namespace {
// Pointwise derivative of f along axis (0 = y1, 1 = y2) by direct index
// arithmetic; intentionally written independently of the stencil helpers.
double deriv(const std::vector<double>& f, const Grid& g, int axis, int i,
             int j) {
  if (axis == 0) {
    auto at = [&](int ii) { return f[g.idx(ii, j)]; };
    if (i == 0) return (-1.5 * at(0) + 2.0 * at(1) - 0.5 * at(2)) / g.h1;
    if (i == g.n1)
      return (1.5 * at(i) - 2.0 * at(i - 1) + 0.5 * at(i - 2)) / g.h1;
    return (at(i + 1) - at(i - 1)) / (2.0 * g.h1);
  }
  auto at = [&](int jj) { return f[g.idx(i, g.wrap2(jj))]; };
  return (at(j + 1) - at(j - 1)) / (2.0 * g.h2);
}
}  // namespace

double weighted_norm(const std::vector<double>& f, int k, double beta,
                     const Grid& g) {
  if (k < 0 || k > 3)
    throw OrderUnsupported("derivative order must be in 0..3");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  std::vector<std::vector<double>> tensors{f};
  double total = 0.0;
  for (int order = 0; order <= k; ++order) {
    if (order > 0) {
      std::vector<std::vector<double>> next;
      for (const auto& t : tensors)
        for (int axis = 0; axis < g.dim; ++axis) {
          std::vector<double> d(g.size());
          for (int i = 0; i <= g.n1; ++i)
            for (int j = 0; j < static_cast<int>(g.cols()); ++j)
              d[g.idx(i, j)] = deriv(t, g, axis, i, j);
          next.push_back(std::move(d));
        }
      tensors = std::move(next);
    }
    for (int i = 0; i <= g.n1; ++i) {
      const double w = g.w1(i) * g.w2() * std::exp(beta * g.y1(i));
      for (int j = 0; j < static_cast<int>(g.cols()); ++j)
        for (const auto& t : tensors) {
          const double v = t[g.idx(i, j)];
          total += w * v * v;
        }
    }
  }
  return std::sqrt(total);
}

}  // namespace ref
}  // namespace epsh
