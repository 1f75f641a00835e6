#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "wwgm/phase_function.hpp"
#include "wwgm/phase_space.hpp"

namespace wwgm::test {

using PointFn = std::function<Complex(std::span<const double>)>;

/// sup over the grid of |f - fn|.
inline double max_diff(const PhaseFunction& f, const PointFn& fn) {
  const auto& g = f.grid();
  std::vector<double> z(g.axes());
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.point(i, z.data());
    m = std::max(m, std::abs(f[i] - fn(z)));
  }
  return m;
}

inline PhaseFunction field(const PhaseGrid& g, const PointFn& fn, Role role = Role::observable) {
  std::vector<Complex> v(g.size());
  std::vector<double> z(g.axes());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, z.data());
    v[i] = fn(z);
  }
  return PhaseFunction(g, std::move(v), role);
}

/// Smooth decayed test function: a sum of two displaced, phased Gaussians.
inline PhaseFunction smooth_field(const PhaseGrid& g, Role role = Role::observable) {
  return field(
      g,
      [](std::span<const double> z) {
        double r1 = 0.0, r2 = 0.0;
        for (std::size_t a = 0; a < z.size(); ++a) {
          const double s = a % 2 ? 0.3 : -0.2;
          r1 += (z[a] - s) * (z[a] - s);
          r2 += (z[a] + s) * (z[a] + s);
        }
        return std::exp(-r1 / 2.0) * std::exp(kI * (0.7 * z[0])) + 0.5 * std::exp(-r2 / 1.5);
      },
      role);
}

/// Uniform label with every component in [-r, r].
inline CoherentLabel random_label(std::mt19937_64& rng, int n, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  CoherentLabel a{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    a.p[i] = u(rng);
    a.x[i] = u(rng);
  }
  return a;
}

}  // namespace wwgm::test
