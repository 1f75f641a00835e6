#include "wwgm/phase_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "wwgm/errors.hpp"
#include "wwgm/spectral.hpp"

namespace wwgm {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary PhaseFunction layout assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  os.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& is) {
  char buf[sizeof(T)];
  if (!is.read(buf, sizeof(T))) throw ValidationError("read_binary: truncated stream");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void check_label_margin(const CoherentLabel& a, const PhaseGrid& grid, double k) {
  if (a.p.size() != a.x.size()) throw ValidationError("CoherentLabel: p and x differ in length");
  if (a.dim() != grid.dim()) throw ValidationError("CoherentLabel: dimension does not match grid");
  // The last sample sits at L - h, so the margin is measured from there.
  const double reach = grid.half_width() - grid.spacing() - kCoherentMargin / k;
  for (int i = 0; i < a.dim(); ++i) {
    if (std::abs(a.p[i]) > reach || std::abs(a.x[i]) > reach) {
      std::ostringstream os;
      os << "CoherentLabel: component outside the margin (|label| must be <= " << reach << ")";
      throw ValidationError(os.str());
    }
  }
}

PhaseFunction coherent_state(const CoherentLabel& a, const PhaseGrid& grid) {
  check_label_margin(a, grid);
  const int n = grid.dim();
  std::vector<Complex> v(grid.size());
  double z[6];
  for (std::size_t f = 0; f < grid.size(); ++f) {
    grid.point(f, z);
    double phase = 0.0;
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = z[i];
      const double x = z[n + i];
      phase += a.p[i] * x - a.x[i] * p;
      r2 += (p - a.p[i]) * (p - a.p[i]) + (x - a.x[i]) * (x - a.x[i]);
    }
    v[f] = std::polar(std::exp(-0.5 * r2), phase);
  }
  return PhaseFunction(grid, std::move(v), Role::wavefunction);
}

Complex inner(const PhaseFunction& phi, const PhaseFunction& psi) {
  require_same_grid(phi.grid(), psi.grid(), "inner");
  Complex s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += std::conj(phi[i]) * psi[i];
  const auto& g = phi.grid();
  return s * g.cell_volume() / std::pow(kPi, g.dim());
}

double norm(const PhaseFunction& phi) { return std::sqrt(std::abs(inner(phi, phi))); }

PhaseFunction partial(const PhaseFunction& f, const Exponents& orders) {
  if (f.is_polynomial()) {
    return PhaseFunction::from_polynomial(f.grid(), f.polynomial().derivative(orders), f.role());
  }
  return PhaseFunctionAccess::make(f.grid(), spectral::derivative(f.grid(), f.values(), orders),
                                   f.role());
}

PhaseFunction partial_p(const PhaseFunction& f, int i) {
  Exponents o{};
  o.at(f.grid().p_axis(i)) = 1;
  return partial(f, o);
}

PhaseFunction partial_x(const PhaseFunction& f, int i) {
  Exponents o{};
  o.at(f.grid().x_axis(i)) = 1;
  return partial(f, o);
}

PhaseFunction apply_XL(const PhaseFunction& phi, int i) {
  const int n = phi.grid().dim();
  auto x = PhaseFunction::from_polynomial(phi.grid(), Polynomial::x(n, i));
  return (pointwise(x, phi) + kI * partial_p(phi, i)).with_role(phi.role());
}

PhaseFunction apply_PL(const PhaseFunction& phi, int i) {
  const int n = phi.grid().dim();
  auto p = PhaseFunction::from_polynomial(phi.grid(), Polynomial::p(n, i));
  return (pointwise(p, phi) - kI * partial_x(phi, i)).with_role(phi.role());
}

PhaseFunction translate(const PhaseFunction& phi, const std::vector<double>& p,
                        const std::vector<double>& x) {
  const auto& grid = phi.grid();
  const int n = grid.dim();
  if (static_cast<int>(p.size()) != n || static_cast<int>(x.size()) != n) {
    throw ValidationError("translate: shift dimension mismatch");
  }
  std::vector<double> s(grid.axes());
  for (int i = 0; i < n; ++i) {
    s[grid.p_axis(i)] = p[i];
    s[grid.x_axis(i)] = x[i];
  }
  std::vector<Complex> shifted;
  double z[6];
  if (phi.is_polynomial()) {
    shifted.resize(grid.size());
    for (std::size_t f = 0; f < grid.size(); ++f) {
      grid.point(f, z);
      for (int a = 0; a < grid.axes(); ++a) z[a] -= s[a];
      shifted[f] = phi.polynomial()(std::span<const double>(z, grid.axes()));
    }
  } else {
    shifted = spectral::shift(grid, phi.values(), s);
  }
  for (std::size_t f = 0; f < grid.size(); ++f) {
    grid.point(f, z);
    double phase = 0.0;
    for (int i = 0; i < n; ++i) phase += p[i] * z[n + i] - x[i] * z[i];
    shifted[f] *= std::polar(1.0, phase);
  }
  auto out = PhaseFunctionAccess::make(grid, std::move(shifted), phi.role());
  if (phi.role() == Role::wavefunction && !phi.is_polynomial()) {
    const double peak = out.sup_norm();
    if (peak > 0.0 && out.boundary_max() > kBoundaryTolerance * peak) {
      throw ValidationError("translate: shifted support spills past the box margin");
    }
  }
  return out;
}

Peak locate_peak(const PhaseFunction& f) {
  const auto& g = f.grid();
  Peak out;
  double best = -1.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m = std::abs(f[i]);
    if (m > best) {
      best = m;
      out.index = i;
    }
  }
  const int axes = g.axes();
  const int N = g.points();
  out.grid_point.resize(axes);
  out.refined.resize(axes);
  for (int a = 0; a < axes; ++a) {
    const int j = g.index(out.index, a);
    out.grid_point[a] = g.coordinate(j);
    const std::size_t stride = g.stride(a);
    const std::size_t base = out.index - static_cast<std::size_t>(j) * stride;
    const double lm = std::log(std::abs(f[base + static_cast<std::size_t>((j + N - 1) % N) * stride]));
    const double l0 = std::log(best);
    const double lp = std::log(std::abs(f[base + static_cast<std::size_t>((j + 1) % N) * stride]));
    const double curvature = lm - 2.0 * l0 + lp;
    double offset = 0.0;
    if (std::isfinite(lm) && std::isfinite(lp) && curvature < 0.0) {
      offset = std::clamp(0.5 * (lm - lp) / curvature, -0.5, 0.5);
    }
    out.refined[a] = out.grid_point[a] + offset * g.spacing();
  }
  return out;
}

void write_binary(std::ostream& os, const PhaseFunction& f) {
  const auto& g = f.grid();
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.points()));
  put<double>(os, g.half_width());
  for (const auto& v : f.values()) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
}

PhaseFunction read_binary(std::istream& is, Role role) {
  const auto n = get<std::uint32_t>(is);
  const auto N = get<std::uint32_t>(is);
  const auto L = get<double>(is);
  PhaseGrid grid(static_cast<int>(n), static_cast<int>(N), L);
  std::vector<Complex> v(grid.size());
  for (auto& c : v) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    c = Complex(re, im);
  }
  return PhaseFunction(grid, std::move(v), role);
}

void write_csv(std::ostream& os, const PhaseFunction& f) {
  const auto& g = f.grid();
  const int n = g.dim();
  for (int i = 0; i < n; ++i) os << (n == 1 ? "p" : "p" + std::to_string(i + 1)) << ",";
  for (int i = 0; i < n; ++i) os << (n == 1 ? "x" : "x" + std::to_string(i + 1)) << ",";
  os << "re,im\n";
  char buf[64];
  double z[6];
  for (std::size_t k = 0; k < f.size(); ++k) {
    g.point(k, z);
    for (int a = 0; a < g.axes(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g,", z[a]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f[k].real(), f[k].imag());
    os << buf;
  }
}

}  // namespace wwgm
