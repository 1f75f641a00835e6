#include "wwgm/star_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "wwgm/errors.hpp"
#include "wwgm/phase_space.hpp"
#include "wwgm/spectral.hpp"

namespace wwgm {

namespace {

// Largest pair count the twisted convolution will attempt.
constexpr double kMaxTwistedPairs = 2e9;

double factorial(int m) {
  double r = 1.0;
  for (int j = 2; j <= m; ++j) r *= j;
  return r;
}

// Splits a bidifferential order into (a, b), a_i = powers of ←∂_{p_i}→∂_{x_i},
// b_i = powers of ←∂_{x_i}→∂_{p_i}, and calls fn for every split with |a|+|b| = m.
void for_each_split(int n, int m, const std::function<void(const int*, const int*)>& fn) {
  int parts[6] = {};
  const int slots = 2 * n;
  std::function<void(int, int)> rec = [&](int slot, int left) {
    if (slot == slots - 1) {
      parts[slot] = left;
      fn(parts, parts + n);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      parts[slot] = v;
      rec(slot + 1, left - v);
    }
  };
  rec(0, m);
}

struct Split {
  Exponents left{};   // derivative orders applied to the left factor
  Exponents right{};  // derivative orders applied to the right factor
  int a_total = 0;
  int b_total = 0;
  double inv_factorials = 1.0;
};

std::vector<Split> splits_of_order(int n, int m) {
  std::vector<Split> out;
  for_each_split(n, m, [&](const int* a, const int* b) {
    Split s;
    for (int i = 0; i < n; ++i) {
      s.left[i] = a[i];
      s.left[n + i] = b[i];
      s.right[n + i] = a[i];
      s.right[i] = b[i];
      s.a_total += a[i];
      s.b_total += b[i];
      s.inv_factorials /= factorial(a[i]) * factorial(b[i]);
    }
    out.push_back(s);
  });
  return out;
}

Complex ipow(Complex base, int m) {
  Complex r = 1.0;
  for (int j = 0; j < m; ++j) r *= base;
  return r;
}

PhaseFunction make(const PhaseGrid& grid, std::vector<Complex> v, Role role) {
  return PhaseFunctionAccess::make(grid, std::move(v), role);
}

Role product_role(const PhaseFunction& a, const PhaseFunction& b) {
  if (b.role() == Role::wavefunction || a.role() == Role::wavefunction) return Role::wavefunction;
  return Role::observable;
}

// Derivatives of one factor, analytic or spectral.
class DerivativeSource {
 public:
  explicit DerivativeSource(const PhaseFunction& f) : f_(f) {
    if (!f.is_polynomial()) spectrum_.emplace(f.grid(), f.values());
  }

  std::vector<Complex> operator()(const Exponents& orders) const {
    if (f_.is_polynomial()) return sample(f_.grid(), f_.polynomial().derivative(orders));
    return spectrum_->derivative(orders);
  }

 private:
  const PhaseFunction& f_;
  std::optional<spectral::Spectrum> spectrum_;
};

// Truncated series over grid values.
PhaseFunction series_star(const PhaseFunction& a, const PhaseFunction& b, int max_order, double c,
                          StarDiagnostics* diag) {
  const auto& grid = a.grid();
  const int n = grid.dim();
  int top = max_order;
  bool terminates = false;
  if (a.is_polynomial() && a.polynomial().degree() <= top) {
    top = std::max(0, a.polynomial().degree());
    terminates = true;
  }
  if (b.is_polynomial() && b.polynomial().degree() <= top) {
    top = std::max(0, b.polynomial().degree());
    terminates = true;
  }
  DerivativeSource da(a), db(b);
  std::vector<Complex> sum(grid.size(), Complex{});
  std::vector<double> term_norms;
  for (int m = 0; m <= top; ++m) {
    std::vector<Complex> term(grid.size(), Complex{});
    const Complex prefactor = ipow(Complex(0.0, -c), m);
    for (const auto& s : splits_of_order(n, m)) {
      const double sign = (s.b_total % 2 == 0) ? 1.0 : -1.0;
      const Complex w = prefactor * sign * s.inv_factorials;
      const auto left = da(s.left);
      const auto right = db(s.right);
      for (std::size_t i = 0; i < term.size(); ++i) term[i] += w * left[i] * right[i];
    }
    double tn = 0.0;
    for (std::size_t i = 0; i < term.size(); ++i) {
      sum[i] += term[i];
      tn = std::max(tn, std::abs(term[i]));
    }
    term_norms.push_back(tn);
  }
  double scale = 0.0;
  for (const auto& v : sum) scale = std::max(scale, std::abs(v));
  const double tail = term_norms.back();
  bool diverging = false;
  if (!terminates && top >= 2) {
    const double mid = term_norms[(top + 1) / 2];
    diverging = tail > 1e-14 * std::max(scale, 1e-300) && tail >= mid;
  }
  if (diag) {
    diag->terms = top + 1;
    diag->tail_norm = terminates ? 0.0 : tail;
    diag->diverging = diverging;
  }
  if (diverging) {
    std::ostringstream os;
    os << "star(series): term norms stopped decreasing (order " << top << " term " << tail
       << " vs order " << (top + 1) / 2 << " term " << term_norms[(top + 1) / 2]
       << "); use the spectral method or a larger k";
    throw AccuracyError(os.str());
  }
  return make(grid, std::move(sum), product_role(a, b));
}

struct SparseModes {
  std::vector<int> modes;  // axes entries per retained coefficient
  std::vector<Complex> values;
  int max_abs_mode = 0;
};

SparseModes significant_modes(const PhaseGrid& grid, const spectral::Field& coeffs) {
  double peak = 0.0;
  for (const auto& v : coeffs) peak = std::max(peak, std::abs(v));
  SparseModes out;
  const double cut = kSpectralCutoff * peak;
  const int axes = grid.axes();
  for (std::size_t f = 0; f < coeffs.size(); ++f) {
    if (std::abs(coeffs[f]) <= cut || coeffs[f] == Complex{}) continue;
    for (int a = 0; a < axes; ++a) {
      const int m = grid.mode(grid.index(f, a));
      out.modes.push_back(m);
      out.max_abs_mode = std::max(out.max_abs_mode, std::abs(m));
    }
    out.values.push_back(coeffs[f]);
  }
  return out;
}

// (α⋆β)^(ξ) = Σ_{σ+η=ξ} α^(σ) β^(η) exp(ic Σ_i σ_{p_i}η_{x_i} - σ_{x_i}η_{p_i}).
PhaseFunction twisted_star(const PhaseFunction& a, const PhaseFunction& b, double c,
                           StarDiagnostics* diag) {
  const auto& grid = a.grid();
  const int n = grid.dim();
  const int axes = grid.axes();
  const int N = grid.points();
  const auto fa = spectral::forward(grid, a.values());
  const auto fb = spectral::forward(grid, b.values());
  const auto sa = significant_modes(grid, fa);
  const auto sb = significant_modes(grid, fb);
  const double pairs = static_cast<double>(sa.values.size()) * static_cast<double>(sb.values.size());
  if (diag) {
    diag->modes_left = sa.values.size();
    diag->modes_right = sb.values.size();
  }
  if (pairs > kMaxTwistedPairs) {
    std::ostringstream os;
    os << "star(spectral): " << sa.values.size() << " x " << sb.values.size()
       << " significant modes exceed the twisted-convolution budget";
    throw AccuracyError(os.str());
  }
  const long long mrange = 2LL * n * sa.max_abs_mode * sb.max_abs_mode;
  const double dk = grid.wave_unit();
  std::vector<Complex> phase(2 * mrange + 1);
  for (long long m = -mrange; m <= mrange; ++m) {
    phase[m + mrange] = std::polar(1.0, c * dk * dk * static_cast<double>(m));
  }
  const double inv_size = 1.0 / static_cast<double>(grid.size());
  std::vector<Complex> out(grid.size(), Complex{});
  const int half = N / 2;
  std::vector<std::size_t> strides(axes);
  for (int ax = 0; ax < axes; ++ax) strides[ax] = grid.stride(ax);
  for (std::size_t ia = 0; ia < sa.values.size(); ++ia) {
    const int* s = &sa.modes[ia * axes];
    const Complex av = sa.values[ia] * inv_size;
    for (std::size_t ib = 0; ib < sb.values.size(); ++ib) {
      const int* e = &sb.modes[ib * axes];
      std::size_t flat = 0;
      bool inside = true;
      for (int ax = 0; ax < axes; ++ax) {
        const int xi = s[ax] + e[ax];
        if (xi < -half || xi >= half) {
          inside = false;
          break;
        }
        flat += static_cast<std::size_t>(xi < 0 ? xi + N : xi) * strides[ax];
      }
      if (!inside) continue;
      long long m = 0;
      for (int i = 0; i < n; ++i) {
        m += static_cast<long long>(s[i]) * e[n + i] - static_cast<long long>(s[n + i]) * e[i];
      }
      out[flat] += av * sb.values[ib] * phase[m + mrange];
    }
  }
  return make(grid, spectral::backward(grid, out), product_role(a, b));
}

}  // namespace

StarMethod StarMethod::series(int order) {
  if (order < 1) throw ValidationError("StarMethod: series order must be >= 1");
  StarMethod m;
  m.kind = Kind::series;
  m.order = order;
  return m;
}

double star_parameter(const ContractionParam& kp) { return kp.hbar_eff() / 2.0; }

Polynomial star(const Polynomial& a, const Polynomial& b, const ContractionParam& kp, int max_order) {
  if (a.dim() != b.dim()) throw ValidationError("star: polynomial dimension mismatch");
  const int n = a.dim();
  const double c = star_parameter(kp);
  int top = std::max(0, std::min(a.degree(), b.degree()));
  if (max_order >= 0) top = std::min(top, max_order);
  Polynomial sum(n);
  for (int m = 0; m <= top; ++m) {
    const Complex prefactor = ipow(Complex(0.0, -c), m);
    for (const auto& s : splits_of_order(n, m)) {
      const double sign = (s.b_total % 2 == 0) ? 1.0 : -1.0;
      Polynomial left = a.derivative(s.left);
      if (left.is_zero()) continue;
      Polynomial right = b.derivative(s.right);
      if (right.is_zero()) continue;
      sum += (left * right) * (prefactor * sign * s.inv_factorials);
    }
  }
  return sum;
}

PolynomialAction::PolynomialAction(const Polynomial& g, const PhaseGrid& grid, PolySide side, double c)
    : grid_(grid) {
  const int n = grid.dim();
  if (g.dim() != n) throw ValidationError("polynomial_action: dimension mismatch");
  // g ⋆ f = g(p - ic∂_x, x + ic∂_p) f and f ⋆ g = g(p + ic∂_x, x - ic∂_p) f. When
  // g = F(p) + V(x) each part is diagonal once one block of axes is transformed.
  Polynomial fp(n), vx(n);
  bool separable = true;
  for (const auto& [e, coef] : g.terms()) {
    bool has_p = false, has_x = false;
    for (int i = 0; i < n; ++i) {
      has_p = has_p || e[i] != 0;
      has_x = has_x || e[n + i] != 0;
    }
    if (has_p && has_x) separable = false;
    (has_x ? vx : fp).add_term(e, coef);
  }
  if (separable) {
    // left: F(p + c k_x), V(x - c k_p); right: the opposite signs.
    auto shifted = [n, c, side](const Polynomial& part, int coord_first, double sign) {
      return [n, c, side, &part, coord_first, sign](std::span<const double> coords, std::span<const double> waves) {
        double z[6] = {};
        auto eval = [&](double s) {
          for (int i = 0; i < n; ++i) z[coord_first + i] = coords[i] + s * c * waves[i];
          return part(std::span<const double>(z, 2 * n));
        };
        switch (side) {
          case PolySide::left: return eval(sign);
          case PolySide::right: return eval(-sign);
          case PolySide::bracket: return eval(sign) - eval(-sign);
        }
        return Complex{};
      };
    };
    if (!fp.is_zero()) separable_.emplace_back(grid, spectral::AxisBlock::x, shifted(fp, 0, 1.0));
    if (!vx.is_zero()) separable_.emplace_back(grid, spectral::AxisBlock::p, shifted(vx, n, -1.0));
    return;
  }
  // monomial of ∂^{(a,b)} g  ->  multiplier polynomial in the wave numbers
  std::map<Exponents, Polynomial> multipliers;
  const int top = std::max(0, g.degree());
  for (int m = 0; m <= top; ++m) {
    for (const auto& s : splits_of_order(n, m)) {
      const double cm = std::pow(c, m);
      const double wl = cm * ((s.b_total % 2 == 0) ? 1.0 : -1.0);
      const double wr = cm * ((s.a_total % 2 == 0) ? 1.0 : -1.0);
      double w = 0.0;
      switch (side) {
        case PolySide::left: w = wl; break;
        case PolySide::right: w = wr; break;
        case PolySide::bracket: w = wl - wr; break;
      }
      if (w == 0.0) continue;
      w *= s.inv_factorials;
      const Polynomial dg = g.derivative(s.left);
      if (dg.is_zero()) continue;
      // k_{x_i}^{a_i} k_{p_i}^{b_i}: exactly the orders applied to the field.
      for (const auto& [mu, coef] : dg.terms()) {
        auto it = multipliers.try_emplace(mu, Polynomial(n)).first;
        it->second.add_term(s.right, coef * w);
      }
    }
  }
  for (const auto& [mu, mult] : multipliers) {
    if (mult.is_zero()) continue;
    Group group;
    if (mu != Exponents{}) {
      const auto z = sample(grid, Polynomial::monomial(n, mu));
      group.position.resize(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) group.position[i] = z[i].real();
    }
    if (mult.is_constant()) {
      group.constant = mult.coefficient(Exponents{});
    } else {
      group.multiplier = spectral::wave_table(grid, mult);
    }
    groups_.push_back(std::move(group));
  }
}

std::vector<Complex> PolynomialAction::apply(std::span<const Complex> f) const {
  std::vector<Complex> out;
  apply_into(f, out);
  return out;
}

void PolynomialAction::apply_into(std::span<const Complex> f, std::vector<Complex>& out) const {
  if (f.size() != grid_.size()) throw ValidationError("polynomial_action: field size does not match the grid");
  out.assign(grid_.size(), Complex{});
  for (const auto& m : separable_) m.apply_add(f, out);
  bool transformed = false;
  for (const auto& group : groups_) {
    const Complex* piece = piece_.data();
    if (group.multiplier.empty()) {
      piece_.resize(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) piece_[i] = group.constant * f[i];
      piece = piece_.data();
    } else {
      if (!transformed) {
        spectral::forward_into(grid_, f, coeffs_);
        transformed = true;
      }
      work_.resize(coeffs_.size());
      for (std::size_t i = 0; i < coeffs_.size(); ++i) work_[i] = coeffs_[i] * group.multiplier[i];
      spectral::backward_into(grid_, work_, piece_);
      piece = piece_.data();
    }
    if (group.position.empty()) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += piece[i];
    } else {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += group.position[i] * piece[i];
    }
  }
}

std::vector<Complex> polynomial_action(const Polynomial& g, const PhaseGrid& grid,
                                       std::span<const Complex> f, PolySide side, double c) {
  return PolynomialAction(g, grid, side, c).apply(f);
}

PhaseFunction star(const PhaseFunction& a, const PhaseFunction& b, const StarMethod& method,
                   const ContractionParam& kp, StarDiagnostics* diagnostics) {
  require_same_grid(a.grid(), b.grid(), "star");
  const double c = star_parameter(kp);
  const auto& grid = a.grid();
  if (a.is_polynomial() && b.is_polynomial()) {
    const int limit = method.kind == StarMethod::Kind::series ? method.order : -1;
    if (diagnostics) {
      diagnostics->terms = std::min(std::max(0, std::min(a.polynomial().degree(), b.polynomial().degree())),
                                    limit < 0 ? 1 << 20 : limit) + 1;
    }
    return PhaseFunction::from_polynomial(grid, star(a.polynomial(), b.polynomial(), kp, limit),
                                          Role::observable);
  }
  if (method.kind == StarMethod::Kind::series) return series_star(a, b, method.order, c, diagnostics);
  if (a.is_polynomial()) {
    return make(grid, polynomial_action(a.polynomial(), grid, b.values(), PolySide::left, c),
                product_role(a, b));
  }
  if (b.is_polynomial()) {
    return make(grid, polynomial_action(b.polynomial(), grid, a.values(), PolySide::right, c),
                product_role(a, b));
  }
  return twisted_star(a, b, c, diagnostics);
}

PhaseFunction moyal_bracket(const PhaseFunction& a, const PhaseFunction& b, const StarMethod& method,
                            const ContractionParam& kp) {
  require_same_grid(a.grid(), b.grid(), "moyal_bracket");
  if (method.kind == StarMethod::Kind::spectral && (a.is_polynomial() != b.is_polynomial())) {
    const double c = star_parameter(kp);
    if (a.is_polynomial()) {
      return make(a.grid(), polynomial_action(a.polynomial(), a.grid(), b.values(), PolySide::bracket, c),
                  Role::observable);
    }
    auto v = polynomial_action(b.polynomial(), a.grid(), a.values(), PolySide::bracket, c);
    for (auto& x : v) x = -x;
    return make(a.grid(), std::move(v), Role::observable);
  }
  return (star(a, b, method, kp) - star(b, a, method, kp)).with_role(Role::observable);
}

PhaseFunction scaled_bracket(const PhaseFunction& a, const PhaseFunction& b, const StarMethod& method,
                             const ContractionParam& kp) {
  return moyal_bracket(a, b, method, kp) * Complex(0.0, -kp.k2() / 2.0);
}

PhaseFunction poisson_bracket(const PhaseFunction& a, const PhaseFunction& b) {
  require_same_grid(a.grid(), b.grid(), "poisson_bracket");
  const int n = a.grid().dim();
  std::optional<PhaseFunction> sum;
  for (int i = 0; i < n; ++i) {
    auto term = pointwise(partial_x(a, i), partial_p(b, i)) - pointwise(partial_p(a, i), partial_x(b, i));
    if (sum) {
      *sum += term;
    } else {
      sum.emplace(std::move(term));
    }
  }
  return sum->with_role(Role::observable);
}

PhaseFunction wigner(const PhaseFunction& phi, const StarMethod& method) {
  const double nrm = std::abs(inner(phi, phi));
  if (std::abs(nrm - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "wigner: state is not normalized (inner = " << nrm << ")";
    throw ValidationError(os.str());
  }
  const int n = phi.grid().dim();
  auto rho = star(phi, phi.conj(), method) * std::pow(4.0, n);
  const double peak = rho.sup_norm();
  if (rho.max_imag() > kDensityImagTolerance * peak) {
    std::ostringstream os;
    os << "wigner: density is not real (max |Im| / max = " << rho.max_imag() / peak << ")";
    throw AccuracyError(os.str());
  }
  if (rho.boundary_max() > 1e-6 * peak) {
    std::ostringstream os;
    os << "wigner: density does not fit the box (edge/peak = " << rho.boundary_max() / peak
       << "); the density is centred at twice the label, so enlarge L";
    throw AccuracyError(os.str());
  }
  return rho.with_role(Role::density);
}

Complex trace_pair(const PhaseFunction& alpha, const PhaseFunction& rho) {
  require_same_grid(alpha.grid(), rho.grid(), "trace_pair");
  if (rho.role() != Role::density) throw ValidationError("trace_pair: second argument must be a density");
  const auto& g = alpha.grid();
  Complex s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha[i] * rho[i];
  return s * g.cell_volume() / (std::pow(4.0, g.dim()) * std::pow(kPi, g.dim()));
}

}  // namespace wwgm
