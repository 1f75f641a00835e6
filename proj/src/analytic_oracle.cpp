#include "wwgm/analytic_oracle.hpp"

#include <cmath>
#include <sstream>

#include "wwgm/errors.hpp"

namespace wwgm::oracle {

namespace {

Rational falling_factorial(int a, int m) {
  Rational r = 1;
  for (int j = 0; j < m; ++j) r *= (a - j);
  return r;
}

Rational factorial(int m) { return falling_factorial(m, m); }

void check_labels(const CoherentLabel& a, const CoherentLabel& b) {
  if (a.p.size() != a.x.size() || b.p.size() != b.x.size() || a.dim() != b.dim()) {
    throw ValidationError("oracle: labels must have matching p and x lengths");
  }
}

// Σ_i s_i over the dof, for the overlap phase and exponent.
struct OverlapTerms {
  double phase = 0.0;
  double distance2 = 0.0;
};

OverlapTerms overlap_terms(const CoherentLabel& a, const CoherentLabel& b) {
  check_labels(a, b);
  OverlapTerms t;
  for (int i = 0; i < a.dim(); ++i) {
    t.phase += b.x[i] * a.p[i] - b.p[i] * a.x[i];
    t.distance2 += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]) + (a.p[i] - b.p[i]) * (a.p[i] - b.p[i]);
  }
  return t;
}

}  // namespace

Complex GaussianRational::to_complex() const {
  return {static_cast<double>(re), static_cast<double>(im)};
}

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
  return {a.re + b.re, a.im + b.im};
}

GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

void ExactPolynomial::add(const Exponents& e, const GaussianRational& c) {
  auto& slot = terms_[e];
  slot = slot + c;
  if (slot.is_zero()) terms_.erase(e);
}

GaussianRational ExactPolynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? GaussianRational{} : it->second;
}

Complex ExactPolynomial::operator()(std::span<const double> z) const {
  Complex s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = 1.0;
    for (int v = 0; v < 2 * n_; ++v) m *= std::pow(z[v], e[v]);
    s += c.to_complex() * m;
  }
  return s;
}

std::string ExactPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.re << (c.im < 0 ? "-" : "+") << abs(c.im) << "i)";
    for (int v = 0; v < 2 * n_; ++v) {
      if (e[v] == 0) continue;
      const char* name = v < n_ ? "p" : "x";
      os << "*" << name;
      if (n_ > 1) os << (v % n_ + 1);
      if (e[v] > 1) os << "^" << e[v];
    }
  }
  return os.str();
}

OracleResult<ExactPolynomial> polynomial_star(int n, const Exponents& a, const Exponents& b, int k) {
  if (n < 1 || n > 3) throw ValidationError("oracle polynomial_star: n must be 1, 2 or 3");
  if (k < 1) throw ValidationError("oracle polynomial_star: k must be a positive integer");
  int deg_a = 0, deg_b = 0;
  for (int v = 0; v < 2 * n; ++v) {
    if (a[v] < 0 || b[v] < 0) throw ValidationError("oracle polynomial_star: negative exponent");
    deg_a += a[v];
    deg_b += b[v];
  }
  if (deg_a > kMaxOracleDegree || deg_b > kMaxOracleDegree) {
    throw ValidationError("oracle polynomial_star: monomial degree above 6");
  }
  const Rational c = Rational(1) / (k * k);
  // exp(-ic Σ_i (←∂_{p_i}→∂_{x_i} − ←∂_{x_i}→∂_{p_i})) factorises over the 2n
  // commuting directions; expand each exponential separately:
  // exp(-ic ←∂_{p_i}→∂_{x_i}) = Σ_j (-ic)^j / j! ←∂_{p_i}^j →∂_{x_i}^j,
  // exp(+ic ←∂_{x_i}→∂_{p_i}) = Σ_j (ic)^j / j! ←∂_{x_i}^j →∂_{p_i}^j.
  ExactPolynomial out(n);
  std::vector<int> orders(2 * n, 0);  // orders[i]: p-direction, orders[n+i]: x-direction
  std::function<void(int)> rec = [&](int slot) {
    if (slot == 2 * n) {
      GaussianRational coef(1);
      Exponents e{};
      for (int i = 0; i < n; ++i) {
        const int j = orders[i];      // ←∂_{p_i}^j →∂_{x_i}^j
        const int l = orders[n + i];  // ←∂_{x_i}^l →∂_{p_i}^l
        Rational mag = Rational(1) / (factorial(j) * factorial(l));
        for (int s = 0; s < j + l; ++s) mag *= c;
        // (-i)^j (i)^l
        GaussianRational unit(1);
        for (int s = 0; s < j; ++s) unit = unit * GaussianRational(0, -1);
        for (int s = 0; s < l; ++s) unit = unit * GaussianRational(0, 1);
        coef = coef * unit * GaussianRational(mag);
        // left factor loses j powers of p_i and l of x_i; right loses l of p_i and j of x_i
        coef = coef * GaussianRational(falling_factorial(a[i], j) * falling_factorial(a[n + i], l) *
                                       falling_factorial(b[i], l) * falling_factorial(b[n + i], j));
        e[i] = a[i] - j + b[i] - l;
        e[n + i] = a[n + i] - l + b[n + i] - j;
      }
      if (!coef.is_zero()) out.add(e, coef);
      return;
    }
    const int i = slot % n;
    const bool p_dir = slot < n;
    // bound by the available powers so every derivative is nonzero
    const int cap = p_dir ? std::min(a[i], b[n + i]) : std::min(a[n + i], b[i]);
    for (int j = 0; j <= cap; ++j) {
      orders[slot] = j;
      rec(slot + 1);
    }
  };
  rec(0);
  return {"polynomial_star", "terminating Moyal series, exact rational coefficients", out};
}

OracleResult<Complex> coherent_overlap(const CoherentLabel& a, const CoherentLabel& b) {
  const auto t = overlap_terms(a, b);
  return {"coherent_overlap", "Gaussian integral of conj(phi_b) phi_a with the 1/pi^n measure",
          std::polar(std::exp(-0.5 * t.distance2), t.phase)};
}

OracleResult<Complex> contracted_overlap(const CoherentLabel& a, const CoherentLabel& b, double k) {
  if (!(k > 0.0 && std::isfinite(k))) throw ValidationError("oracle contracted_overlap: k must be > 0");
  const auto t = overlap_terms(a, b);
  const double k2 = k * k;
  return {"contracted_overlap", "coherent overlap with labels scaled by k",
          std::polar(std::exp(-0.5 * k2 * t.distance2), k2 * t.phase)};
}

OracleResult<ClosedForm> coherent_wavefunction(const CoherentLabel& a) {
  check_labels(a, a);
  ClosedForm f = [a](std::span<const double> z) {
    const int n = a.dim();
    double phase = 0.0, r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      phase += a.p[i] * z[n + i] - a.x[i] * z[i];
      r2 += (z[i] - a.p[i]) * (z[i] - a.p[i]) + (z[n + i] - a.x[i]) * (z[n + i] - a.x[i]);
    }
    return std::polar(std::exp(-0.5 * r2), phase);
  };
  return {"coherent_wavefunction", "displaced Gaussian with label phase", f};
}

OracleResult<ClosedForm> coherent_wigner(const CoherentLabel& a) {
  check_labels(a, a);
  ClosedForm f = [a](std::span<const double> z) {
    const int n = a.dim();
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      r2 += (z[i] - 2 * a.p[i]) * (z[i] - 2 * a.p[i]) + (z[n + i] - 2 * a.x[i]) * (z[n + i] - 2 * a.x[i]);
    }
    return Complex(std::pow(2.0, n) * std::exp(-0.5 * r2), 0.0);
  };
  return {"coherent_wigner", "Gaussian star product phi_a * conj(phi_a), scaled by 4^n", f};
}

OracleResult<CoherentLabel> quadratic_flow(QuadraticGenerator g, const CoherentLabel& start, double t,
                                           double m) {
  check_labels(start, start);
  CoherentLabel out = start;
  switch (g) {
    case QuadraticGenerator::harmonic: {
      const double c = std::cos(2.0 * t), s = std::sin(2.0 * t);
      for (int i = 0; i < start.dim(); ++i) {
        out.x[i] = c * start.x[i] + s * start.p[i];
        out.p[i] = -s * start.x[i] + c * start.p[i];
      }
      return {"quadratic_flow", "x' = 2p, p' = -2x", out};
    }
    case QuadraticGenerator::free:
      if (!(m > 0.0)) throw ValidationError("oracle quadratic_flow: mass must be > 0");
      for (int i = 0; i < start.dim(); ++i) out.x[i] = start.x[i] + start.p[i] * t / m;
      return {"quadratic_flow", "x' = p/m, p' = 0", out};
  }
  throw ValidationError("oracle quadratic_flow: unsupported generator");
}

OracleResult<ClosedForm> free_transport(ClosedForm rho0, int n, double m, double t) {
  if (!(m > 0.0)) throw ValidationError("oracle free_transport: mass must be > 0");
  ClosedForm f = [rho0 = std::move(rho0), n, m, t](std::span<const double> z) {
    double y[6];
    for (int i = 0; i < n; ++i) {
      y[i] = z[i];
      y[n + i] = z[n + i] - z[i] * t / m;
    }
    return rho0(std::span<const double>(y, 2 * n));
  };
  return {"free_transport", "characteristics x(t) = x0 + p t/m", f};
}

}  // namespace wwgm::oracle
