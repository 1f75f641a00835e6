#include "wwgm/polynomial.hpp"

#include <cmath>
#include <sstream>

#include "wwgm/errors.hpp"

namespace wwgm {

namespace {

double falling(int e, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= e - j;
  return r;
}

}  // namespace

Polynomial::Polynomial(int n) : n_(n) {
  if (n < 1 || n > 3) throw ValidationError("Polynomial: dimension must be 1..3");
}

Polynomial Polynomial::constant(int n, Complex value) {
  Polynomial out(n);
  out.add_term(Exponents{}, value);
  return out;
}

Polynomial Polynomial::p(int n, int i) {
  Exponents e{};
  e.at(i) = 1;
  return monomial(n, e);
}

Polynomial Polynomial::x(int n, int i) {
  Exponents e{};
  e.at(n + i) = 1;
  return monomial(n, e);
}

Polynomial Polynomial::monomial(int n, const Exponents& e, Complex coef) {
  Polynomial out(n);
  for (int v = 2 * n; v < 6; ++v) {
    if (e[v] != 0) throw ValidationError("Polynomial: exponent on a variable beyond 2n");
  }
  out.add_term(e, coef);
  return out;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : e) s += v;
    d = std::max(d, s);
  }
  return d;
}

int Polynomial::degree_in(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

bool Polynomial::is_real() const {
  for (const auto& [e, c] : terms_) {
    if (c.imag() != 0.0) return false;
  }
  return true;
}

Complex Polynomial::operator()(std::span<const double> z) const {
  Complex sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = 1.0;
    for (int v = 0; v < vars(); ++v) {
      for (int k = 0; k < e[v]; ++k) m *= z[v];
    }
    sum += c * m;
  }
  return sum;
}

Polynomial Polynomial::derivative(int var, int order) const {
  Exponents o{};
  o.at(var) = order;
  return derivative(o);
}

Polynomial Polynomial::derivative(const Exponents& orders) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    Exponents r = e;
    double f = 1.0;
    bool vanish = false;
    for (int v = 0; v < 6; ++v) {
      if (orders[v] > e[v]) {
        vanish = true;
        break;
      }
      f *= falling(e[v], orders[v]);
      r[v] -= orders[v];
    }
    if (!vanish) out.add_term(r, c * f);
  }
  return out;
}

Polynomial Polynomial::conj() const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) out.add_term(e, std::conj(c));
  return out;
}

void Polynomial::add_term(const Exponents& e, Complex coef) {
  if (coef == Complex{}) return;
  auto [it, inserted] = terms_.emplace(e, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

Complex Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Complex{} : it->second;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.n_ != n_) throw ValidationError("Polynomial: dimension mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.n_ != n_) throw ValidationError("Polynomial: dimension mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(Complex s) {
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.n_ != b.n_) throw ValidationError("Polynomial: dimension mismatch");
  Polynomial out(a.n_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e{};
      for (int v = 0; v < 6; ++v) e[v] = ea[v] + eb[v];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

double Polynomial::magnitude_bound(std::span<const double> bound) const {
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = std::abs(c);
    for (int v = 0; v < vars(); ++v) m *= std::pow(bound[v], e[v]);
    total += m;
  }
  return total;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real();
    if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
    os << ")";
    for (int v = 0; v < vars(); ++v) {
      if (e[v] == 0) continue;
      os << "*" << (v < n_ ? "p" : "x");
      if (n_ > 1) os << (v % n_) + 1;
      if (e[v] > 1) os << "^" << e[v];
    }
  }
  return os.str();
}

}  // namespace wwgm
