#pragma once

#include <array>
#include <map>
#include <span>
#include <string>

#include "wwgm/constants.hpp"

namespace wwgm {

/// Exponents of one monomial in (p_1..p_n, x_1..x_n); unused slots stay zero.
using Exponents = std::array<int, 6>;

/// Complex polynomial in the phase-space coordinates of dimension n.
///
/// Used for observables that are not boundary-decayed (x, p, p²+x², ...):
/// their derivatives are taken exactly instead of spectrally.
class Polynomial {
 public:
  explicit Polynomial(int n = 1);

  static Polynomial constant(int n, Complex value);
  static Polynomial p(int n, int i = 0);
  static Polynomial x(int n, int i = 0);
  static Polynomial monomial(int n, const Exponents& e, Complex coef = 1.0);

  int dim() const { return n_; }
  int vars() const { return 2 * n_; }
  const std::map<Exponents, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  /// Largest power of a single variable.
  int degree_in(int var) const;
  bool is_real() const;
  bool is_constant() const { return degree() <= 0; }

  Complex operator()(std::span<const double> z) const;

  Polynomial derivative(int var, int order = 1) const;
  /// Mixed derivative with per-variable orders.
  Polynomial derivative(const Exponents& orders) const;
  Polynomial conj() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(Complex s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  void add_term(const Exponents& e, Complex coef);
  Complex coefficient(const Exponents& e) const;

  /// Sum of |coef| * prod |z_i|^{e_i} with |z_i| <= bound[i]; bounds |P| on the box.
  double magnitude_bound(std::span<const double> bound) const;

  std::string to_string() const;

 private:
  int n_;
  std::map<Exponents, Complex> terms_;
};

}  // namespace wwgm
