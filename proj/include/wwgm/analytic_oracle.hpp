#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <span>
#include <string>

#include "wwgm/constants.hpp"
#include "wwgm/phase_space.hpp"
#include "wwgm/polynomial.hpp"

/// Closed-form reference values, computed without the grid, spectral or star code.
namespace wwgm::oracle {

template <class T>
struct OracleResult {
  std::string name;
  /// Which formula produced the value.
  std::string derivation;
  T value;
};

using Rational = boost::multiprecision::cpp_rational;

/// Exact complex rational a + ib.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  Complex to_complex() const;
  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b);
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b);
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Polynomial with exact coefficients; zero terms are never stored.
class ExactPolynomial {
 public:
  explicit ExactPolynomial(int n = 1) : n_(n) {}
  int dim() const { return n_; }
  const std::map<Exponents, GaussianRational>& terms() const { return terms_; }
  void add(const Exponents& e, const GaussianRational& c);
  GaussianRational coefficient(const Exponents& e) const;
  Complex operator()(std::span<const double> z) const;
  std::string to_string() const;

 private:
  int n_;
  std::map<Exponents, GaussianRational> terms_;
};

/// Largest monomial degree accepted by polynomial_star.
inline constexpr int kMaxOracleDegree = 6;

/// Exact α ⋆_k β for unit monomials α = z^a, β = z^b (terminating series,
/// deformation 1/k²).
OracleResult<ExactPolynomial> polynomial_star(int n, const Exponents& a, const Exponents& b, int k = 1);

/// ⟨φ_b|φ_a⟩ = inner(φ_b, φ_a) = exp[i(x_b·p_a − p_b·x_a)] exp[−|a − b|²/2].
OracleResult<Complex> coherent_overlap(const CoherentLabel& a, const CoherentLabel& b);

/// exp[ik²(x_b·p_a − p_b·x_a)] exp[−(k²/2)|a − b|²] for contracted labels.
OracleResult<Complex> contracted_overlap(const CoherentLabel& a, const CoherentLabel& b, double k);

using ClosedForm = std::function<Complex(std::span<const double>)>;

/// φ_a(p, x) = exp(i(p_a·x − x_a·p)) exp(−|z − a|²/2).
OracleResult<ClosedForm> coherent_wavefunction(const CoherentLabel& a);

/// 2ⁿ exp(−|z − 2a|²/2): the density of φ_a, centred at the expectation values 2a.
OracleResult<ClosedForm> coherent_wigner(const CoherentLabel& a);

enum class QuadraticGenerator { harmonic, free };

/// Label flow under G = Σ p²+x² (ẋ = 2p, ṗ = −2x) or G = Σ p²/(2m) (ẋ = p/m).
OracleResult<CoherentLabel> quadratic_flow(QuadraticGenerator g, const CoherentLabel& start, double t,
                                           double m = 1.0);

/// ρ(t)(p, x) = ρ(0)(p, x − p t/m): characteristics of the free classical flow.
OracleResult<ClosedForm> free_transport(ClosedForm rho0, int n, double m, double t);

}  // namespace wwgm::oracle
