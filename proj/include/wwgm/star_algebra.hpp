#pragma once

#include <cstddef>

#include "wwgm/heisenberg_group.hpp"
#include "wwgm/phase_function.hpp"
#include "wwgm/polynomial.hpp"
#include "wwgm/spectral.hpp"

namespace wwgm {

/// How the star exponential is evaluated.
struct StarMethod {
  enum class Kind { series, spectral };
  Kind kind = Kind::spectral;
  /// Highest series order kept (series only).
  int order = 8;

  static StarMethod series(int order = 8);
  static StarMethod spectral() { return {}; }
};

/// What a star evaluation can say about its own accuracy.
struct StarDiagnostics {
  /// Series: orders actually summed. Spectral: 0.
  int terms = 0;
  /// Series: sup norm of the last kept term (0 when the series terminated).
  double tail_norm = 0.0;
  bool diverging = false;
  /// Twisted convolution: retained Fourier modes of each factor.
  std::size_t modes_left = 0;
  std::size_t modes_right = 0;
};

/// Relative magnitude below which Fourier modes are dropped before the
/// twisted convolution.
inline constexpr double kSpectralCutoff = 1e-14;

/// Deformation parameter c = ħ_eff/2 = 1/k² in α exp[-ic(←∂_p→∂_x - ←∂_x→∂_p)] β.
double star_parameter(const ContractionParam& kp);

/// Exact star product of two polynomials; series truncated after max_order
/// when max_order >= 0.
Polynomial star(const Polynomial& a, const Polynomial& b, const ContractionParam& kp = ContractionParam{},
                int max_order = -1);

/// α ⋆_k β on the grid.
///
/// Spectral: exact whenever a factor is polynomial (the series terminates),
/// twisted convolution of the Fourier modes otherwise. Series: sums orders
/// 0..order and throws AccuracyError when the term norms stop decreasing.
PhaseFunction star(const PhaseFunction& a, const PhaseFunction& b,
                   const StarMethod& method = StarMethod::spectral(),
                   const ContractionParam& kp = ContractionParam{},
                   StarDiagnostics* diagnostics = nullptr);

/// α ⋆ β - β ⋆ α.
PhaseFunction moyal_bracket(const PhaseFunction& a, const PhaseFunction& b,
                            const StarMethod& method = StarMethod::spectral(),
                            const ContractionParam& kp = ContractionParam{});

/// (k²/2i)·{α, β}_{⋆k}: equals (1/2i){α,β}⋆ at k = 1 and tends to the Poisson bracket.
PhaseFunction scaled_bracket(const PhaseFunction& a, const PhaseFunction& b,
                             const StarMethod& method = StarMethod::spectral(),
                             const ContractionParam& kp = ContractionParam{});

/// Σ_i ∂α/∂x_i ∂β/∂p_i - ∂α/∂p_i ∂β/∂x_i.
PhaseFunction poisson_bracket(const PhaseFunction& a, const PhaseFunction& b);

/// ρ_φ = 2^{2n} φ ⋆ conj(φ); the order makes Tr[α⋆ρ] = (1/πⁿ)∫ conj(φ)(α⋆φ).
PhaseFunction wigner(const PhaseFunction& phi, const StarMethod& method = StarMethod::spectral());

/// Tr[α ⋆ ρ] = (1/2^{2n})(1/πⁿ) Σ α ρ h^{2n}.
Complex trace_pair(const PhaseFunction& alpha, const PhaseFunction& rho);

/// Action of a polynomial on a decayed field through the terminating series,
/// with derivatives of the field taken as Fourier multipliers.
enum class PolySide { left, right, bracket };

/// Precomputed g ⋆ f (left), f ⋆ g (right) or g ⋆ f - f ⋆ g (bracket) for a
/// fixed polynomial g, reused across many fields f on one grid.
class PolynomialAction {
 public:
  PolynomialAction(const Polynomial& g, const PhaseGrid& grid, PolySide side, double c);

  std::vector<Complex> apply(std::span<const Complex> f) const;
  /// Writes the action into out, reusing internal scratch space; an
  /// instance must not be shared between threads.
  void apply_into(std::span<const Complex> f, std::vector<Complex>& out) const;
  const PhaseGrid& grid() const { return grid_; }

 private:
  struct Group {
    std::vector<double> position;     // z^μ on the grid; empty for μ = 0
    std::vector<Complex> multiplier;  // wave-number multiplier; empty if constant
    Complex constant = 0.0;
  };
  PhaseGrid grid_;
  std::vector<Group> groups_;
  // G = F(p) + V(x): F(p ± c k_x) and V(x ∓ c k_p) in mixed representations.
  std::vector<spectral::MixedMultiplier> separable_;
  mutable std::vector<Complex> coeffs_;
  mutable std::vector<Complex> work_;
  mutable std::vector<Complex> piece_;
};

std::vector<Complex> polynomial_action(const Polynomial& g, const PhaseGrid& grid,
                                       std::span<const Complex> f, PolySide side, double c);

}  // namespace wwgm
