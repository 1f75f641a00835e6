#pragma once

#include <iosfwd>
#include <vector>

#include "wwgm/heisenberg_group.hpp"
#include "wwgm/phase_function.hpp"

namespace wwgm {

/// Distance (in Gaussian widths) a coherent state must keep from the box
/// edge; e^{-6.8²/2} < 1e-10 keeps the wavefunction boundary invariant.
inline constexpr double kCoherentMargin = 6.8;

/// Label (p_a, x_a) of a canonical coherent state; half the expectation values.
struct CoherentLabel {
  std::vector<double> p;
  std::vector<double> x;

  int dim() const { return static_cast<int>(p.size()); }
};

/// Throws ValidationError unless every component sits margin/k inside the box.
void check_label_margin(const CoherentLabel& a, const PhaseGrid& grid, double k = 1.0);

/// φ_a(p,x) = exp(i(p_a·x - x_a·p)) exp(-|z - a|²/2).
PhaseFunction coherent_state(const CoherentLabel& a, const PhaseGrid& grid);

/// (1/πⁿ) Σ conj(φ) ψ h^{2n}.
Complex inner(const PhaseFunction& phi, const PhaseFunction& psi);

/// sqrt(inner(φ, φ)).
double norm(const PhaseFunction& phi);

/// Mixed partial derivative; exact on polynomial fields, spectral otherwise.
PhaseFunction partial(const PhaseFunction& f, const Exponents& orders);
PhaseFunction partial_p(const PhaseFunction& f, int i = 0);
PhaseFunction partial_x(const PhaseFunction& f, int i = 0);

/// X^L_i = x_i + i∂_{p_i}.
PhaseFunction apply_XL(const PhaseFunction& phi, int i = 0);
/// P^L_i = p_i - i∂_{x_i}.
PhaseFunction apply_PL(const PhaseFunction& phi, int i = 0);

/// (U^L(p,x) φ)(p',x') = φ(p'-p, x'-x) exp(i(p·x' - x·p')), evaluated with
/// a Fourier phase ramp. Throws ValidationError if a wavefunction's support
/// spills past the box margin.
PhaseFunction translate(const PhaseFunction& phi, const std::vector<double>& p,
                        const std::vector<double>& x);

/// Location of the largest |f| on the grid.
struct Peak {
  std::size_t index = 0;
  /// Grid point of the argmax, (p..., x...).
  std::vector<double> grid_point;
  /// Per-axis log-parabolic interpolation through the argmax and its two
  /// neighbours; exact for Gaussians.
  std::vector<double> refined;
};
Peak locate_peak(const PhaseFunction& f);

/// Little-endian header (u32 n, u32 N, f64 L) followed by N^{2n} complex
/// doubles (re, im), p axes outer, x axes inner.
void write_binary(std::ostream& os, const PhaseFunction& f);
PhaseFunction read_binary(std::istream& is, Role role = Role::observable);

/// One row per grid point: p..., x..., re, im.
void write_csv(std::ostream& os, const PhaseFunction& f);

}  // namespace wwgm
