#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wwgm/constants.hpp"
#include "wwgm/grid.hpp"
#include "wwgm/polynomial.hpp"

namespace wwgm::spectral {

using Field = std::vector<Complex>;

/// Unnormalized forward DFT over all 2n axes.
Field forward(const PhaseGrid& grid, std::span<const Complex> values);
/// Inverse DFT including the 1/size factor, so backward(forward(f)) == f.
Field backward(const PhaseGrid& grid, std::span<const Complex> coeffs);

/// Same transforms writing into a caller-owned buffer (resized as needed).
void forward_into(const PhaseGrid& grid, std::span<const Complex> values, Field& out);
void backward_into(const PhaseGrid& grid, std::span<const Complex> coeffs, Field& out);

/// One half of the phase-space axes: all p axes or all x axes.
enum class AxisBlock { p, x };

/// DFT along one block of axes only (unnormalized forward; backward includes 1/N^n).
void block_forward_into(const PhaseGrid& grid, AxisBlock block, std::span<const Complex> values, Field& out);
void block_backward_into(const PhaseGrid& grid, AxisBlock block, std::span<const Complex> coeffs, Field& out);

/// Multiplier that is diagonal in a mixed representation: Fourier along the
/// `transformed` block, real space along the other one. For the x block this
/// applies M(p, k_x); for the p block, M(x, k_p). On a Nyquist mode the
/// symbol is averaged over ±k so real fields stay real.
class MixedMultiplier {
 public:
  using Symbol = std::function<Complex(std::span<const double> coords, std::span<const double> waves)>;
  MixedMultiplier(const PhaseGrid& grid, AxisBlock transformed, const Symbol& symbol);

  /// out += M f.
  void apply_add(std::span<const Complex> f, Field& out) const;

 private:
  PhaseGrid grid_;
  AxisBlock block_;
  Field table_;
  mutable Field work_;
  mutable Field back_;
};

/// Angular wave number of index j along any axis.
inline double wavenumber(const PhaseGrid& grid, int j) { return grid.mode(j) * grid.wave_unit(); }

/// Multiplier polynomial in the wave numbers evaluated on every mode
/// (odd powers vanish on the Nyquist mode).
Field wave_table(const PhaseGrid& grid, const Polynomial& multiplier);

/// Fourier coefficients of one field, reused for several multipliers.
class Spectrum {
 public:
  Spectrum(const PhaseGrid& grid, std::span<const Complex> values);

  const PhaseGrid& grid() const { return grid_; }
  const Field& coefficients() const { return coeffs_; }

  /// Mixed partial derivative with per-axis orders.
  Field derivative(const Exponents& orders) const;
  /// backward(prod_a (k_a)^{powers_a} * coeffs). Odd powers drop the Nyquist mode.
  Field wave_monomial(const Exponents& powers, Complex scale = 1.0) const;
  /// Sum of scaled wave monomials under a single inverse transform.
  Field wave_polynomial(const Polynomial& multiplier) const;

 private:
  PhaseGrid grid_;
  Field coeffs_;
};

/// Partial derivative ∂^orders of a boundary-decayed field.
Field derivative(const PhaseGrid& grid, std::span<const Complex> values, const Exponents& orders);

/// Shift f(z) -> f(z - s) exactly for band-limited f (Fourier phase ramp).
Field shift(const PhaseGrid& grid, std::span<const Complex> values, std::span<const double> s);

/// Zero every mode with |k_a| > fraction * nyquist on some axis.
void band_filter(const PhaseGrid& grid, Field& values, double fraction);

/// band_filter with the mode mask and scratch space kept between calls.
class BandFilter {
 public:
  BandFilter(const PhaseGrid& grid, double fraction);
  void apply(Field& values);

 private:
  PhaseGrid grid_;
  std::vector<char> keep_;
  Field scratch_;
};

/// Largest angular wave number kept by band_filter.
double filtered_band(const PhaseGrid& grid, double fraction);

}  // namespace wwgm::spectral
