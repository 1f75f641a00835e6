#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wwgm/constants.hpp"
#include "wwgm/grid.hpp"
#include "wwgm/polynomial.hpp"

namespace wwgm {

enum class Role { wavefunction, observable, density };

std::string_view to_string(Role role);

/// Wavefunctions must have decayed to this fraction of their peak on the box edge.
inline constexpr double kBoundaryTolerance = 1e-10;
/// Densities built by wigner() must be real to this fraction of their peak.
inline constexpr double kDensityImagTolerance = 1e-8;

/// Complex field sampled on a PhaseGrid.
///
/// A field may carry an exact polynomial form. Polynomial fields are not
/// boundary-decayed, so every spectral code path treats them analytically.
class PhaseFunction {
 public:
  /// Samples values on grid; throws ValidationError if a wavefunction leaks
  /// through the box edge.
  PhaseFunction(PhaseGrid grid, std::vector<Complex> values, Role role = Role::observable);

  static PhaseFunction from_polynomial(const PhaseGrid& grid, Polynomial poly,
                                       Role role = Role::observable);
  static PhaseFunction constant(const PhaseGrid& grid, Complex value);
  static PhaseFunction zero(const PhaseGrid& grid) { return constant(grid, 0.0); }

  const PhaseGrid& grid() const { return grid_; }
  Role role() const { return role_; }
  std::span<const Complex> values() const { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  bool is_polynomial() const { return poly_.has_value(); }
  const Polynomial& polynomial() const { return *poly_; }

  PhaseFunction with_role(Role role) const;
  PhaseFunction conj() const;

  /// max |f| over the grid.
  double sup_norm() const;
  /// max |f| over points on the box boundary.
  double boundary_max() const;
  /// max |Im f|.
  double max_imag() const;

  PhaseFunction& operator+=(const PhaseFunction& o);
  PhaseFunction& operator-=(const PhaseFunction& o);
  PhaseFunction& operator*=(Complex s);
  friend PhaseFunction operator+(PhaseFunction a, const PhaseFunction& b) { return a += b; }
  friend PhaseFunction operator-(PhaseFunction a, const PhaseFunction& b) { return a -= b; }
  friend PhaseFunction operator*(PhaseFunction a, Complex s) { return a *= s; }
  friend PhaseFunction operator*(Complex s, PhaseFunction a) { return a *= s; }

  /// Pointwise product; stays polynomial when both factors are.
  friend PhaseFunction pointwise(const PhaseFunction& a, const PhaseFunction& b);

 private:
  struct Unchecked {};
  PhaseFunction(Unchecked, PhaseGrid grid, std::vector<Complex> values, Role role,
                std::optional<Polynomial> poly);
  friend class PhaseFunctionAccess;

  PhaseGrid grid_;
  std::vector<Complex> values_;
  Role role_;
  std::optional<Polynomial> poly_;
};

/// Builds fields without the wavefunction boundary check; for intermediate
/// results inside the library.
class PhaseFunctionAccess {
 public:
  static PhaseFunction make(const PhaseGrid& grid, std::vector<Complex> values, Role role) {
    return PhaseFunction(PhaseFunction::Unchecked{}, grid, std::move(values), role, std::nullopt);
  }
};

/// sup |a - b| over the grid.
double max_abs_diff(const PhaseFunction& a, const PhaseFunction& b);

/// Samples a polynomial on the grid.
std::vector<Complex> sample(const PhaseGrid& grid, const Polynomial& poly);

}  // namespace wwgm
