#include "wwgm/grid.hpp"

#include <cmath>
#include <string>

#include "wwgm/constants.hpp"
#include "wwgm/errors.hpp"

namespace wwgm {

PhaseGrid::PhaseGrid(int n, int points_per_axis, double half_width)
    : n_(n), N_(points_per_axis), L_(half_width) {
  if (n < 1 || n > 2) {
    throw ValidationError("PhaseGrid: dimension n must be 1 or 2, got " + std::to_string(n));
  }
  if (N_ < 16 || (N_ & (N_ - 1)) != 0) {
    throw ValidationError("PhaseGrid: points per axis must be a power of two >= 16, got " +
                          std::to_string(N_));
  }
  if (!(L_ > 0.0) || !std::isfinite(L_)) {
    throw ValidationError("PhaseGrid: half-width must be finite and positive");
  }
  strides_.assign(axes(), 1);
  for (int a = axes() - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * N_;
  size_ = strides_[0] * N_;
}

double PhaseGrid::cell_volume() const { return std::pow(spacing(), axes()); }

double PhaseGrid::wave_unit() const { return kPi / L_; }

double PhaseGrid::nyquist() const { return kPi / spacing(); }

void PhaseGrid::point(std::size_t flat, double* out) const {
  for (int a = 0; a < axes(); ++a) out[a] = coordinate(flat, a);
}

void require_same_grid(const PhaseGrid& a, const PhaseGrid& b, const char* op) {
  if (!(a == b)) throw ValidationError(std::string(op) + ": operands live on different grids");
}

}  // namespace wwgm
