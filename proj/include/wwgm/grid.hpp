#pragma once

#include <cstddef>
#include <vector>

namespace wwgm {

/// Uniform grid on the 2n-dimensional phase space [-L, L)^{2n}.
///
/// Axes are ordered (p_1..p_n, x_1..x_n); the last axis varies fastest, so
/// flat storage is row-major with p outer and x inner.
class PhaseGrid {
 public:
  PhaseGrid(int n, int points_per_axis, double half_width);

  int dim() const { return n_; }
  int axes() const { return 2 * n_; }
  int points() const { return N_; }
  double half_width() const { return L_; }
  double spacing() const { return 2.0 * L_ / N_; }
  std::size_t size() const { return size_; }

  double coordinate(int j) const { return -L_ + j * spacing(); }
  std::size_t stride(int axis) const { return strides_[axis]; }
  int index(std::size_t flat, int axis) const {
    return static_cast<int>((flat / strides_[axis]) % static_cast<std::size_t>(N_));
  }
  double coordinate(std::size_t flat, int axis) const { return coordinate(index(flat, axis)); }

  /// Axis number of p_i / x_i.
  int p_axis(int i) const { return i; }
  int x_axis(int i) const { return n_ + i; }

  /// Quadrature weight of one cell, h^{2n}.
  double cell_volume() const;

  /// Signed FFT mode number of index j: 0, 1, ..., N/2-1, -N/2, ..., -1.
  int mode(int j) const { return j < N_ / 2 ? j : j - N_; }
  /// Fundamental angular wave number 2π/(2L).
  double wave_unit() const;
  /// Largest resolved angular wave number π/h.
  double nyquist() const;

  /// Point coordinates (p_1..p_n, x_1..x_n) of a flat index.
  void point(std::size_t flat, double* out) const;

  bool operator==(const PhaseGrid& other) const {
    return n_ == other.n_ && N_ == other.N_ && L_ == other.L_;
  }

 private:
  int n_;
  int N_;
  double L_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
};

void require_same_grid(const PhaseGrid& a, const PhaseGrid& b, const char* op);

}  // namespace wwgm
