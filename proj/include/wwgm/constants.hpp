#pragma once

#include <complex>
#include <numbers>

namespace wwgm {

using Complex = std::complex<double>;

/// Planck constant in the units used throughout: [X, P] = 2i.
inline constexpr double kHbar = 2.0;
inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

}  // namespace wwgm
