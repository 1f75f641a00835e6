#include "wwgm/phase_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wwgm/errors.hpp"

namespace wwgm {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::wavefunction: return "wavefunction";
    case Role::observable: return "observable";
    case Role::density: return "density";
  }
  return "unknown";
}

std::vector<Complex> sample(const PhaseGrid& grid, const Polynomial& poly) {
  if (poly.dim() != grid.dim()) throw ValidationError("sample: polynomial dimension != grid dimension");
  std::vector<Complex> out(grid.size());
  double z[6] = {};
  for (std::size_t f = 0; f < grid.size(); ++f) {
    grid.point(f, z);
    out[f] = poly(std::span<const double>(z, grid.axes()));
  }
  return out;
}

PhaseFunction::PhaseFunction(PhaseGrid grid, std::vector<Complex> values, Role role)
    : grid_(std::move(grid)), values_(std::move(values)), role_(role) {
  if (values_.size() != grid_.size()) {
    throw ValidationError("PhaseFunction: value count does not match grid size");
  }
  if (role_ == Role::wavefunction) {
    const double peak = sup_norm();
    const double edge = boundary_max();
    if (peak > 0.0 && edge > kBoundaryTolerance * peak) {
      std::ostringstream os;
      os << "PhaseFunction: wavefunction does not fit the box (edge/peak = " << edge / peak << ")";
      throw ValidationError(os.str());
    }
  }
}

PhaseFunction::PhaseFunction(Unchecked, PhaseGrid grid, std::vector<Complex> values, Role role,
                             std::optional<Polynomial> poly)
    : grid_(std::move(grid)), values_(std::move(values)), role_(role), poly_(std::move(poly)) {}

PhaseFunction PhaseFunction::from_polynomial(const PhaseGrid& grid, Polynomial poly, Role role) {
  auto values = sample(grid, poly);
  return PhaseFunction(Unchecked{}, grid, std::move(values), role, std::move(poly));
}

PhaseFunction PhaseFunction::constant(const PhaseGrid& grid, Complex value) {
  return from_polynomial(grid, Polynomial::constant(grid.dim(), value));
}

PhaseFunction PhaseFunction::with_role(Role role) const {
  PhaseFunction out = *this;
  out.role_ = role;
  return out;
}

PhaseFunction PhaseFunction::conj() const {
  PhaseFunction out = *this;
  for (auto& v : out.values_) v = std::conj(v);
  if (out.poly_) out.poly_ = out.poly_->conj();
  return out;
}

double PhaseFunction::sup_norm() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double PhaseFunction::boundary_max() const {
  const int N = grid_.points();
  double m = 0.0;
  for (std::size_t f = 0; f < values_.size(); ++f) {
    for (int a = 0; a < grid_.axes(); ++a) {
      const int j = grid_.index(f, a);
      if (j == 0 || j == N - 1) {
        m = std::max(m, std::abs(values_[f]));
        break;
      }
    }
  }
  return m;
}

double PhaseFunction::max_imag() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
  return m;
}

PhaseFunction& PhaseFunction::operator+=(const PhaseFunction& o) {
  require_same_grid(grid_, o.grid_, "PhaseFunction::+");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  if (poly_ && o.poly_) {
    *poly_ += *o.poly_;
  } else {
    poly_.reset();
  }
  return *this;
}

PhaseFunction& PhaseFunction::operator-=(const PhaseFunction& o) {
  require_same_grid(grid_, o.grid_, "PhaseFunction::-");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  if (poly_ && o.poly_) {
    *poly_ -= *o.poly_;
  } else {
    poly_.reset();
  }
  return *this;
}

PhaseFunction& PhaseFunction::operator*=(Complex s) {
  for (auto& v : values_) v *= s;
  if (poly_) *poly_ *= s;
  return *this;
}

PhaseFunction pointwise(const PhaseFunction& a, const PhaseFunction& b) {
  require_same_grid(a.grid_, b.grid_, "pointwise");
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] * b.values_[i];
  std::optional<Polynomial> poly;
  if (a.poly_ && b.poly_) poly = *a.poly_ * *b.poly_;
  const Role role = (a.role_ == Role::wavefunction || b.role_ == Role::wavefunction)
                        ? Role::wavefunction
                        : Role::observable;
  return PhaseFunction(PhaseFunction::Unchecked{}, a.grid_, std::move(v), role, std::move(poly));
}

double max_abs_diff(const PhaseFunction& a, const PhaseFunction& b) {
  require_same_grid(a.grid(), b.grid(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace wwgm
