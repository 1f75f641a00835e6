#include "wwgm/heisenberg_group.hpp"

#include <cmath>
#include <string>

#include "wwgm/errors.hpp"

namespace wwgm {

namespace {

void check_dim(int n, const char* what) {
  if (n < 1 || n > 3) {
    throw ValidationError(std::string(what) + ": dimension must be 1..3, got " + std::to_string(n));
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

GroupElement::GroupElement(std::vector<double> p_, std::vector<double> x_, double theta_)
    : p(std::move(p_)), x(std::move(x_)), theta(theta_) {
  if (p.size() != x.size()) throw ValidationError("GroupElement: p and x differ in length");
  check_dim(dim(), "GroupElement");
}

GroupElement identity_element(int n) {
  check_dim(n, "identity_element");
  return GroupElement(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0);
}

double twist(const GroupElement& g1, const GroupElement& g2) {
  if (g1.dim() != g2.dim()) throw ValidationError("twist: dimension mismatch");
  return -(dot(g1.x, g2.p) - dot(g1.p, g2.x));
}

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
  if (g1.dim() != g2.dim()) throw ValidationError("compose: dimension mismatch");
  const int n = g1.dim();
  std::vector<double> p(n), x(n);
  for (int i = 0; i < n; ++i) {
    p[i] = g1.p[i] + g2.p[i];
    x[i] = g1.x[i] + g2.x[i];
  }
  return GroupElement(std::move(p), std::move(x), g1.theta + g2.theta + twist(g1, g2));
}

GroupElement inverse(const GroupElement& g) {
  GroupElement out = g;
  for (auto& v : out.p) v = -v;
  for (auto& v : out.x) v = -v;
  out.theta = -out.theta;
  return out;
}

ContractionParam::ContractionParam(double k) : k_(k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ValidationError("ContractionParam: k must be finite and > 0");
  }
}

double ContractionParam::hbar_eff() const { return 2.0 / (k_ * k_); }

CosetAlgebraParams::CosetAlgebraParams(std::vector<double> omega_, std::vector<double> p_bar_,
                                       std::vector<double> x_bar_, double theta_bar_)
    : omega(std::move(omega_)), p_bar(std::move(p_bar_)), x_bar(std::move(x_bar_)),
      theta_bar(theta_bar_) {
  const int n = dim();
  check_dim(n, "CosetAlgebraParams");
  if (x_bar.size() != p_bar.size()) throw ValidationError("CosetAlgebraParams: p̄/x̄ length mismatch");
  if (omega.size() != static_cast<std::size_t>(n * n)) {
    throw ValidationError("CosetAlgebraParams: ω must be n×n");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (omega_at(i, j) + omega_at(j, i) != 0.0) {
        throw ValidationError("CosetAlgebraParams: ω is not antisymmetric");
      }
    }
  }
}

CosetPoint phase_space_coset_flow(const CosetAlgebraParams& params, const CosetPoint& point,
                                  const ContractionParam& kp) {
  const int n = params.dim();
  if (static_cast<int>(point.p.size()) != n || static_cast<int>(point.x.size()) != n) {
    throw ValidationError("phase_space_coset_flow: point dimension mismatch");
  }
  CosetPoint d{std::vector<double>(n), std::vector<double>(n), 0.0};
  for (int i = 0; i < n; ++i) {
    double dp = params.p_bar[i];
    double dx = params.x_bar[i];
    for (int j = 0; j < n; ++j) {
      dp += params.omega_at(i, j) * point.p[j];
      dx += params.omega_at(i, j) * point.x[j];
    }
    d.p[i] = dp;
    d.x[i] = dx;
  }
  const double coupling = -dot(params.x_bar, point.p) + dot(params.p_bar, point.x);
  d.theta = coupling / kp.k2() + params.theta_bar;
  return d;
}

ConfigPoint config_coset_flow(const CosetAlgebraParams& params, const ConfigPoint& point) {
  const int n = params.dim();
  if (static_cast<int>(point.x.size()) != n) {
    throw ValidationError("config_coset_flow: point dimension mismatch");
  }
  ConfigPoint d{std::vector<double>(n), 0.0};
  for (int i = 0; i < n; ++i) {
    double dx = params.x_bar[i];
    for (int j = 0; j < n; ++j) dx += params.omega_at(i, j) * point.x[j];
    d.x[i] = dx;
  }
  d.theta = dot(params.p_bar, point.x) + params.theta_bar;
  return d;
}

GroupElement contract_coordinates(const GroupElement& g, const ContractionParam& kp) {
  GroupElement out = g;
  for (auto& v : out.p) v *= kp.k();
  for (auto& v : out.x) v *= kp.k();
  return out;
}

}  // namespace wwgm
