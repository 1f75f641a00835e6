#pragma once

#include <vector>

namespace wwgm {

/// Element W(p, x, θ) = exp[i(p·X - x·P + θ I)] of the Heisenberg-Weyl group H(n), n = 1..3.
struct GroupElement {
  std::vector<double> p;
  std::vector<double> x;
  double theta = 0.0;

  GroupElement() = default;
  GroupElement(std::vector<double> p, std::vector<double> x, double theta);

  int dim() const { return static_cast<int>(p.size()); }
  bool operator==(const GroupElement&) const = default;
};

GroupElement identity_element(int n);

/// Central phase picked up when composing: -(x1·p2 - p1·x2).
double twist(const GroupElement& g1, const GroupElement& g2);

/// W(g1) W(g2) = W(p1+p2, x1+x2, θ1+θ2 + twist(g1, g2)).
GroupElement compose(const GroupElement& g1, const GroupElement& g2);

GroupElement inverse(const GroupElement& g);

/// Contraction parameter k of X^c = X/k, P^c = P/k at fixed ħ = 2.
class ContractionParam {
 public:
  explicit ContractionParam(double k = 1.0);
  double k() const { return k_; }
  double k2() const { return k_ * k_; }
  /// ħ/k², the deformation parameter left in the contracted star product.
  double hbar_eff() const;

 private:
  double k_;
};

/// Parameters of an infinitesimal transformation on the phase-space coset:
/// rotation ω (antisymmetric, row-major n×n), translations p̄, x̄, phase θ̄.
struct CosetAlgebraParams {
  std::vector<double> omega;
  std::vector<double> p_bar;
  std::vector<double> x_bar;
  double theta_bar = 0.0;

  CosetAlgebraParams(std::vector<double> omega, std::vector<double> p_bar,
                     std::vector<double> x_bar, double theta_bar);
  int dim() const { return static_cast<int>(p_bar.size()); }
  double omega_at(int i, int j) const { return omega[i * dim() + j]; }
};

struct CosetPoint {
  std::vector<double> p;
  std::vector<double> x;
  double theta = 0.0;
};

struct ConfigPoint {
  std::vector<double> x;
  double theta = 0.0;
};

/// (dp_c, dx_c, dθ) from the 4-block coset matrix acting on (p_c, x_c, θ, 1).
CosetPoint phase_space_coset_flow(const CosetAlgebraParams& params, const CosetPoint& point,
                                  const ContractionParam& kp);

/// (dx, dθ) on the configuration coset; p̄ enters only through the θ row.
ConfigPoint config_coset_flow(const CosetAlgebraParams& params, const ConfigPoint& point);

/// Group parameters (p, x, θ) -> (k p, k x, θ).
GroupElement contract_coordinates(const GroupElement& g, const ContractionParam& kp);

}  // namespace wwgm
