#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wwgm/heisenberg_group.hpp"
#include "wwgm/phase_function.hpp"
#include "wwgm/polynomial.hpp"

namespace wwgm {

/// Real polynomial generator G(p, x) of a one-parameter flow.
struct HamiltonianGenerator {
  std::string name;
  Polynomial expression;
  std::optional<double> mass;

  /// Throws ValidationError unless the expression has real coefficients.
  static HamiltonianGenerator custom(std::string name, Polynomial expression,
                                     std::optional<double> mass = std::nullopt);
  static HamiltonianGenerator zero(int n);
  static HamiltonianGenerator constant(int n, double c);
  /// Σ p_i² + x_i²: labels rotate with angular frequency 2.
  static HamiltonianGenerator harmonic(int n);
  /// Σ p_i² / (2m).
  static HamiltonianGenerator free_particle(int n, double m);
  /// Σ (p_i² + x_i²) / 2: classical rotation with period 2π.
  static HamiltonianGenerator classical_harmonic(int n);
  /// Σ p_i²/2 + x_i³/3.
  static HamiltonianGenerator cubic(int n);

  int dim() const { return expression.dim(); }
  PhaseFunction on(const PhaseGrid& grid) const;
};

/// Fixed-step fourth-order Runge–Kutta schedule.
struct EvolutionConfig {
  double dt = 1e-3;
  int steps = 1;
  /// Keep every save_every-th state; the initial and final states are always kept.
  int save_every = 1;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseFunction> states;
  /// Conserved quantity of the run (norm, trace or mass; 0 when there is none)
  /// and its drift over the whole run and over the worst single step.
  double invariant_initial = 0.0;
  double invariant_drift = 0.0;
  double max_step_drift = 0.0;

  const PhaseFunction& final_state() const { return states.back(); }
};

/// Fraction of the Nyquist band kept after every step on grid fields.
inline constexpr double kEvolutionBand = 2.0 / 3.0;
/// Largest dt · (spectral radius) accepted; RK4 is stable on the imaginary axis up to 2√2.
inline constexpr double kStepRadiusLimit = 2.8;
/// dt · sup|G| bound checked before any run.
inline constexpr double kStepNormLimit = 0.5;
/// Largest drift of the conserved norm, trace or mass over a run.
inline constexpr double kDriftTolerance = 1e-6;

/// dφ/dt = (1/2i) G ⋆ φ.
Trajectory schrodinger_evolve(const PhaseFunction& phi, const HamiltonianGenerator& g,
                              const EvolutionConfig& cfg);

/// dα/dt = (k²/2i){α, G}_{⋆k}. Polynomial observables are evolved exactly in
/// polynomial form when G keeps their degree (G at most quadratic).
Trajectory heisenberg_evolve(const PhaseFunction& alpha, const HamiltonianGenerator& g,
                             const EvolutionConfig& cfg, const ContractionParam& kp = ContractionParam{});

/// dρ/dt = (k²/2i){G, ρ}_{⋆k}.
Trajectory liouville_evolve(const PhaseFunction& rho, const HamiltonianGenerator& g,
                            const EvolutionConfig& cfg, const ContractionParam& kp = ContractionParam{});

/// dρ/dt = {G, ρ} (Poisson); conserves Σ ρ h^{2n}.
Trajectory classical_liouville_evolve(const PhaseFunction& rho, const HamiltonianGenerator& g,
                                      const EvolutionConfig& cfg);

/// dα/dt = {α, G} (Poisson).
Trajectory classical_heisenberg_evolve(const PhaseFunction& alpha, const HamiltonianGenerator& g,
                                       const EvolutionConfig& cfg);

/// Generators of translations on phase-space functions: x̃_i = 2i∂_{p_i}, p̃_i = 2i∂_{x_i}.
enum class Tilde { x, p };
PhaseFunction tilde_apply(Tilde which, const PhaseFunction& alpha, int i = 0);

/// Contracted free-particle generator G̃ = (-2i/m) p·∂_x on densities.
class FreeParticleTildeGenerator {
 public:
  explicit FreeParticleTildeGenerator(double m, const ContractionParam& kp = ContractionParam{});

  double mass() const { return m_; }
  /// Closed form (-2i/m) Σ p_i ∂_{x_i} ρ.
  PhaseFunction apply(const PhaseFunction& rho) const;
  /// The same generator obtained as k²{G, ρ}_{⋆k} with G = p²/(2m).
  PhaseFunction apply_from_bracket(const PhaseFunction& rho) const;

 private:
  double m_;
  ContractionParam kp_;
};

/// Rates entering the stability guard, exposed for diagnostics.
double schrodinger_rate(const Polynomial& g, const PhaseGrid& grid);
double bracket_rate(const Polynomial& g, const PhaseGrid& grid, const ContractionParam& kp);
double poisson_rate(const Polynomial& g, const PhaseGrid& grid);

}  // namespace wwgm
