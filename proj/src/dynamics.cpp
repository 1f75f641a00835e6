#include "wwgm/dynamics.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "wwgm/errors.hpp"
#include "wwgm/phase_space.hpp"
#include "wwgm/spectral.hpp"
#include "wwgm/star_algebra.hpp"

namespace wwgm {

namespace {

template <class State, class Rhs>
State rk4_step(const State& y, double dt, const Rhs& f) {
  const State k1 = f(y);
  const State k2 = f(y + k1 * Complex(0.5 * dt));
  const State k3 = f(y + k2 * Complex(0.5 * dt));
  const State k4 = f(y + k3 * Complex(dt));
  return y + (k1 + k2 * Complex(2.0) + k3 * Complex(2.0) + k4) * Complex(dt / 6.0);
}

// Calls fn(z) for z on the 3^{2n} points {-r, 0, r}^{2n}.
void for_each_box_point(int axes, double r, const std::function<void(const double*)>& fn) {
  double z[6];
  int total = 1;
  for (int a = 0; a < axes; ++a) total *= 3;
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (int a = 0; a < axes; ++a) {
      z[a] = r * static_cast<double>(c % 3 - 1);
      c /= 3;
    }
    fn(z);
  }
}

double grid_sup(const Polynomial& g, const PhaseGrid& grid) {
  double z[6];
  double m = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, z);
    m = std::max(m, std::abs(g(std::span<const double>(z, grid.axes()))));
  }
  return m;
}

void check_generator(const HamiltonianGenerator& g, const PhaseGrid& grid) {
  if (g.dim() != grid.dim()) throw ValidationError("evolve: generator dimension does not match the grid");
}

void check_step(const EvolutionConfig& cfg, const Polynomial& g, const PhaseGrid& grid, double rate,
                const char* what) {
  cfg.validate();
  const double sup = grid_sup(g, grid);
  if (cfg.dt * sup > kStepNormLimit) {
    std::ostringstream os;
    os << what << ": stability guard failed, dt*sup|G| = " << cfg.dt * sup << " > " << kStepNormLimit;
    throw ValidationError(os.str());
  }
  if (cfg.dt * rate > kStepRadiusLimit) {
    std::ostringstream os;
    os << what << ": stability guard failed, dt*rate = " << cfg.dt * rate << " > " << kStepRadiusLimit
       << " on the retained Fourier band; reduce dt or N";
    throw ValidationError(os.str());
  }
}

using Buffer = std::vector<Complex>;
using FieldRhs = std::function<void(std::span<const Complex>, Buffer&)>;
using Invariant = std::function<double(std::span<const Complex>)>;

// Classical RK4 on grid values with every temporary reused between steps.
class FieldStepper {
 public:
  FieldStepper(const PhaseGrid& grid, FieldRhs rhs)
      : rhs_(std::move(rhs)), filter_(grid, kEvolutionBand), n_(grid.size()) {}

  void step(Buffer& y, double dt) {
    stage_.resize(n_);
    acc_.resize(n_);
    rhs_(y, k_);
    for (std::size_t i = 0; i < n_; ++i) {
      acc_[i] = k_[i];
      stage_[i] = y[i] + 0.5 * dt * k_[i];
    }
    rhs_(stage_, k_);
    for (std::size_t i = 0; i < n_; ++i) {
      acc_[i] += 2.0 * k_[i];
      stage_[i] = y[i] + 0.5 * dt * k_[i];
    }
    rhs_(stage_, k_);
    for (std::size_t i = 0; i < n_; ++i) {
      acc_[i] += 2.0 * k_[i];
      stage_[i] = y[i] + dt * k_[i];
    }
    rhs_(stage_, k_);
    for (std::size_t i = 0; i < n_; ++i) y[i] += (dt / 6.0) * (acc_[i] + k_[i]);
    filter_.apply(y);
  }

 private:
  FieldRhs rhs_;
  spectral::BandFilter filter_;
  std::size_t n_;
  Buffer k_, stage_, acc_;
};

FieldRhs scaled_rhs(const PolynomialAction& act, Complex scale) {
  return [&act, scale](std::span<const Complex> y, Buffer& out) {
    act.apply_into(y, out);
    for (auto& e : out) e *= scale;
  };
}

// sign·{G, ρ} = sign·Σ_i ∂_{x_i}G ∂_{p_i}ρ - ∂_{p_i}G ∂_{x_i}ρ with the gradient of G sampled once.
class PoissonAction {
 public:
  PoissonAction(const Polynomial& g, const PhaseGrid& grid, double sign) : grid_(grid) {
    const int n = grid.dim();
    for (int i = 0; i < n; ++i) {
      auto dx = sample(grid, g.derivative(n + i));
      auto dp = sample(grid, g.derivative(i));
      for (auto& v : dx) v *= sign;
      for (auto& v : dp) v *= -sign;
      // ∂_{p_i}ρ is weighted by ∂_{x_i}G, ∂_{x_i}ρ by -∂_{p_i}G
      weights_.push_back(std::move(dx));
      weights_.push_back(std::move(dp));
      Polynomial kp(n), kx(n);
      Exponents ep{}, ex{};
      ep[i] = 1;
      ex[n + i] = 1;
      kp.add_term(ep, kI);
      kx.add_term(ex, kI);
      multipliers_.push_back(spectral::wave_table(grid, kp));
      multipliers_.push_back(spectral::wave_table(grid, kx));
    }
  }

  void apply_into(std::span<const Complex> rho, Buffer& out) const {
    spectral::forward_into(grid_, rho, coeffs_);
    out.assign(grid_.size(), Complex{});
    for (std::size_t d = 0; d < weights_.size(); ++d) {
      work_.resize(coeffs_.size());
      for (std::size_t j = 0; j < coeffs_.size(); ++j) work_[j] = coeffs_[j] * multipliers_[d][j];
      spectral::backward_into(grid_, work_, deriv_);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights_[d][j] * deriv_[j];
    }
  }

  FieldRhs rhs() const {
    return [this](std::span<const Complex> y, Buffer& out) { apply_into(y, out); };
  }

 private:
  PhaseGrid grid_;
  std::vector<Buffer> weights_;
  std::vector<Buffer> multipliers_;
  mutable Buffer coeffs_, work_, deriv_;
};

Trajectory run(const PhaseFunction& y0, const EvolutionConfig& cfg, FieldRhs f, const Invariant& invariant,
               const char* what) {
  const auto& grid = y0.grid();
  Trajectory t;
  t.times.push_back(0.0);
  t.states.push_back(y0);
  Buffer y(y0.values().begin(), y0.values().end());
  FieldStepper stepper(grid, std::move(f));
  const double inv0 = invariant ? invariant(y) : 0.0;
  double prev = inv0;
  t.invariant_initial = inv0;
  for (int s = 1; s <= cfg.steps; ++s) {
    stepper.step(y, cfg.dt);
    for (const auto& v : y) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw AccuracyError(std::string(what) + ": state became non-finite");
      }
    }
    if (invariant) {
      const double now = invariant(y);
      t.max_step_drift = std::max(t.max_step_drift, std::abs(now - prev));
      t.invariant_drift = std::max(t.invariant_drift, std::abs(now - inv0));
      prev = now;
    }
    if (s % cfg.save_every == 0 || s == cfg.steps) {
      t.times.push_back(s * cfg.dt);
      t.states.push_back(PhaseFunctionAccess::make(grid, y, y0.role()));
    }
  }
  if (t.invariant_drift > kDriftTolerance) {
    std::ostringstream os;
    os << what << ": conserved quantity drifted by " << t.invariant_drift << " (> " << kDriftTolerance
       << "); reduce dt or refine the grid";
    throw AccuracyError(os.str());
  }
  return t;
}

Invariant weighted_sum(const PhaseGrid& grid, double weight, bool squared) {
  return [weight, squared, volume = grid.cell_volume()](std::span<const Complex> y) {
    double s = 0.0;
    for (const auto& v : y) s += squared ? std::norm(v) : v.real();
    s *= volume * weight;
    return squared ? std::sqrt(s) : s;
  };
}

Trajectory run_polynomial(const PhaseFunction& a0, const EvolutionConfig& cfg,
                          const std::function<Polynomial(const Polynomial&)>& f, const char* what) {
  const auto& grid = a0.grid();
  const Polynomial& start = a0.polynomial();
  const Polynomial rate = f(start);
  if (!rate.is_zero() && rate.degree() > std::max(0, start.degree())) {
    std::ostringstream os;
    os << what << ": the polynomial observable grows in degree under this generator; "
       << "supply a boundary-decayed observable instead";
    throw ValidationError(os.str());
  }
  Trajectory t;
  t.times.push_back(0.0);
  t.states.push_back(a0);
  Polynomial y = start;
  for (int s = 1; s <= cfg.steps; ++s) {
    y = rk4_step(y, cfg.dt, f);
    if (s % cfg.save_every == 0 || s == cfg.steps) {
      t.times.push_back(s * cfg.dt);
      t.states.push_back(PhaseFunction::from_polynomial(grid, y, a0.role()));
    }
  }
  return t;
}

Polynomial poisson(const Polynomial& a, const Polynomial& b) {
  const int n = a.dim();
  Polynomial out(n);
  for (int i = 0; i < n; ++i) {
    out += a.derivative(n + i) * b.derivative(i);
    out -= a.derivative(i) * b.derivative(n + i);
  }
  return out;
}

void require_density(const PhaseFunction& rho, const char* what) {
  if (rho.role() != Role::density) throw ValidationError(std::string(what) + ": input must have role density");
}

}  // namespace

HamiltonianGenerator HamiltonianGenerator::custom(std::string name, Polynomial expression,
                                                  std::optional<double> mass) {
  if (!expression.is_real()) throw ValidationError("HamiltonianGenerator: G must have real coefficients");
  if (mass && !(*mass > 0.0 && std::isfinite(*mass))) throw ValidationError("HamiltonianGenerator: mass must be > 0");
  return HamiltonianGenerator{std::move(name), std::move(expression), mass};
}

HamiltonianGenerator HamiltonianGenerator::zero(int n) { return custom("zero", Polynomial(n)); }

HamiltonianGenerator HamiltonianGenerator::constant(int n, double c) {
  return custom("constant", Polynomial::constant(n, c));
}

HamiltonianGenerator HamiltonianGenerator::harmonic(int n) {
  Polynomial g(n);
  for (int i = 0; i < n; ++i) g += Polynomial::p(n, i) * Polynomial::p(n, i) + Polynomial::x(n, i) * Polynomial::x(n, i);
  return custom("harmonic", g);
}

HamiltonianGenerator HamiltonianGenerator::free_particle(int n, double m) {
  if (!(m > 0.0 && std::isfinite(m))) throw ValidationError("free_particle: mass must be > 0");
  Polynomial g(n);
  for (int i = 0; i < n; ++i) g += Polynomial::p(n, i) * Polynomial::p(n, i) * Complex(1.0 / (2.0 * m));
  return custom("free", g, m);
}

HamiltonianGenerator HamiltonianGenerator::classical_harmonic(int n) {
  auto h = harmonic(n);
  h.expression *= 0.5;
  h.name = "classical_harmonic";
  return h;
}

HamiltonianGenerator HamiltonianGenerator::cubic(int n) {
  Polynomial g(n);
  for (int i = 0; i < n; ++i) {
    const auto x = Polynomial::x(n, i);
    g += Polynomial::p(n, i) * Polynomial::p(n, i) * Complex(0.5) + x * x * x * Complex(1.0 / 3.0);
  }
  return custom("cubic", g);
}

PhaseFunction HamiltonianGenerator::on(const PhaseGrid& grid) const {
  if (grid.dim() != dim()) throw ValidationError("HamiltonianGenerator: dimension does not match the grid");
  return PhaseFunction::from_polynomial(grid, expression, Role::observable);
}

void EvolutionConfig::validate() const {
  if (!(dt > 0.0 && std::isfinite(dt))) throw ValidationError("EvolutionConfig: dt must be > 0");
  if (steps < 1) throw ValidationError("EvolutionConfig: steps must be >= 1");
  if (save_every < 1) throw ValidationError("EvolutionConfig: save_every must be >= 1");
}

double schrodinger_rate(const Polynomial& g, const PhaseGrid& grid) {
  const int axes = grid.axes();
  const double band = spectral::filtered_band(grid, kEvolutionBand);
  double m = 0.0;
  for_each_box_point(axes, grid.half_width(), [&](const double* z) {
    for_each_box_point(axes, band, [&](const double* w) {
      double y[6];
      for (int a = 0; a < axes; ++a) y[a] = z[a] + w[a];
      m = std::max(m, std::abs(g(std::span<const double>(y, axes))));
    });
  });
  return 0.5 * m;
}

double bracket_rate(const Polynomial& g, const PhaseGrid& grid, const ContractionParam& kp) {
  const int axes = grid.axes();
  const double band = spectral::filtered_band(grid, kEvolutionBand) / kp.k2();
  double m = 0.0;
  for_each_box_point(axes, grid.half_width(), [&](const double* z) {
    for_each_box_point(axes, band, [&](const double* w) {
      double y1[6], y2[6];
      for (int a = 0; a < axes; ++a) {
        y1[a] = z[a] + w[a];
        y2[a] = z[a] - w[a];
      }
      m = std::max(m, std::abs(g(std::span<const double>(y1, axes)) - g(std::span<const double>(y2, axes))));
    });
  });
  return 0.5 * kp.k2() * m;
}

double poisson_rate(const Polynomial& g, const PhaseGrid& grid) {
  const int axes = grid.axes();
  const double band = spectral::filtered_band(grid, kEvolutionBand);
  std::vector<Polynomial> grad;
  for (int a = 0; a < axes; ++a) grad.push_back(g.derivative(a));
  double m = 0.0;
  for_each_box_point(axes, grid.half_width(), [&](const double* z) {
    double s = 0.0;
    for (const auto& d : grad) s += std::abs(d(std::span<const double>(z, axes)));
    m = std::max(m, s * band);
  });
  return m;
}

Trajectory schrodinger_evolve(const PhaseFunction& phi, const HamiltonianGenerator& g,
                              const EvolutionConfig& cfg) {
  const auto& grid = phi.grid();
  check_generator(g, grid);
  if (phi.role() != Role::wavefunction) throw ValidationError("schrodinger_evolve: input must be a wavefunction");
  if (phi.is_polynomial()) throw ValidationError("schrodinger_evolve: wavefunction must be boundary-decayed");
  if (std::abs(norm(phi) - 1.0) > 1e-6) throw ValidationError("schrodinger_evolve: state is not normalized");
  check_step(cfg, g.expression, grid, schrodinger_rate(g.expression, grid), "schrodinger_evolve");
  const PolynomialAction act(g.expression, grid, PolySide::left, star_parameter(ContractionParam{}));
  return run(phi, cfg, scaled_rhs(act, Complex(0.0, -0.5)),
             weighted_sum(grid, 1.0 / std::pow(kPi, grid.dim()), true), "schrodinger_evolve");
}

Trajectory heisenberg_evolve(const PhaseFunction& alpha, const HamiltonianGenerator& g,
                             const EvolutionConfig& cfg, const ContractionParam& kp) {
  const auto& grid = alpha.grid();
  check_generator(g, grid);
  if (alpha.role() != Role::observable) throw ValidationError("heisenberg_evolve: input must be an observable");
  check_step(cfg, g.expression, grid, alpha.is_polynomial() ? 0.0 : bracket_rate(g.expression, grid, kp),
             "heisenberg_evolve");
  const Polynomial G = g.expression;
  if (alpha.is_polynomial()) {
    const Complex scale(0.0, -kp.k2() / 2.0);
    return run_polynomial(alpha, cfg, [&](const Polynomial& a) {
      return (star(a, G, kp) - star(G, a, kp)) * scale;
    }, "heisenberg_evolve");
  }
  // {α, G} = -{G, α}
  const PolynomialAction act(g.expression, grid, PolySide::bracket, star_parameter(kp));
  return run(alpha, cfg, scaled_rhs(act, Complex(0.0, kp.k2() / 2.0)), Invariant{}, "heisenberg_evolve");
}

Trajectory liouville_evolve(const PhaseFunction& rho, const HamiltonianGenerator& g,
                            const EvolutionConfig& cfg, const ContractionParam& kp) {
  const auto& grid = rho.grid();
  check_generator(g, grid);
  require_density(rho, "liouville_evolve");
  check_step(cfg, g.expression, grid, bracket_rate(g.expression, grid, kp), "liouville_evolve");
  const PolynomialAction act(g.expression, grid, PolySide::bracket, star_parameter(kp));
  return run(rho, cfg, scaled_rhs(act, Complex(0.0, -kp.k2() / 2.0)),
             weighted_sum(grid, 1.0 / std::pow(4.0 * kPi, grid.dim()), false), "liouville_evolve");
}

Trajectory classical_liouville_evolve(const PhaseFunction& rho, const HamiltonianGenerator& g,
                                      const EvolutionConfig& cfg) {
  const auto& grid = rho.grid();
  check_generator(g, grid);
  require_density(rho, "classical_liouville_evolve");
  const double peak = rho.sup_norm();
  if (rho.max_imag() > kDensityImagTolerance * peak) {
    throw ValidationError("classical_liouville_evolve: density must be real");
  }
  for (const auto& v : rho.values()) {
    if (v.real() < -kDensityImagTolerance * peak) {
      throw ValidationError("classical_liouville_evolve: density must be nonnegative");
    }
  }
  check_step(cfg, g.expression, grid, poisson_rate(g.expression, grid), "classical_liouville_evolve");
  const PoissonAction act(g.expression, grid, 1.0);
  return run(rho, cfg, act.rhs(), weighted_sum(grid, 1.0, false), "classical_liouville_evolve");
}

Trajectory classical_heisenberg_evolve(const PhaseFunction& alpha, const HamiltonianGenerator& g,
                                       const EvolutionConfig& cfg) {
  const auto& grid = alpha.grid();
  check_generator(g, grid);
  if (alpha.role() != Role::observable) {
    throw ValidationError("classical_heisenberg_evolve: input must be an observable");
  }
  check_step(cfg, g.expression, grid, alpha.is_polynomial() ? 0.0 : poisson_rate(g.expression, grid),
             "classical_heisenberg_evolve");
  const Polynomial G = g.expression;
  if (alpha.is_polynomial()) {
    return run_polynomial(alpha, cfg, [&](const Polynomial& a) { return poisson(a, G); },
                          "classical_heisenberg_evolve");
  }
  const PoissonAction act(g.expression, grid, -1.0);
  return run(alpha, cfg, act.rhs(), Invariant{}, "classical_heisenberg_evolve");
}

PhaseFunction tilde_apply(Tilde which, const PhaseFunction& alpha, int i) {
  if (i < 0 || i >= alpha.grid().dim()) throw ValidationError("tilde_apply: component out of range");
  auto d = which == Tilde::x ? partial_p(alpha, i) : partial_x(alpha, i);
  return d * Complex(0.0, 2.0);
}

FreeParticleTildeGenerator::FreeParticleTildeGenerator(double m, const ContractionParam& kp) : m_(m), kp_(kp) {
  if (!(m > 0.0 && std::isfinite(m))) throw ValidationError("FreeParticleTildeGenerator: mass must be > 0");
}

PhaseFunction FreeParticleTildeGenerator::apply(const PhaseFunction& rho) const {
  const auto& grid = rho.grid();
  const int n = grid.dim();
  std::optional<PhaseFunction> sum;
  for (int i = 0; i < n; ++i) {
    auto term = pointwise(PhaseFunction::from_polynomial(grid, Polynomial::p(n, i)), partial_x(rho, i));
    if (sum) {
      *sum += term;
    } else {
      sum.emplace(std::move(term));
    }
  }
  return (*sum * Complex(0.0, -2.0 / m_)).with_role(rho.role());
}

PhaseFunction FreeParticleTildeGenerator::apply_from_bracket(const PhaseFunction& rho) const {
  const auto g = HamiltonianGenerator::free_particle(rho.grid().dim(), m_).on(rho.grid());
  return (moyal_bracket(g, rho, StarMethod::spectral(), kp_) * Complex(kp_.k2())).with_role(rho.role());
}

}  // namespace wwgm
