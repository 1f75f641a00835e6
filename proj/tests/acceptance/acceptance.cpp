#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "wwgm/analytic_oracle.hpp"
#include "wwgm/contraction_lab.hpp"
#include "wwgm/dynamics.hpp"
#include "wwgm/heisenberg_group.hpp"
#include "wwgm/phase_space.hpp"
#include "wwgm/star_algebra.hpp"

using namespace wwgm;

namespace {

/// Default rig: n = 1, N = 256, L = 8; k-sweeps on N = 1024.
const PhaseGrid kRig(1, 256, 8.0);
const SweepSpec kSweep{};

/// Largest label component whose state keeps the boundary margin.
double state_reach(const PhaseGrid& g) { return g.half_width() - g.spacing() - kCoherentMargin; }
/// Largest label component whose Wigner density (centred at 2a) keeps the margin.
double density_reach(const PhaseGrid& g) { return 0.5 * state_reach(g); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

PhaseFunction poly(const Polynomial& p, const PhaseGrid& g = kRig) { return PhaseFunction::from_polynomial(g, p); }

const Polynomial X = Polynomial::x(1);
const Polynomial P = Polynomial::p(1);

const SlopeFit& fit_for(const SweepResult& r, const std::string& column) {
  for (const auto& f : r.fits)
    if (f.column == column) return f;
  throw std::runtime_error("missing fit for " + column);
}

Outcome coherent_overlap_agreement() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-state_reach(kRig), state_reach(kRig));
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const CoherentLabel a{{u(rng)}, {u(rng)}}, b{{u(rng)}, {u(rng)}};
    const Complex num = inner(coherent_state(b, kRig), coherent_state(a, kRig));
    const Complex ref = oracle::coherent_overlap(a, b).value;
    worst = std::max(worst, std::abs(num - ref) / std::abs(ref));
  }
  return {worst <= 1e-6, fmt("20 random pairs, max relative error %.3e (limit 1e-6)", worst)};
}

Outcome canonical_commutator() {
  const PhaseFunction two_i = PhaseFunction::constant(kRig, Complex(0.0, 2.0));
  const double series = max_abs_diff(moyal_bracket(poly(X), poly(P), StarMethod::series()), two_i);
  const double spectral = max_abs_diff(moyal_bracket(poly(X), poly(P), StarMethod::spectral()), two_i);
  return {series <= 1e-8 && spectral <= 1e-6,
          fmt("series %.3e (limit 1e-8), spectral %.3e (limit 1e-6)", series, spectral)};
}

Outcome trace_duality() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-density_reach(kRig), density_reach(kRig));
  const CoherentLabel a{{u(rng)}, {u(rng)}};
  const PhaseFunction phi = coherent_state(a, kRig);
  const PhaseFunction rho = wigner(phi);
  double worst = 0.0;
  for (const Polynomial& alpha : {Polynomial::constant(1, 1.0), X, P, X * X}) {
    const PhaseFunction al = poly(alpha);
    worst = std::max(worst, std::abs(trace_pair(al, rho) - inner(phi, star(al, phi))));
  }
  return {worst <= 1e-6, fmt("alpha in {1, x, p, x^2}, label (%.3f, %.3f): max gap %.3e (limit 1e-6)", a.p[0], a.x[0],
                             worst)};
}

Outcome wigner_properties() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-density_reach(kRig), density_reach(kRig));
  const CoherentLabel a{{u(rng)}, {u(rng)}};
  const PhaseFunction rho = wigner(coherent_state(a, kRig));
  const double imag = rho.max_imag() / rho.sup_norm();
  const double trace = std::abs(trace_pair(PhaseFunction::constant(kRig, 1.0), rho) - 1.0);
  const Peak peak = locate_peak(rho);
  // The density peaks at the expectation values 2a; in label coordinates that is a.
  bool nearest = true;
  const double expectation[2] = {2.0 * a.p[0], 2.0 * a.x[0]};
  for (int axis = 0; axis < 2; ++axis)
    nearest = nearest && std::abs(peak.grid_point[axis] - expectation[axis]) <= 0.5 * kRig.spacing();
  const double label_err = std::max(std::abs(0.5 * peak.refined[0] - a.p[0]), std::abs(0.5 * peak.refined[1] - a.x[0]));
  Outcome o{imag <= 1e-8 && trace <= 1e-6 && nearest && label_err <= 0.5 * kRig.spacing(), ""};
  o.detail = fmt("max|Im|/peak %.3e, |trace-1| %.3e, peak label error %.3e", imag, trace, label_err) +
             (nearest ? ", argmax is the grid point nearest 2a" : ", argmax NOT nearest 2a");
  return o;
}

Outcome harmonic_rotation() {
  const CoherentLabel start{{0.0}, {1.0}};
  const HamiltonianGenerator g = HamiltonianGenerator::harmonic(1);
  const int steps = 785;
  const Trajectory t = schrodinger_evolve(coherent_state(start, kRig), g, {(kPi / 4) / steps, steps, steps});
  const Peak peak = locate_peak(t.final_state());
  const double peak_err = std::max(std::abs(peak.refined[0] + 1.0), std::abs(peak.refined[1]));
  const PhaseFunction G = g.on(kRig);
  const double e0 = inner(t.states.front(), star(G, t.states.front())).real();
  const double e1 = inner(t.final_state(), star(G, t.final_state())).real();
  const double energy_drift = std::abs(e1 - e0);
  return {peak_err <= 1e-4 && t.invariant_drift <= 1e-6 && energy_drift <= 1e-6,
          fmt("peak error %.3e (limit 1e-4), norm drift %.3e, energy drift %.3e", peak_err, t.invariant_drift,
              energy_drift)};
}

Outcome picture_equivalence() {
  const CoherentLabel a{{0.3}, {0.4}};
  const HamiltonianGenerator g = HamiltonianGenerator::harmonic(1);
  const EvolutionConfig cfg{1.0 / 400, 400, 400};
  const PhaseFunction rho0 = wigner(coherent_state(a, kRig));
  const PhaseFunction rho_t = liouville_evolve(rho0, g, cfg).final_state();
  const PhaseFunction x_t = heisenberg_evolve(poly(X), g, cfg).final_state();
  const double gap = std::abs(trace_pair(poly(X), rho_t) - trace_pair(x_t, rho0));
  return {gap <= 1e-5, fmt("alpha = x, t = 1: |Tr[x rho(t)] - Tr[x(t) rho(0)]| = %.3e (limit 1e-5)", gap)};
}

Outcome overlap_decay() {
  const CoherentLabel a{{0.0}, {0.0}}, b{{0.6}, {0.8}};
  const SweepResult r = overlap_decay_sweep(a, b, kSweep);
  double worst = 0.0;
  const auto k = r.column("k");
  const auto numeric = r.column("numeric");
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double expected = std::exp(-k[i] * k[i] / 2.0);
    worst = std::max(worst, std::abs(numeric[i] - expected) / expected);
  }
  return {worst <= 1e-6, fmt("k in {1,2,4,8}, Delta^2 = 1: max relative error %.3e (limit 1e-6)", worst)};
}

Outcome product_commutativization_check() {
  const SweepResult r = product_commutativization(X, P, kSweep);
  const double slope = fit_for(r, "numeric").slope;
  const auto k = r.column("k");
  const auto comm = r.column("commutator");
  double worst = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) worst = std::max(worst, std::abs(comm[i] - 2.0 / (k[i] * k[i])));
  return {std::abs(slope + 2.0) <= 0.05 && worst <= 1e-8,
          fmt("slope %.6f (target -2 +- 0.05), commutator max |err vs 2/k^2| %.3e", slope, worst)};
}

Outcome bracket_convergence_check() {
  const SweepResult cubic = bracket_convergence(X * X * X, P * P * P, kSweep);
  const double slope = fit_for(cubic, "numeric").slope;
  double quadratic = 0.0;
  for (double v : bracket_convergence(X, P * P, kSweep).column("numeric")) quadratic = std::max(quadratic, v);
  return {std::abs(slope + 4.0) <= 0.1 && quadratic == 0.0,
          fmt("(x^3, p^3) slope %.6f (target -4 +- 0.1), (x, p^2) max error %.1e", slope, quadratic)};
}

Outcome theta_decoupling() {
  const SweepResult r =
      theta_decoupling_scan(CosetAlgebraParams({0.0}, {1.0}, {0.5}, 0.0), CosetPoint{{0.7}, {2.0}, 0.0}, kSweep);
  const double slope = fit_for(r, "numeric").slope;
  return {std::abs(slope + 2.0) <= 1e-12, fmt("slope %.15f (target -2 within 1e-12)", slope)};
}

Outcome classical_transport() {
  const PhaseFunction rho0 = wigner(coherent_state({{0.0}, {0.0}}, kRig));
  const Trajectory t = classical_liouville_evolve(rho0, HamiltonianGenerator::free_particle(1, 1.0), {1.0 / 200, 200, 200});
  const auto expected = oracle::free_transport(oracle::coherent_wigner({{0.0}, {0.0}}).value, 1, 1.0, 1.0).value;
  double transport = 0.0;
  std::vector<double> z(2);
  for (std::size_t i = 0; i < kRig.size(); ++i) {
    kRig.point(i, z.data());
    transport = std::max(transport, std::abs(t.final_state()[i] - expected(z)));
  }
  // Smooth, non-Gaussian test density for the generator identity.
  std::vector<Complex> v(kRig.size());
  for (std::size_t i = 0; i < kRig.size(); ++i) {
    kRig.point(i, z.data());
    v[i] = (1.0 + 0.3 * z[0] * z[1]) * std::exp(-(z[0] - 0.4) * (z[0] - 0.4) / 2.0 - z[1] * z[1] / 3.0);
  }
  const PhaseFunction rho(kRig, v, Role::density);
  const PhaseFunction lhs = FreeParticleTildeGenerator(1.0).apply(rho) * Complex(0.0, -0.5);
  const double identity =
      max_abs_diff(lhs, poisson_bracket(HamiltonianGenerator::free_particle(1, 1.0).on(kRig), rho));
  return {transport <= 1e-4 && identity <= 1e-8,
          fmt("transport error %.3e (limit 1e-4), generator identity error %.3e (limit 1e-8)", transport, identity)};
}

Outcome group_exactness() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> m(-4096, 4096);
  const auto dyadic = [&] { return m(rng) / 1024.0; };
  const auto element = [&](int n) {
    GroupElement g{std::vector<double>(n), std::vector<double>(n), dyadic()};
    for (int i = 0; i < n; ++i) {
      g.p[i] = dyadic();
      g.x[i] = dyadic();
    }
    return g;
  };
  int failures = 0;
  const int checks = 100000;
  for (int trial = 0; trial < checks; ++trial) {
    const int n = 1 + trial % 3;
    const GroupElement a = element(n), b = element(n), c = element(n);
    if (!(compose(compose(a, b), c) == compose(a, compose(b, c)))) ++failures;
    if (!(compose(inverse(a), a) == identity_element(n))) ++failures;
    if (!(compose(a, inverse(a)) == identity_element(n))) ++failures;
  }
  // Coset flows against hand substitution into the coset matrices.
  int coset_failures = 0;
  const auto expect = [&](bool ok) { coset_failures += ok ? 0 : 1; };
  const CosetPoint d1 = phase_space_coset_flow(CosetAlgebraParams({0.0}, {1.0}, {0.0}, 0.0), {{0.0}, {2.0}, 0.0},
                                               ContractionParam(1.0));
  expect(d1.p[0] == 1.0 && d1.x[0] == 0.0 && d1.theta == 2.0);
  const CosetPoint d2 = phase_space_coset_flow(CosetAlgebraParams({0.0}, {1.0}, {0.0}, 0.0), {{0.0}, {2.0}, 0.0},
                                               ContractionParam(10.0));
  expect(d2.p[0] == 1.0 && d2.x[0] == 0.0 && d2.theta == 2.0 / 100.0);
  const CosetPoint d3 = phase_space_coset_flow(CosetAlgebraParams({0.0}, {0.0}, {0.0}, 1.0), {{0.3}, {-0.7}, 5.0},
                                               ContractionParam(1.0));
  expect(d3.p[0] == 0.0 && d3.x[0] == 0.0 && d3.theta == 1.0);
  const ConfigPoint c1 = config_coset_flow(CosetAlgebraParams({0.0}, {1.0}, {0.0}, 0.0), {{3.0}, 0.0});
  expect(c1.x[0] == 0.0 && c1.theta == 3.0);
  const ConfigPoint c2 = config_coset_flow(CosetAlgebraParams({0.0}, {0.0}, {1.0}, 0.0), {{-4.0}, 2.0});
  expect(c2.x[0] == 1.0 && c2.theta == 0.0);
  const ConfigPoint c3 = config_coset_flow(CosetAlgebraParams({0.0}, {0.0}, {0.0}, 0.0), {{1.5}, 0.5});
  expect(c3.x[0] == 0.0 && c3.theta == 0.0);
  return {failures == 0 && coset_failures == 0,
          fmt("%.0f randomized group checks, %.0f failures; coset hand values, %.0f mismatches", 3.0 * checks, failures,
              coset_failures)};
}

}  // namespace

/// Runs every criterion, or only those numbered on the command line.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"coherent-overlap agreement", coherent_overlap_agreement},
      {"canonical commutator", canonical_commutator},
      {"trace-formula duality", trace_duality},
      {"Wigner properties", wigner_properties},
      {"harmonic rotation", harmonic_rotation},
      {"picture equivalence", picture_equivalence},
      {"overlap decay", overlap_decay},
      {"product commutativization", product_commutativization_check},
      {"bracket convergence", bracket_convergence_check},
      {"theta decoupling", theta_decoupling},
      {"free-particle classical transport", classical_transport},
      {"group/coset exactness", group_exactness},
  };
  std::vector<std::size_t> selected;
  for (int a = 1; a < argc; ++a) {
    const int n = std::atoi(argv[a]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "criterion number must be 1..%zu\n", criteria.size());
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(n - 1));
  }
  if (selected.empty())
    for (std::size_t i = 0; i < criteria.size(); ++i) selected.push_back(i);
  int failed = 0;
  for (std::size_t i : selected) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%zu/%zu criteria passed\n", selected.size() - failed, selected.size());
  return failed == 0 ? 0 : 1;
}
