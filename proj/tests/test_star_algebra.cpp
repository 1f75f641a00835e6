#include <doctest.h>

#include "support.hpp"
#include "wwgm/analytic_oracle.hpp"
#include "wwgm/errors.hpp"
#include "wwgm/star_algebra.hpp"

using namespace wwgm;
using wwgm::test::max_diff;

namespace {

const PhaseGrid kGrid(1, 64, 8.0);

PhaseFunction poly(const Polynomial& p) { return PhaseFunction::from_polynomial(kGrid, p); }
const Polynomial X = Polynomial::x(1);
const Polynomial P = Polynomial::p(1);

}  // namespace

TEST_SUITE("star_algebra") {
  TEST_CASE("unit is neutral") {
    const PhaseFunction one = PhaseFunction::constant(kGrid, 1.0);
    const PhaseFunction f = test::smooth_field(kGrid);
    CHECK(max_abs_diff(star(one, f), f) < 1e-13);
    CHECK(max_abs_diff(star(f, one), f) < 1e-13);
    CHECK(max_abs_diff(star(one, poly(X * P)), poly(X * P)) == 0.0);
  }

  TEST_CASE("x star p and the canonical commutator") {
    for (const StarMethod& m : {StarMethod::spectral(), StarMethod::series(4)}) {
      const PhaseFunction xp = star(poly(X), poly(P), m);
      CHECK(max_diff(xp, [](std::span<const double> z) { return Complex(z[1] * z[0], 1.0); }) < 1e-12);
      const PhaseFunction comm = moyal_bracket(poly(X), poly(P), m);
      CHECK(max_diff(comm, [](std::span<const double>) { return Complex(0.0, 2.0); }) < 1e-12);
    }
  }

  TEST_CASE("polynomial star matches the exact oracle") {
    const int degree = 3;
    for (int k : {1, 2}) {
      for (int a0 = 0; a0 <= degree; ++a0)
        for (int a1 = 0; a0 + a1 <= degree; ++a1)
          for (int b0 = 0; b0 <= degree; ++b0)
            for (int b1 = 0; b0 + b1 <= degree; ++b1) {
              const Exponents ea{a0, a1}, eb{b0, b1};
              const Polynomial lib = star(Polynomial::monomial(1, ea), Polynomial::monomial(1, eb), ContractionParam(k));
              const auto exact = oracle::polynomial_star(1, ea, eb, k).value;
              for (const auto& [e, c] : exact.terms()) REQUIRE(std::abs(lib.coefficient(e) - c.to_complex()) < 1e-14);
              REQUIRE(lib.terms().size() == exact.terms().size());
            }
    }
  }

  TEST_CASE("polynomial star is associative") {
    const Polynomial a = X * X + P, b = P * P * X, c = X * P - Polynomial::constant(1, 3.0);
    const ContractionParam kp(2.0);
    const Polynomial lhs = star(star(a, b, kp), c, kp), rhs = star(a, star(b, c, kp), kp);
    const Polynomial diff = lhs - rhs;
    for (const auto& [e, coef] : diff.terms()) CHECK(std::abs(coef) < 1e-13);
  }

  TEST_CASE("Moyal bracket identities") {
    const PhaseFunction f = test::smooth_field(kGrid);
    CHECK(moyal_bracket(f, f).sup_norm() < 1e-12);
    CHECK(max_diff(moyal_bracket(poly(X), poly(P * P)), [](std::span<const double> z) { return Complex(0.0, 4.0 * z[0]); }) <
          1e-12);
    const PhaseFunction g = poly(X * X * P);
    CHECK(max_abs_diff(moyal_bracket(g, f), moyal_bracket(f, g) * -1.0) < 1e-10);
  }

  TEST_CASE("polynomial actions reproduce the left operators") {
    const PhaseFunction f = test::smooth_field(kGrid);
    CHECK(max_abs_diff(star(poly(X), f), apply_XL(f)) < 1e-12);
    CHECK(max_abs_diff(star(poly(P), f), apply_PL(f)) < 1e-12);
  }

  TEST_CASE("spectral star of two Gaussians agrees with the converged series") {
    // At k = 4 the deformation is 1/16 and the series converges quickly.
    const ContractionParam kp(4.0);
    const PhaseFunction f = test::smooth_field(kGrid);
    const PhaseFunction g = coherent_state({{0.3}, {0.2}}, kGrid).with_role(Role::observable);
    StarDiagnostics diag;
    const PhaseFunction series = star(f, g, StarMethod::series(12), kp, &diag);
    CHECK_FALSE(diag.diverging);
    CHECK(max_abs_diff(star(f, g, StarMethod::spectral(), kp), series) < 1e-9);
  }

  TEST_CASE("a diverging series is reported") {
    const PhaseFunction phi = coherent_state({{0.0}, {0.0}}, kGrid);
    CHECK_THROWS_AS(star(phi, phi.conj(), StarMethod::series(8)), AccuracyError);
    CHECK_THROWS_AS(StarMethod::series(0), ValidationError);
  }

  TEST_CASE("scaled bracket tends to the Poisson bracket") {
    const PhaseFunction a = poly(X * X * X), b = poly(P * P * P);
    const PhaseFunction pb = poisson_bracket(a, b);
    // (x³, p³): the only correction is the third-order term, 6/k⁴.
    for (double k : {1.0, 2.0, 4.0}) {
      const double err = max_abs_diff(scaled_bracket(a, b, StarMethod::spectral(), ContractionParam(k)), pb);
      CHECK(err == doctest::Approx(6.0 / std::pow(k, 4)).epsilon(1e-12));
    }
    CHECK(max_abs_diff(scaled_bracket(poly(X), poly(P * P)), poisson_bracket(poly(X), poly(P * P))) == 0.0);
  }

  TEST_CASE("Poisson bracket") {
    CHECK(max_diff(poisson_bracket(poly(X), poly(P)), [](std::span<const double>) { return Complex(1.0); }) == 0.0);
    CHECK(poisson_bracket(poly(X), poly(X * X)).sup_norm() == 0.0);
    const PhaseFunction f = test::smooth_field(kGrid);
    CHECK(poisson_bracket(f, f).sup_norm() < 1e-12);
  }

  TEST_CASE("Wigner density of a coherent state") {
    const CoherentLabel a{{0.3}, {-0.2}};
    const PhaseFunction phi = coherent_state(a, kGrid);
    const PhaseFunction rho = wigner(phi);
    CHECK(rho.role() == Role::density);
    CHECK(rho.max_imag() <= 1e-8);
    CHECK(max_diff(rho, oracle::coherent_wigner(a).value) < 1e-10);
    const PhaseFunction one = PhaseFunction::constant(kGrid, 1.0);
    CHECK(std::abs(trace_pair(one, rho) - 1.0) < 1e-6);
    CHECK(std::abs(trace_pair(one, rho) - inner(phi, phi)) < 1e-12);
    // The grid argmax is the point nearest the expectation values 2a.
    const Peak peak = locate_peak(rho);
    CHECK(peak.grid_point == std::vector<double>{0.5, -0.5});
    CHECK(std::abs(peak.refined[0] - 2.0 * a.p[0]) < 1e-8);
    CHECK(std::abs(peak.refined[1] - 2.0 * a.x[0]) < 1e-8);
    CHECK(std::abs(trace_pair(poly(X), rho) - 2.0 * a.x[0]) < 1e-10);
    CHECK(std::abs(trace_pair(poly(P), rho) - 2.0 * a.p[0]) < 1e-10);
  }

  TEST_CASE("trace formula duality") {
    const CoherentLabel a{{-0.25}, {0.4}};
    const PhaseFunction phi = coherent_state(a, kGrid);
    const PhaseFunction rho = wigner(phi);
    for (const Polynomial& alpha : {Polynomial::constant(1, 1.0), X, P, X * X}) {
      const PhaseFunction al = poly(alpha);
      CHECK(std::abs(trace_pair(al, rho) - inner(phi, star(al, phi))) < 1e-10);
    }
  }

  TEST_CASE("trace pairing needs a density") {
    CHECK_THROWS_AS(trace_pair(poly(X), coherent_state({{0.0}, {0.0}}, kGrid)), ValidationError);
  }

  TEST_CASE("polynomial actions agree with the series in two dimensions") {
    const PhaseGrid g2(2, 16, 8.0);
    const PhaseFunction f = test::smooth_field(g2);
    const Polynomial G = Polynomial::p(2, 0) * Polynomial::x(2, 1) + Polynomial::x(2, 0) * Polynomial::x(2, 0);
    const PhaseFunction gf = PhaseFunction::from_polynomial(g2, G);
    const PhaseFunction spectral = star(gf, f, StarMethod::spectral(), ContractionParam(2.0));
    const PhaseFunction series = star(gf, f, StarMethod::series(4), ContractionParam(2.0));
    CHECK(max_abs_diff(spectral, series) < 1e-10);
  }
}
