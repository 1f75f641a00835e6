#include <doctest.h>

#include <random>

#include "wwgm/errors.hpp"
#include "wwgm/heisenberg_group.hpp"

using namespace wwgm;

namespace {

/// Dyadic rationals m/1024 make every sum and product in the group law exact.
double dyadic(std::mt19937_64& rng) {
  return static_cast<double>(std::uniform_int_distribution<int>(-4096, 4096)(rng)) / 1024.0;
}

GroupElement random_element(std::mt19937_64& rng, int n) {
  GroupElement g{std::vector<double>(n), std::vector<double>(n), dyadic(rng)};
  for (int i = 0; i < n; ++i) {
    g.p[i] = dyadic(rng);
    g.x[i] = dyadic(rng);
  }
  return g;
}

}  // namespace

TEST_SUITE("heisenberg_group") {
  TEST_CASE("compose with identity") {
    const GroupElement g({0.5, -1.25}, {2.0, 0.75}, 0.125);
    CHECK(compose(identity_element(2), g) == g);
    CHECK(compose(g, identity_element(2)) == g);
  }

  TEST_CASE("twist of two unit translations") {
    const GroupElement r = compose(GroupElement({1.0}, {0.0}, 0.0), GroupElement({0.0}, {1.0}, 0.0));
    CHECK(r == GroupElement({1.0}, {1.0}, 1.0));
  }

  TEST_CASE("compose with the negated element gives the identity") {
    const GroupElement g({1.5}, {-0.5}, 2.0);
    CHECK(compose(g, GroupElement({-1.5}, {0.5}, -2.0)) == identity_element(1));
  }

  TEST_CASE("inverse") {
    CHECK(inverse(identity_element(1)) == identity_element(1));
    CHECK(inverse(GroupElement({1.0}, {1.0}, 1.0)) == GroupElement({-1.0}, {-1.0}, -1.0));
  }

  TEST_CASE("randomized group axioms hold exactly") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10000; ++trial) {
      const int n = 1 + trial % 3;
      const GroupElement a = random_element(rng, n), b = random_element(rng, n), c = random_element(rng, n);
      REQUIRE(compose(inverse(a), a) == identity_element(n));
      REQUIRE(compose(a, inverse(a)) == identity_element(n));
      REQUIRE(compose(compose(a, b), c) == compose(a, compose(b, c)));
    }
  }

  TEST_CASE("twist is antisymmetric") {
    const GroupElement a({0.5}, {2.0}, 0.0), b({-1.0}, {0.25}, 0.0);
    CHECK(twist(a, b) == -twist(b, a));
  }

  TEST_CASE("mismatched dimensions are rejected") {
    CHECK_THROWS_AS(compose(identity_element(1), identity_element(2)), ValidationError);
  }

  TEST_CASE("phase-space coset flow") {
    const ContractionParam k1(1.0);
    const CosetPoint point{{0.3}, {-1.2}, 0.7};
    const CosetPoint pure_phase = phase_space_coset_flow(CosetAlgebraParams({0.0}, {0.0}, {0.0}, 1.0), point, k1);
    CHECK(pure_phase.p == std::vector<double>{0.0});
    CHECK(pure_phase.x == std::vector<double>{0.0});
    CHECK(pure_phase.theta == 1.0);

    const CosetAlgebraParams push({0.0}, {1.0}, {0.0}, 0.0);
    const CosetPoint d = phase_space_coset_flow(push, CosetPoint{{0.0}, {2.0}, 0.0}, k1);
    CHECK(d.p == std::vector<double>{1.0});
    CHECK(d.x == std::vector<double>{0.0});
    CHECK(d.theta == 2.0);

    const CosetPoint d10 = phase_space_coset_flow(push, CosetPoint{{0.0}, {2.0}, 0.0}, ContractionParam(10.0));
    CHECK(d10.theta == doctest::Approx(0.02).epsilon(1e-15));
  }

  TEST_CASE("configuration coset flow") {
    const ConfigPoint d0 = config_coset_flow(CosetAlgebraParams({0.0}, {0.0}, {0.0}, 0.0), ConfigPoint{{1.0}, 0.5});
    CHECK(d0.x == std::vector<double>{0.0});
    CHECK(d0.theta == 0.0);
    const ConfigPoint d1 = config_coset_flow(CosetAlgebraParams({0.0}, {1.0}, {0.0}, 0.0), ConfigPoint{{3.0}, 0.0});
    CHECK(d1.x == std::vector<double>{0.0});
    CHECK(d1.theta == 3.0);
    const ConfigPoint d2 = config_coset_flow(CosetAlgebraParams({0.0}, {0.0}, {1.0}, 0.0), ConfigPoint{{-2.0}, 4.0});
    CHECK(d2.x == std::vector<double>{1.0});
    CHECK(d2.theta == 0.0);
  }

  TEST_CASE("rotation block acts on both coordinates") {
    // ω = [[0, 1], [-1, 0]] rotates (x1, x2) and (p1, p2) alike.
    const CosetAlgebraParams rot({0.0, 1.0, -1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, 0.0);
    const CosetPoint d = phase_space_coset_flow(rot, CosetPoint{{1.0, 0.0}, {0.0, 1.0}, 0.0}, ContractionParam(1.0));
    const ConfigPoint c = config_coset_flow(rot, ConfigPoint{{0.0, 1.0}, 0.0});
    CHECK(d.x == c.x);
    CHECK(d.theta == 0.0);
  }

  TEST_CASE("contraction of coordinates") {
    const GroupElement g({1.0}, {1.0}, 0.0);
    CHECK(contract_coordinates(g, ContractionParam(1.0)) == g);
    CHECK(contract_coordinates(g, ContractionParam(2.0)) == GroupElement({2.0}, {2.0}, 0.0));
    const GroupElement h({0.75}, {-1.5}, 0.25);
    CHECK(contract_coordinates(contract_coordinates(h, ContractionParam(4.0)), ContractionParam(0.25)) == h);
  }

  TEST_CASE("contraction parameter") {
    CHECK(ContractionParam(2.0).hbar_eff() == 0.5);
    CHECK_THROWS_AS(ContractionParam(0.0), ValidationError);
  }
}
