#include <doctest.h>

#include "bmlab/properties.hpp"

using namespace bmlab;

TEST_CASE("exact-geometry algebra") {
  auto a = check_homothety_composition(100, 1);
  CHECK(a.cases == 100);
  CHECK_MESSAGE(a.failures == 0, a.first_failure);
  auto b = check_volume_homogeneity(100, 2);
  CHECK(b.cases == 100);
  CHECK_MESSAGE(b.failures == 0, b.first_failure);
}

TEST_CASE("voxel inclusion-exclusion") {
  auto r = check_inclusion_exclusion(100, 3);
  CHECK(r.cases == 100);
  CHECK_MESSAGE(r.failures == 0, r.first_failure);
}

TEST_CASE("translate claim on 50 grid instances") {
  auto r = check_translate_claim(50, 4);
  CHECK(r.cases == 50);
  CHECK_MESSAGE(r.failures == 0, r.first_failure);
}

TEST_CASE("translate claim instances") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    TranslateClaim c = translate_claim_instance(2, Rational(1, 3), seed);
    CHECK(c.v == Rational(1, 4));
    CHECK(c.v_prime <= c.v / 4);
    // Cell unions are honest sets, so the claim holds without the margin.
    CHECK(c.sumset >= c.v - c.v_prime);
    CHECK(c.holds);
  }
  TranslateClaim a = translate_claim_instance(1, Rational(1, 2), 9);
  TranslateClaim b = translate_claim_instance(1, Rational(1, 2), 9);
  CHECK(a.sumset == b.sumset);
  CHECK(a.v == Rational(1, 2));
  CHECK_THROWS_AS(translate_claim_instance(3, Rational(1, 2), 0), Error);
  CHECK_THROWS_AS(translate_claim_instance(2, Rational(1), 0), Error);
}
