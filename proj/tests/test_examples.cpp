#include <doctest.h>

#include "bmlab/examples.hpp"

using namespace bmlab;

namespace {
Rational q(long p, long d = 1) { return frac(p, d); }
}  // namespace

TEST_CASE("exponent example expected values") {
  auto [s, a] = build_exponent_example(2, q(1, 16), q(1, 4), q(1, 256));
  CHECK(s.expected.at("hull_deficit") == q(1, 32));
  CHECK(s.expected.at("delta_At") == q(5, 256));
  auto [s2, a2] = build_exponent_example(2, q(1, 32), q(1, 4), q(1, 256));
  CHECK(s.expected.at("delta_At") == 2 * s2.expected.at("delta_At"));
  CHECK(s.expected.at("hull_deficit") == 2 * s2.expected.at("hull_deficit"));
  CHECK(a.measure() == 1 + q(1, 256 * 256));
}

TEST_CASE("exponent example errors") {
  CHECK_THROWS_AS(build_exponent_example(2, q(1, 4), q(1, 4), q(1, 256)), Error);
  CHECK_THROWS_AS(build_exponent_example(2, q(1, 16), q(3, 4), q(1, 256)), Error);
  CHECK_THROWS_AS(build_exponent_example(1, q(1, 16), q(1, 4), q(1, 256)), Error);
  CHECK_THROWS_AS(build_exponent_example(2, q(1, 16), q(1, 4), q(1, 24)), Error);
}

TEST_CASE("exponent example measured at h = 1/256") {
  auto [s, a] = build_exponent_example(2, q(1, 16), q(1, 4), q(1, 256));
  auto v = verify_scene(s, a, q(5, 100));
  CHECK(v.strict);
  CHECK(v.pass);
}

TEST_CASE("exponent example in three dimensions keeps the planar values") {
  auto [s, a] = build_exponent_example(3, q(1, 8), q(1, 4), q(1, 64));
  auto v = verify_scene(s, a, q(5, 100));
  CHECK(s.expected.at("hull_deficit") == q(1, 16));
  CHECK(v.strict);
}

TEST_CASE("constant example n=2 and n=3") {
  auto [s2, a2] = build_constant_example(2, 2, q(1, 128));
  CHECK(s2.expected.at("hull_deficit") == 2);
  CHECK(verify_scene(s2, a2, q(2, 100)).strict);
  auto [s3, a3] = build_constant_example(3, 2, q(1, 32));
  CHECK(s3.expected.at("hull_deficit") == q(8, 3));
  CHECK(verify_scene(s3, a3, q(8, 100)).strict);
  CHECK_THROWS_AS(build_constant_example(2, 1, q(1, 8)), Error);
  CHECK_THROWS_AS(build_constant_example(5, 2, q(1, 8)), Error);
}

TEST_CASE("larger R changes nothing") {
  auto [s, a] = build_constant_example(2, 3, q(1, 64));
  auto v = verify_scene(s, a, q(4, 100));
  CHECK(v.strict);
}

TEST_CASE("a wrong expected value produces a failing entry") {
  auto [s, a] = build_constant_example(2, 2, q(1, 64));
  s.expected["delta_At"] = 2;
  auto v = verify_scene(s, a, q(2, 100));
  CHECK_FALSE(v.pass);
  CHECK_FALSE(v.strict);
}

TEST_CASE("implied lower bound on the constant") {
  for (std::size_t n = 2; n <= 10; ++n) {
    auto c = compare_constants(n);
    CHECK(c.consistent);
    CHECK(c.implied_lower == pow(Rational(2), n - 1) / Rational(static_cast<long>(n)));
  }
}

TEST_CASE("scene JSON roundtrip") {
  auto [s, a] = build_exponent_example(2, q(1, 16), q(1, 4), q(1, 128));
  ExampleScene back = scene_from_json(to_json(s));
  CHECK(back.expected == s.expected);
  CHECK(realize(back) == a);
}

TEST_CASE("log-log slope of the exponent family") {
  auto r = exponent_slope(2, {q(1, 8), q(1, 16), q(1, 32), q(1, 64)}, q(1, 4));
  CHECK(r.points.size() == 4);
  CHECK(r.slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("measured values converge at least linearly in h") {
  auto [s, a] = build_constant_example(2, 2, q(1, 16));
  auto c = convergence_study(s, 3);
  CHECK(c.hull_rate >= 0.9);
  CHECK(c.delta_rate >= 0.9);
  auto [e, b] = build_exponent_example(2, q(1, 8), q(1, 4), q(1, 128));
  auto d = convergence_study(e, 3);
  CHECK(d.hull_rate >= 0.9);
  CHECK(d.delta_rate >= 0.9);
}

TEST_CASE("slope fit on exact power laws") {
  CHECK(loglog_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(loglog_slope({1}, {1}), Error);
}
