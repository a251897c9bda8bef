#include <doctest.h>

#include "bmlab/covers.hpp"

using namespace bmlab;

namespace {

Rational q(long p, long d = 1) { return frac(p, d); }

const CoverCertificate& desk_cover() {
  static const CoverCertificate c = [] {
    Simplex t = make_reference_simplex(2);
    return rogers_cover(t, compute_cover_params(2, q(1, 2), CoverMode::Desk, 5), 11);
  }();
  return c;
}

/// T minus a scatter of small square holes.
VoxelSet holed_triangle(const GridSpec& g, long holes, long side) {
  Simplex t = make_reference_simplex(2);
  VoxelSet a = rasterize_simplex(t, g, RasterMode::Center);
  for (long j = 0; j < holes; ++j) {
    // Holes along a diagonal band, well inside T.
    long x = 20 + (j * 37) % 160, y = 12 + (j * 23) % 60;
    if (frac(x, 256) / 2 + frac(y, 128) > q(3, 4)) continue;
    for (long dx = 0; dx < side; ++dx)
      for (long dy = 0; dy < side; ++dy) a.reset(a.linear_index({x + dx, y + dy}));
  }
  return a;
}

}  // namespace

TEST_CASE("full-scale i for n=2, t=1/2") {
  auto p = compute_cover_params(2, q(1, 2), CoverMode::Paper);
  CHECK(p.i == 10);
  CHECK(p.mu == q(1, 1024));
  CHECK(p.eta_pow_n == q(1, 2 * 1024 * 1024));
  CHECK(p.eta.lo <= p.eta.hi);
  CHECK(p.eta.hi <= p.eta_hat);
  for (const auto& line : audit_cover_params(p)) CHECK_MESSAGE(line.holds, line.name);
}

TEST_CASE("desk-mode constants") {
  auto p = compute_cover_params(2, q(1, 2), CoverMode::Desk, 5);
  CHECK(p.i == 5);
  CHECK(p.mu == q(1, 32));
  // η² = 2^-11
  CHECK(p.eta_pow_n == q(1, 2048));
  CHECK(p.eta.lo * p.eta.lo <= q(1, 2048));
  CHECK(p.eta.hi * p.eta.hi >= q(1, 2048));
  CHECK(p.zeta_hat == 3 * p.eta_hat);
}

TEST_CASE("parameter range errors") {
  CHECK_THROWS_AS(compute_cover_params(2, 0, CoverMode::Paper), Error);
  CHECK_THROWS_AS(compute_cover_params(2, q(3, 4), CoverMode::Paper), Error);
  CHECK_THROWS_AS(compute_cover_params(1, q(1, 2), CoverMode::Paper), Error);
}

TEST_CASE("full-scale audits pass for n = 2..10") {
  for (std::size_t n = 2; n <= 10; ++n) {
    for (const Rational& t : {q(1, 2), q(1, 3)}) {
      auto p = compute_cover_params(n, t, CoverMode::Paper);
      // Integer oracle for i: (1−t)^i (2n)^5 ≤ n^{1/n} iff ((1−t)^i (2n)^5)^n ≤ n.
      Rational big = pow(Rational(2 * static_cast<long>(n)), 5);
      CHECK(pow(p.mu * big, n) <= Rational(static_cast<long>(n)));
      CHECK(pow(p.mu / (1 - t) * big, n) > Rational(static_cast<long>(n)));
      for (const auto& line : audit_cover_params(p)) {
        if (line.name.rfind("eta^{-n}/(2n)", 0) == 0) {
          // The last cardinality step is not implied by the eta range; compare to a direct oracle.
          Rational lhs = Rational(1) / (2 * pow(p.mu, n));
          CHECK(line.holds == (lhs <= Rational(pow(Integer(2 * static_cast<long>(n)), 5 * n))));
        } else {
          CHECK_MESSAGE(line.holds, n << " " << line.name);
        }
      }
    }
  }
}

TEST_CASE("slab ratios and sampled translates") {
  Simplex t = make_reference_simplex(2);
  auto p = compute_cover_params(2, q(1, 2), CoverMode::Desk, 5);
  Slab s = build_slab(t, p);
  CHECK(volume(s.r) == pow(1 - p.zeta_hat, 2));
  CHECK(s.volume_l <= 4 * 2 * 3 * p.eta_hat);
  CHECK(slab_sample_check(t, p, 500, 3) == 500);
  CHECK_THROWS_AS(build_slab(t, compute_cover_params(2, q(1, 2), CoverMode::Desk, 1)), Error);
}

TEST_CASE("desk cover of T minus R") {
  const auto& c = desk_cover();
  CHECK(c.facts.coverage_checked);
  CHECK(c.facts.uncovered_cells == 0);
  CHECK(c.facts.covers_target);
  CHECK(c.facts.all_inside_t);
  CHECK(c.facts.same_size);
  CHECK(c.facts.witness_resolution == q(1, 512));
  CHECK(c.facts.total_volume == Rational(static_cast<long>(c.members.size())) * c.params.eta_pow_n);
  // Count accounting against |L|·density/|ηT|.
  Slab s = build_slab(c.base, c.params);
  CHECK(c.facts.total_volume <= s.volume_l * c.lattice_density * pow(c.params.eta_hat, 2) / c.params.eta_pow_n);
}

TEST_CASE("certificate JSON roundtrip reproduces facts") {
  const auto& c = desk_cover();
  CoverCertificate back = certificate_from_json(to_json(c));
  CHECK(back.members == c.members);
  CHECK(back.facts == c.facts);
}

TEST_CASE("tampered certificate loses coverage") {
  CoverCertificate c = desk_cover();
  std::vector<Simplex> kept;
  for (std::size_t m = 0; m < c.members.size(); m += 2) kept.push_back(c.members[m]);
  c.members = kept;
  c.multiplicity.assign(kept.size(), 1);
  CoverFacts f = verify_certificate(c, true, q(1, 512));
  CHECK(f.uncovered_cells > 0);
  CHECK_FALSE(f.covers_target);
}

TEST_CASE("lifting doubles the nominal volume and keeps coverage") {
  const auto& b = desk_cover();
  CoverCertificate a = lift_cover(b, b.base, b.params);
  CHECK(a.facts.total_volume == 2 * b.facts.total_volume);
  CHECK(a.members.size() <= b.members.size());
  CHECK(a.facts.covers_target);
  CHECK(a.facts.all_inside_t);
  CHECK(a.facts.same_size);
  CHECK(Integer(a.k_max_used) <= a.k_prime_effective);
}

TEST_CASE("main bound on full T holds trivially") {
  Simplex t = make_reference_simplex(2);
  GridSpec g({0, 0}, q(1, 128), {256, 128});
  VoxelSet a = rasterize_simplex(t, g, RasterMode::Center);
  const auto& b = desk_cover();
  CoverCertificate lifted = lift_cover(b, t, b.params, false);
  auto rep = assemble_main_bound(a, t, q(1, 2), lifted, b.params.i, 2);
  CHECK(rep.r_inside_d);
  CHECK(rep.all_links_hold);
  CHECK(rep.final_holds);
}

TEST_CASE("main bound with scattered holes") {
  Simplex t = make_reference_simplex(2);
  GridSpec g({0, 0}, q(1, 128), {256, 128});
  VoxelSet a = holed_triangle(g, 40, 2);
  Rational full = rasterize_simplex(t, g, RasterMode::Center).measure();
  CHECK((full - a.measure()) / full < q(2, 100));
  const auto& b = desk_cover();
  CoverCertificate lifted = lift_cover(b, t, b.params, false);
  auto rep = assemble_main_bound(a, t, q(1, 2), lifted, b.params.i, 2);
  CHECK(rep.r_inside_d);
  for (const auto& l : rep.links)
    if (!l.informational) CHECK_MESSAGE(l.holds, l.name);
  CHECK(rep.final_holds);
}
