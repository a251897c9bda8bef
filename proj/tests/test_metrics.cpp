#include <doctest.h>

#include <random>

#include "bmlab/metrics.hpp"
#include "bmlab/polygon.hpp"

using namespace bmlab;

namespace {

Rational q(long p, long d = 1) { return frac(p, d); }

VoxelSet box(const GridSpec& g, RationalVector lo, RationalVector hi) { return rasterize_box(lo, hi, g); }

/// [0,2]×[−2,0] plus one cell at (0,2).
VoxelSet spike_scene(long cells_per_unit) {
  GridSpec g({0, -2}, q(1, cells_per_unit), {2 * cells_per_unit, 4 * cells_per_unit + 1});
  VoxelSet a = box(g, {0, -2}, {2, 0});
  a.set({0, 4 * cells_per_unit});
  return a;
}

VoxelSet l_shape(long cells_per_unit) {
  GridSpec g({0, 0}, q(1, cells_per_unit), {cells_per_unit, cells_per_unit});
  return set_union(box(g, {0, 0}, {1, q(1, 2)}), box(g, {0, 0}, {q(1, 2), 1}));
}

}  // namespace

TEST_CASE("convex box has no deficit") {
  GridSpec g({0, 0}, q(1, 16), {32, 32});
  VoxelSet a = box(g, {q(1, 4), q(1, 4)}, {q(3, 2), 1});
  auto r = stability_report(a, q(1, 2), q(1, 2));
  CHECK(r.delta_at <= r.margin_delta);
  CHECK(r.hull_deficit <= r.margin_hull);
  CHECK(r.verdict == "holds");
  CHECK(r.c_n_bound == Rational(pow(Integer(8), 10)) * 2);
}

TEST_CASE("spike scene: delta near 1 and hull deficit near 2") {
  VoxelSet a = spike_scene(128);
  auto r = stability_report(a, q(1, 2), q(1, 2));
  CHECK(abs(r.delta_at - 1) <= q(2, 100));
  CHECK(abs(r.hull_deficit - 2) <= q(4, 100));
  CHECK(r.verdict == "out of regime");
  CHECK(r.ratio.has_value());
}

TEST_CASE("delta equals |D| minus |A cap D|") {
  VoxelSet a = l_shape(16);
  auto r = stability_report(a, q(1, 3), q(1, 3));
  VoxelSet d = interpolated_sumset(a, a, q(1, 3));
  VoxelSet af = refine(a, 3);
  CHECK(r.delta_at == d.measure() - set_intersection(d, af).measure());
  CHECK(r.delta_at >= 0);
  CHECK(r.measure_d >= r.measure_a - r.margin_a);
  CHECK(r.delta_at == interpolation_deficit(a, q(1, 3)));
}

TEST_CASE("refining the grid keeps delta/|A| within margin") {
  auto coarse = stability_report(l_shape(8), q(1, 2), q(1, 2));
  auto fine = stability_report(l_shape(16), q(1, 2), q(1, 2));
  CHECK(abs(coarse.delta_at / coarse.measure_a - fine.delta_at / fine.measure_a) <=
        coarse.margin_delta / coarse.measure_a);
}

TEST_CASE("bad stability inputs") {
  GridSpec g({0, 0}, q(1, 4), {4, 4});
  CHECK_THROWS_AS(stability_report(VoxelSet(g), q(1, 2), q(1, 2)), Error);
  VoxelSet a = box(g, {0, 0}, {1, 1});
  CHECK_THROWS_AS(stability_report(a, q(1, 8), q(1, 4)), Error);
}

TEST_CASE("random perturbed convex sets never violate the bound") {
  std::mt19937_64 rng(5);
  GridSpec g({0, 0}, q(1, 16), {32, 32});
  std::uniform_int_distribution<long> pick(0, 31);
  for (int trial = 0; trial < 10; ++trial) {
    VoxelSet a = box(g, {q(1, 4), q(1, 4)}, {q(7, 4), q(7, 4)});
    for (int k = 0; k < 6; ++k) {
      long x = pick(rng), y = pick(rng);
      if (a.test({x, y}))
        a.reset(a.linear_index({x, y}));
      else
        a.set({x, y});
    }
    auto r = stability_report(a, q(1, 2), q(1, 4));
    CHECK(r.verdict != "violated");
  }
}

TEST_CASE("john epsilon for n=2, tau=1/2") {
  CHECK(john_epsilon_squared(2, q(1, 2), q(1, 4)) == q(1, 256));
  // n = 3: ε² = (b³/2)²·(4/3)³
  CHECK(john_epsilon_squared(3, q(1, 2), q(1, 2)) == q(1, 256) * q(64, 27));
}

TEST_CASE("john check on full P and with a small hole") {
  Simplex p = make_reference_simplex(2);
  GridSpec g({0, 0}, q(1, 64), {128, 64});
  VoxelSet full = rasterize_simplex(p, g, RasterMode::Center);
  auto r = john_point_check({p, full, q(1, 2), q(1, 2), q(1, 4)});
  CHECK(r.inclusion);
  CHECK(r.smallest_b <= q(1, 32));

  // Hole of area below ε/2 = 1/32 at the barycenter.
  VoxelSet holed = set_difference(full, box(g, {q(2, 3) - q(5, 64), q(1, 3) - q(5, 64)},
                                             {q(2, 3) + q(5, 64), q(1, 3) + q(5, 64)}));
  CHECK(set_difference(full, holed).measure() < q(1, 32));
  auto h = john_point_check({p, holed, q(1, 2), q(1, 2), q(1, 4)});
  CHECK(h.precondition);
  CHECK(h.inclusion);
}

TEST_CASE("john check rejects a missing corner cap") {
  Simplex p = make_reference_simplex(2);
  GridSpec g({0, 0}, q(1, 32), {64, 32});
  VoxelSet full = rasterize_simplex(p, g, RasterMode::Center);
  VoxelSet capless = set_difference(full, box(g, {q(3, 2), 0}, {2, q(1, 4)}));
  CHECK_THROWS_AS(john_point_check({p, capless, q(1, 2), q(1, 2), q(1, 4)}), Error);
}

TEST_CASE("fan triangulation of a square") {
  GridSpec g({0, 0}, q(1, 8), {8, 8});
  VoxelSet a = box(g, {0, 0}, {1, 1});
  auto pieces = reduce_to_simplices_2d(a, {q(1, 2), q(1, 2)});
  REQUIRE(pieces.size() == 4);
  Rational total = 0, cells = 0;
  for (const auto& p : pieces) {
    total += p.area;
    cells += p.part.measure();
  }
  CHECK(total == 1);
  CHECK(cells >= 1);
  CHECK_THROWS_AS(reduce_to_simplices_2d(a, {2, 2}), Error);
  CHECK_THROWS_AS(reduce_to_simplices_2d(a, {0, q(1, 2)}), Error);
}

TEST_CASE("fan areas sum to the hull area") {
  VoxelSet a = l_shape(16);
  auto hull = hull_polygon_2d(a);
  auto pieces = reduce_to_simplices_2d(a, {q(1, 3), q(1, 3)});
  Rational total = 0;
  for (const auto& p : pieces) total += p.area;
  // Shoelace oracle.
  Rational twice = 0;
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const auto& u = hull[k];
    const auto& v = hull[(k + 1) % hull.size()];
    twice += u[0] * v[1] - u[1] * v[0];
  }
  CHECK(total == twice / 2);
  auto ineq = reduction_inequalities(a, pieces, q(1, 2), q(1, 2));
  CHECK(ineq.size() == pieces.size());
  for (const auto& p : ineq) CHECK(p.missing_d <= p.missing_a + q(1, 16));
}

TEST_CASE("asymmetry of a convex box is about zero") {
  GridSpec g({0, 0}, q(1, 16), {24, 24});
  VoxelSet a = box(g, {q(1, 4), q(1, 4)}, {q(5, 4), q(3, 4)});
  auto r = asymmetry_index(a, a);
  CHECK(r.value <= r.margin);
}

TEST_CASE("asymmetry of an L shape against itself") {
  VoxelSet a = l_shape(16);
  auto r = asymmetry_index(a, a);
  auto s = stability_report(a, q(1, 2), q(1, 2));
  CHECK(r.value <= r.initial);
  CHECK(r.initial <= 2 * s.hull_deficit / s.measure_a + r.margin);
  // ω_upper ≥ α/2 − margin
  CHECK(s.omega_upper >= r.value / 2 - r.margin);
}

TEST_CASE("asymmetry is translation invariant") {
  VoxelSet a = l_shape(16);
  GridSpec moved({q(3, 2), q(-1, 4)}, a.grid().h, a.grid().extents);
  VoxelSet b(moved);
  b.words() = a.words();
  auto r1 = asymmetry_index(a, a);
  auto r2 = asymmetry_index(a, b);
  CHECK(abs(r1.value - r2.value) <= r1.margin);
  CHECK_THROWS_AS(asymmetry_index(a, VoxelSet(moved)), Error);
}
