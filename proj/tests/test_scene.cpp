#include <doctest.h>

#include "bmlab/examples.hpp"
#include "bmlab/scene.hpp"

using namespace bmlab;

namespace {

Rational q(long p, long d = 1) { return frac(p, d); }

std::string error_of(std::string_view text) {
  try {
    parse_scene(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Input);
    return e.what();
  }
  FAIL("scene parsed");
  return "";
}

const char* kSquareMinusCorner = R"({
  "name": "l_shape",
  "dim": 2,
  "grid": {"origin": ["0", "0"], "h": "1/8", "extents": [8, 8]},
  "set": {"op": "difference", "args": [
    {"op": "box", "lo": [0, 0], "hi": [1, 1]},
    {"op": "box", "lo": ["1/2", "1/2"], "hi": [1, 1]}
  ]}
})";

}  // namespace

TEST_CASE("expression tree evaluates on the declared grid") {
  Scene s = parse_scene(kSquareMinusCorner);
  CHECK(s.name == "l_shape");
  VoxelSet a = evaluate(s);
  CHECK(a.measure() == q(3, 4));
  CHECK(a.grid().h == q(1, 8));
  CHECK_FALSE(s.t.has_value());
}

TEST_CASE("all node kinds") {
  Scene s = parse_scene(R"({"dim": 2, "grid": {"origin": [0, 0], "h": "1/4", "extents": [8, 4]},
    "set": {"op": "union", "args": [
      {"op": "intersection", "args": [{"op": "reference_simplex"}, {"op": "box", "lo": [0, 0], "hi": [1, 1]}]},
      {"op": "simplex", "vertices": [[1, 0], [2, 0], [1, 1]], "raster": "inner"},
      {"op": "point", "at": ["7/4", "3/4"]}]}, "t": "1/3"})");
  VoxelSet a = evaluate(s);
  // [0,1]² ∩ T has area 3/4; its centre-mode raster at h = 1/4 has 12 cells.
  VoxelSet part = set_intersection(rasterize_simplex(make_reference_simplex(2), s.grid, RasterMode::Center),
                                   rasterize_box({q(0), q(0)}, {q(1), q(1)}, s.grid));
  CHECK(part.measure() == q(3, 4));
  CHECK(is_subset(part, a));
  CHECK(a.test(CellIndex{7, 3}));
  CHECK(a.test(CellIndex{4, 0}));
  CHECK(*s.t == q(1, 3));
}

TEST_CASE("syntax errors carry line and column") {
  std::string msg = error_of("{\n  \"dim\": 2,\n  \"grid\": {,}\n}");
  CHECK(msg.find("line 3, column 12") != std::string::npos);
  msg = error_of("{\"dim\": 2");
  CHECK(msg.find("line 1") != std::string::npos);
}

TEST_CASE("structural errors carry the node path") {
  std::string text = kSquareMinusCorner;
  text.replace(text.find("[\"1/2\", \"1/2\"]"), 14, "[\"1/2\"]");
  CHECK(error_of(text).find("/set/args/1/lo") != std::string::npos);
  text = kSquareMinusCorner;
  text.replace(text.find("\"difference\""), 12, "\"xor\"");
  CHECK(error_of(text).find("/set/op") != std::string::npos);
  text = kSquareMinusCorner;
  text.replace(text.find("\"1/8\""), 5, "0.125");
  CHECK(error_of(text).find("/grid/h") != std::string::npos);
  CHECK(error_of(R"({"dim": 2, "grid": {"origin": [0, 0], "h": 1, "extents": [1, 1]}})").find("missing 'set'") !=
        std::string::npos);
  CHECK_THROWS_AS(load_scene("/nonexistent/scene.json"), Error);
}

TEST_CASE("JSON round trip and refinement") {
  Scene s = parse_scene(kSquareMinusCorner);
  Scene back = parse_scene(to_json(s).dump(2));
  CHECK(evaluate(back) == evaluate(s));
  Scene fine = refined(s, 2);
  CHECK(fine.grid.extents == std::vector<long>{16, 16});
  CHECK(evaluate(fine).measure() == q(3, 4));
}

TEST_CASE("example scenes export to the generic format") {
  for (auto [ex, a] : {build_constant_example(2, 2, q(1, 32)), build_exponent_example(2, q(1, 8), q(1, 4), q(1, 64)),
                       build_constant_example(3, 2, q(1, 8)), build_exponent_example(3, q(1, 8), q(1, 4), q(1, 16))}) {
    Scene s = parse_scene(to_json(to_scene(ex)).dump());
    CHECK(evaluate(s) == a);
    CHECK(*s.t == ex.t);
    CHECK(s.expected == ex.expected);
  }
}

TEST_CASE("hole scenes") {
  Scene s = holes_scene(3, 40, 2, q(1, 128));
  Scene again = holes_scene(3, 40, 2, q(1, 128));
  CHECK(to_json(s) == to_json(again));
  VoxelSet a = evaluate(s);
  VoxelSet t = rasterize_simplex(make_reference_simplex(2), s.grid, RasterMode::Center);
  CHECK(is_subset(a, t));
  const Rational removed = t.measure() - a.measure();
  CHECK(removed > 0);
  CHECK(removed <= 40 * 4 * q(1, 128 * 128));
  CHECK(to_json(holes_scene(4, 40, 2, q(1, 128))) != to_json(s));
  CHECK_THROWS_AS(holes_scene(1, 100000, 8, q(1, 16)), Error);

  Scene c = corner_hole_scene(4, q(1, 64));
  VoxelSet ca = evaluate(c);
  CHECK_FALSE(ca.test(CellIndex{0, 0}));
  CHECK(ca.test(CellIndex{4, 0}));
  CHECK(rasterize_simplex(make_reference_simplex(2), c.grid, RasterMode::Center).measure() - ca.measure() ==
        16 * q(1, 64 * 64));
}
