#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "bmlab/voxel.hpp"

namespace bmlab {

/// A scene file:
///   {"name": ..., "dim": n, "grid": {"origin", "h", "extents"}, "set": expr,
///    "t": "p/q"?, "expected": {"hull_deficit": "p/q", "delta_At": "p/q"}?}
/// where expr is one of
///   {"op": "box", "lo": [...], "hi": [...]}
///   {"op": "simplex", "vertices": [[...], ...], "raster": "center"|"inner"|"outer"}
///   {"op": "reference_simplex"}
///   {"op": "point", "at": [...]}
///   {"op": "union" | "intersection", "args": [expr, ...]}
///   {"op": "difference", "args": [expr, expr, ...]}   first minus the rest
/// Rationals are "p/q" strings or integers.
struct Scene {
  std::string name;
  GridSpec grid;
  nlohmann::json set;
  std::optional<Rational> t;
  std::map<std::string, Rational> expected;
};

/// Errors carry "line L, column C" for syntax problems and the JSON pointer
/// of the offending node for structural ones.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::string& path);
nlohmann::json to_json(const Scene& s);

VoxelSet evaluate(const Scene& s);

/// Same scene at cell size h/factor.
Scene refined(const Scene& s, long factor);

/// Reference triangle minus `holes` seeded square holes of `side` cells,
/// each well inside the triangle.
Scene holes_scene(std::uint64_t seed, long holes, long side, const Rational& h);
/// Reference triangle minus one square hole of `side` cells at its right-angle corner.
Scene corner_hole_scene(long side, const Rational& h);

}  // namespace bmlab
