#include "bmlab/scene.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace bmlab {

namespace {

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  fail_input("scene " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const nlohmann::json& field(const nlohmann::json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail_at(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail_at(path, std::string("missing '") + key + "'");
  return *it;
}

RationalVector point_at(const nlohmann::json& j, std::size_t dim, const std::string& path) {
  RationalVector v;
  try {
    v = vector_from_json(j);
  } catch (const Error& e) {
    fail_at(path, e.what());
  }
  if (v.size() != dim) fail_at(path, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
  return v;
}

Rational rational_at(const nlohmann::json& j, const std::string& path) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const Error& e) {
    fail_at(path, e.what());
  }
  fail_at(path, "rationals must be \"p/q\" strings or integers, got " + j.dump());
}

void check_expr(const nlohmann::json& e, std::size_t dim, const std::string& path) {
  const std::string op = [&] {
    const auto& o = field(e, "op", path);
    if (!o.is_string()) fail_at(path + "/op", "expected a string");
    return o.get<std::string>();
  }();
  if (op == "box") {
    RationalVector lo = point_at(field(e, "lo", path), dim, path + "/lo");
    RationalVector hi = point_at(field(e, "hi", path), dim, path + "/hi");
    for (std::size_t k = 0; k < dim; ++k)
      if (lo[k] > hi[k]) fail_at(path, "box has lo > hi");
  } else if (op == "simplex") {
    const auto& vs = field(e, "vertices", path);
    if (!vs.is_array() || vs.size() != dim + 1) fail_at(path + "/vertices", "expected " + std::to_string(dim + 1) + " vertices");
    for (std::size_t k = 0; k < vs.size(); ++k) point_at(vs[k], dim, path + "/vertices/" + std::to_string(k));
    if (e.contains("raster")) {
      try {
        parse_raster_mode(e.at("raster").get<std::string>());
      } catch (const std::exception& x) {
        fail_at(path + "/raster", x.what());
      }
    }
  } else if (op == "reference_simplex") {
  } else if (op == "point") {
    point_at(field(e, "at", path), dim, path + "/at");
  } else if (op == "union" || op == "intersection" || op == "difference") {
    const auto& args = field(e, "args", path);
    if (!args.is_array() || args.empty()) fail_at(path + "/args", "expected a non-empty array");
    for (std::size_t k = 0; k < args.size(); ++k) check_expr(args[k], dim, path + "/args/" + std::to_string(k));
  } else {
    fail_at(path + "/op", "unknown op '" + op + "'");
  }
}

VoxelSet eval(const nlohmann::json& e, const GridSpec& g) {
  const std::string op = e.at("op").get<std::string>();
  const std::size_t dim = g.dim;
  if (op == "box") return rasterize_box(vector_from_json(e.at("lo")), vector_from_json(e.at("hi")), g);
  if (op == "point") return rasterize_point(vector_from_json(e.at("at")), g);
  if (op == "reference_simplex" || op == "simplex") {
    Simplex s = make_reference_simplex(dim);
    if (op == "simplex") {
      std::vector<RationalVector> vs;
      for (const auto& v : e.at("vertices")) vs.push_back(vector_from_json(v));
      s = Simplex(std::move(vs));
    }
    const RasterMode mode = e.contains("raster") ? parse_raster_mode(e.at("raster").get<std::string>()) : RasterMode::Center;
    if (mode == RasterMode::Center) return rasterize_polytope(half_spaces(s), g);
    return rasterize_simplex(s, g, mode);
  }
  const auto& args = e.at("args");
  VoxelSet acc = eval(args[0], g);
  for (std::size_t k = 1; k < args.size(); ++k) {
    VoxelSet b = eval(args[k], g);
    if (op == "union") acc = set_union(acc, b);
    else if (op == "intersection") acc = set_intersection(acc, b);
    else acc = set_difference(acc, b);
  }
  return acc;
}

std::string line_column(std::string_view text, std::size_t byte) {
  if (byte > text.size()) byte = text.size();
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte; ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

nlohmann::json box_expr(const RationalVector& lo, const RationalVector& hi) {
  return {{"op", "box"}, {"lo", to_json(lo)}, {"hi", to_json(hi)}};
}

GridSpec triangle_grid(const Rational& h) {
  const Rational cells = 1 / h;
  if (h <= 0 || cells.get_den() != 1) fail_input("grid step must be 1/m");
  const long m = to_long(cells.get_num());
  return GridSpec({Rational(0), Rational(0)}, h, {2 * m, m});
}

}  // namespace

Scene parse_scene(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::string msg = e.what();
    // Drop the library's own prefix, keep the reason.
    if (auto at = msg.find(": syntax error"); at != std::string::npos) msg = msg.substr(at + 2);
    fail_input("scene parse error at " + line_column(text, e.byte) + ": " + msg);
  }
  Scene s;
  if (!j.is_object()) fail_at("", "expected an object");
  s.name = j.value("name", std::string("scene"));
  const auto& dj = field(j, "dim", "");
  if (!dj.is_number_unsigned() || dj.get<std::size_t>() < 1) fail_at("/dim", "expected a positive integer");
  const std::size_t dim = dj.get<std::size_t>();
  const auto& gj = field(j, "grid", "");
  point_at(field(gj, "origin", "/grid"), dim, "/grid/origin");
  const Rational h = rational_at(field(gj, "h", "/grid"), "/grid/h");
  if (h <= 0) fail_at("/grid/h", "must be positive");
  const auto& ej = field(gj, "extents", "/grid");
  if (!ej.is_array() || ej.size() != dim) fail_at("/grid/extents", "expected " + std::to_string(dim) + " integers");
  for (std::size_t k = 0; k < dim; ++k)
    if (!ej[k].is_number_integer() || ej[k].get<long>() < 1)
      fail_at("/grid/extents/" + std::to_string(k), "expected a positive integer");
  try {
    s.grid = grid_from_json(gj);
  } catch (const Error& e) {
    fail_at("/grid", e.what());
  }
  s.set = field(j, "set", "");
  check_expr(s.set, dim, "/set");
  if (j.contains("t")) s.t = rational_at(j.at("t"), "/t");
  if (j.contains("expected")) {
    const auto& ex = j.at("expected");
    if (!ex.is_object()) fail_at("/expected", "expected an object");
    for (const auto& [k, v] : ex.items()) {
      if (k != "hull_deficit" && k != "delta_At") fail_at("/expected/" + k, "unknown quantity");
      s.expected[k] = rational_at(v, "/expected/" + k);
    }
  }
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_input("cannot open scene file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scene(buf.str());
  } catch (const Error& e) {
    fail_input(path + ": " + e.what());
  }
}

nlohmann::json to_json(const Scene& s) {
  nlohmann::json j = {{"name", s.name}, {"dim", s.grid.dim}, {"grid", grid_to_json(s.grid)}, {"set", s.set}};
  j["grid"].erase("dim");
  if (s.t) j["t"] = to_string(*s.t);
  if (!s.expected.empty()) {
    nlohmann::json ex = nlohmann::json::object();
    for (const auto& [k, v] : s.expected) ex[k] = to_string(v);
    j["expected"] = ex;
  }
  return j;
}

VoxelSet evaluate(const Scene& s) { return eval(s.set, s.grid); }

Scene refined(const Scene& s, long factor) {
  Scene out = s;
  out.grid = s.grid.refined(factor);
  return out;
}

Scene holes_scene(std::uint64_t seed, long holes, long side, const Rational& h) {
  Scene s;
  s.name = "holes_" + std::to_string(seed);
  s.grid = triangle_grid(h);
  const long m = s.grid.extents[1];
  // Hole corners (x, y) in cells with the square inside the triangle x/2 + y <= m,
  // kept a hole-width away from the edges.
  if (side < 1 || m - 3 * side < side) fail_input("holes do not fit at this resolution");
  std::mt19937_64 rng(seed);
  nlohmann::json args = nlohmann::json::array({{{"op", "reference_simplex"}}});
  long placed = 0;
  for (long tries = 0; placed < holes && tries < 1000 * holes; ++tries) {
    const long x = std::uniform_int_distribution<long>(side, 2 * m - 3 * side)(rng);
    const long y = std::uniform_int_distribution<long>(side, m - 3 * side)(rng);
    if (2 * (y + 2 * side) + x + 2 * side > 2 * m) continue;
    args.push_back(box_expr({x * h, y * h}, {(x + side) * h, (y + side) * h}));
    ++placed;
  }
  if (placed < holes) fail_input("holes do not fit at this resolution");
  s.set = {{"op", "difference"}, {"args", args}};
  return s;
}

Scene corner_hole_scene(long side, const Rational& h) {
  Scene s;
  s.name = "corner_hole";
  s.grid = triangle_grid(h);
  if (side < 1 || side >= s.grid.extents[1] / 2) fail_input("corner hole side out of range");
  s.set = {{"op", "difference"},
           {"args", {{{"op", "reference_simplex"}}, box_expr({Rational(0), Rational(0)}, {side * h, side * h})}}};
  return s;
}

}  // namespace bmlab
