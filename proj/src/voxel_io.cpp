#include <istream>
#include <ostream>
#include <sstream>

#include "bmlab/voxel.hpp"

namespace bmlab {

nlohmann::json grid_to_json(const GridSpec& g) {
  return {{"dim", g.dim}, {"origin", to_json(g.origin)}, {"h", to_string(g.h)}, {"extents", g.extents}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
  try {
    RationalVector origin = vector_from_json(j.at("origin"));
    const auto& hj = j.at("h");
    Rational h = hj.is_string() ? parse_rational(hj.get<std::string>()) : Rational(hj.get<long>());
    std::vector<long> ext = j.at("extents").get<std::vector<long>>();
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != origin.size())
      fail_input("grid dim does not match origin");
    return GridSpec(origin, h, ext);
  } catch (const nlohmann::json::exception& e) {
    fail_input(std::string("malformed grid: ") + e.what());
  }
}

nlohmann::json to_json(const VoxelSet& a) {
  nlohmann::json cells = nlohmann::json::array();
  const std::size_t total = a.grid().cell_count();
  for (std::size_t i = 0; i < total; ++i)
    if (a.test(i)) cells.push_back(a.cell_of(i));
  return {{"grid", grid_to_json(a.grid())}, {"cells", cells}};
}

VoxelSet voxels_from_json(const nlohmann::json& j) {
  VoxelSet out(grid_from_json(j.at("grid")));
  try {
    for (const auto& c : j.at("cells")) {
      CellIndex idx = c.get<CellIndex>();
      if (idx.size() != out.dim() || !out.in_grid(idx)) fail_input("cell outside grid");
      out.set(idx);
    }
  } catch (const nlohmann::json::exception& e) {
    fail_input(std::string("malformed voxel set: ") + e.what());
  }
  return out;
}

void write_binary(std::ostream& os, const VoxelSet& a) {
  const GridSpec& g = a.grid();
  os << "BMVOX1\n";
  os << "dim " << g.dim << "\n";
  os << "origin";
  for (const auto& x : g.origin) os << ' ' << to_string(x);
  os << "\nh " << to_string(g.h) << "\nextents";
  for (long e : g.extents) os << ' ' << e;
  const std::size_t nbytes = (g.cell_count() + 7) / 8;
  os << "\nbits " << nbytes << "\n";
  for (std::size_t b = 0; b < nbytes; ++b) {
    auto byte = static_cast<unsigned char>(a.words()[b / 8] >> (8 * (b % 8)));
    os.put(static_cast<char>(byte));
  }
}

VoxelSet read_binary(std::istream& is) {
  std::string line;
  auto expect = [&](const std::string& key) {
    if (!std::getline(is, line)) fail_input("truncated voxel file");
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) fail_input("voxel file: expected '" + key + "'");
    std::vector<std::string> fields;
    std::string f;
    while (ls >> f) fields.push_back(f);
    return fields;
  };
  if (!std::getline(is, line) || line != "BMVOX1") fail_input("not a voxel file");
  auto dim = expect("dim");
  auto origin_s = expect("origin");
  auto h_s = expect("h");
  auto ext_s = expect("extents");
  auto bits_s = expect("bits");
  if (dim.size() != 1 || h_s.size() != 1 || bits_s.size() != 1) fail_input("voxel file: bad header");
  RationalVector origin;
  for (const auto& s : origin_s) origin.push_back(parse_rational(s));
  std::vector<long> ext;
  for (const auto& s : ext_s) ext.push_back(std::stol(s));
  if (origin.size() != std::stoul(dim[0])) fail_input("voxel file: dim mismatch");
  VoxelSet out(GridSpec(origin, parse_rational(h_s[0]), ext));
  const std::size_t nbytes = (out.grid().cell_count() + 7) / 8;
  if (std::stoul(bits_s[0]) != nbytes) fail_input("voxel file: bit count mismatch");
  for (std::size_t b = 0; b < nbytes; ++b) {
    int c = is.get();
    if (c == EOF) fail_input("voxel file: truncated bit array");
    out.words()[b / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * (b % 8));
  }
  return out;
}

}  // namespace bmlab
