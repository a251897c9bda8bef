#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bmlab/geometry.hpp"

namespace bmlab {

/// Axis-aligned grid: cell c covers origin + h·[c, c+1] (componentwise).
/// Linear cell index runs fastest along axis 0.
struct GridSpec {
  std::size_t dim = 0;
  RationalVector origin;
  Rational h;
  std::vector<long> extents;

  GridSpec() = default;
  GridSpec(RationalVector origin, Rational h, std::vector<long> extents);

  std::size_t cell_count() const;
  Rational cell_volume() const { return pow(h, dim); }
  /// Box [origin, origin + h·extents] as lower/upper corners.
  RationalVector upper_corner() const;
  /// Same box at cell size h/factor.
  GridSpec refined(long factor) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Grid covering [lo, hi] with cell size h; lo snapped down and hi up to multiples of h.
GridSpec grid_covering(const RationalVector& lo, const RationalVector& hi, const Rational& h);

using CellIndex = std::vector<long>;

/// Occupancy bit set over a GridSpec; measure = count · h^n.
class VoxelSet {
 public:
  VoxelSet() = default;
  explicit VoxelSet(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  std::size_t dim() const { return grid_.dim; }

  bool test(std::size_t linear) const { return (bits_[linear >> 6] >> (linear & 63)) & 1u; }
  void set(std::size_t linear) { bits_[linear >> 6] |= std::uint64_t{1} << (linear & 63); }
  void reset(std::size_t linear) { bits_[linear >> 6] &= ~(std::uint64_t{1} << (linear & 63)); }
  bool test(const CellIndex& c) const { return test(linear_index(c)); }
  void set(const CellIndex& c) { set(linear_index(c)); }
  /// Sets cells [x0, x1) of the row whose other coordinates start at row_base.
  void set_run(std::size_t row_base, long x0, long x1);

  std::size_t linear_index(const CellIndex& c) const;
  CellIndex cell_of(std::size_t linear) const;
  bool in_grid(const CellIndex& c) const;

  std::size_t count() const;
  Rational measure() const { return Rational(count()) * grid_.cell_volume(); }
  bool empty() const { return count() == 0; }

  const std::vector<std::uint64_t>& words() const { return bits_; }
  std::vector<std::uint64_t>& words() { return bits_; }

  friend bool operator==(const VoxelSet& a, const VoxelSet& b) {
    return a.grid_ == b.grid_ && a.bits_ == b.bits_;
  }

 private:
  GridSpec grid_;
  std::vector<std::uint64_t> bits_;
};

enum class RasterMode { Inner, Outer, Center };
RasterMode parse_raster_mode(const std::string& s);

/// inner: cells inside S; outer: cells meeting S; center: cells whose center is in S.
/// S must lie inside the grid box.
VoxelSet rasterize_simplex(const Simplex& s, const GridSpec& grid, RasterMode mode);

/// Center-mode rasterization of an arbitrary convex polytope given by rational
/// half-spaces a·x <= b (world coordinates). Cells outside the grid are dropped.
struct RationalHalfSpace {
  RationalVector a;
  Rational b;
};
std::vector<RationalHalfSpace> half_spaces(const Simplex& s);
VoxelSet rasterize_polytope(const std::vector<RationalHalfSpace>& hs, const GridSpec& grid);

/// Box [lo, hi] in world coordinates, center mode.
VoxelSet rasterize_box(const RationalVector& lo, const RationalVector& hi, const GridSpec& grid);
/// The single cell containing p (lower-corner convention on cell boundaries).
VoxelSet rasterize_point(const RationalVector& p, const GridSpec& grid);

enum class SumsetMode {
  Nearest,  ///< output keeps h; combined cell centers snap to the containing cell
  Exact     ///< output at h/q for t = p/q: exact union of the combined cells
};

/// {t·a + (1−t)·b : a ∈ A, b ∈ B}. Exact mode returns the Minkowski combination
/// of the cell unions on the refined grid (origin unchanged, cell size h/q).
VoxelSet interpolated_sumset(const VoxelSet& a, const VoxelSet& b, const Rational& t,
                             SumsetMode mode = SumsetMode::Exact);

/// |D(A;t) \ A| with D computed in exact mode.
Rational interpolation_deficit(const VoxelSet& a, const Rational& t);

/// Each cell split into factor^n subcells.
VoxelSet refine(const VoxelSet& a, long factor);

/// Convex hull of the union of occupied cells, rasterized in center mode on A's grid.
/// Supported for n <= 3.
VoxelSet convex_hull(const VoxelSet& a);

/// Hull facets in cell-corner index coordinates: a·x <= b.
struct IntHalfSpace {
  std::vector<long long> a;
  long long b;
};
std::vector<IntHalfSpace> hull_half_spaces(const VoxelSet& a);
/// Hull of the occupied cells in the plane, world coordinates, CCW.
std::vector<std::array<Rational, 2>> hull_polygon_2d(const VoxelSet& a);

VoxelSet set_difference(const VoxelSet& a, const VoxelSet& b);
VoxelSet set_intersection(const VoxelSet& a, const VoxelSet& b);
VoxelSet set_union(const VoxelSet& a, const VoxelSet& b);
bool is_subset(const VoxelSet& a, const VoxelSet& b);

/// Occupied cells with an axis neighbour that is empty or off-grid.
std::size_t boundary_cell_count(const VoxelSet& a);
/// Cells meeting S but not inside S: the rasterization gap of a simplex.
std::size_t simplex_boundary_cells(const Simplex& s, const GridSpec& grid);

/// Greedy maximal-box decomposition, boxes as half-open cell-index ranges.
struct CellBox {
  CellIndex lo, hi;
};
std::vector<CellBox> box_decomposition(const VoxelSet& a);

/// World coordinates of a cell center.
RationalVector cell_center(const GridSpec& grid, const CellIndex& c);

nlohmann::json grid_to_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VoxelSet& a);
VoxelSet voxels_from_json(const nlohmann::json& j);
void write_binary(std::ostream& os, const VoxelSet& a);
VoxelSet read_binary(std::istream& is);

}  // namespace bmlab
