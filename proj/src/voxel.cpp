#include "bmlab/voxel.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace bmlab {

GridSpec::GridSpec(RationalVector origin_, Rational h_, std::vector<long> extents_)
    : dim(origin_.size()), origin(std::move(origin_)), h(std::move(h_)), extents(std::move(extents_)) {
  if (dim == 0) fail_input("grid needs dimension >= 1");
  if (extents.size() != dim) fail_input("grid extents do not match origin dimension");
  if (h <= 0) fail_input("grid cell size must be positive");
  for (long e : extents)
    if (e <= 0) fail_input("grid extents must be positive");
  if (dim > 4) fail_input("voxel grids are limited to n <= 4");
}

std::size_t GridSpec::cell_count() const {
  std::size_t total = 1;
  for (long e : extents) total *= static_cast<std::size_t>(e);
  return total;
}

RationalVector GridSpec::upper_corner() const {
  RationalVector up(dim);
  for (std::size_t k = 0; k < dim; ++k) up[k] = origin[k] + h * Rational(extents[k]);
  return up;
}

GridSpec GridSpec::refined(long factor) const {
  std::vector<long> ext = extents;
  for (auto& e : ext) e *= factor;
  return GridSpec(origin, h / Rational(factor), ext);
}

GridSpec grid_covering(const RationalVector& lo, const RationalVector& hi, const Rational& h) {
  RationalVector origin(lo.size());
  std::vector<long> ext(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) {
    Integer a = floor(lo[k] / h);
    Integer b = ceil(hi[k] / h);
    if (b == a) b += 1;
    origin[k] = Rational(a) * h;
    ext[k] = to_long(Integer(b - a));
  }
  return GridSpec(origin, h, ext);
}

VoxelSet::VoxelSet(GridSpec grid) : grid_(std::move(grid)), bits_((grid_.cell_count() + 63) / 64, 0) {}

std::size_t VoxelSet::linear_index(const CellIndex& c) const {
  std::size_t idx = 0;
  for (std::size_t k = grid_.dim; k-- > 0;) idx = idx * static_cast<std::size_t>(grid_.extents[k]) + static_cast<std::size_t>(c[k]);
  return idx;
}

CellIndex VoxelSet::cell_of(std::size_t linear) const {
  CellIndex c(grid_.dim);
  for (std::size_t k = 0; k < grid_.dim; ++k) {
    c[k] = static_cast<long>(linear % static_cast<std::size_t>(grid_.extents[k]));
    linear /= static_cast<std::size_t>(grid_.extents[k]);
  }
  return c;
}

bool VoxelSet::in_grid(const CellIndex& c) const {
  if (c.size() != grid_.dim) return false;
  for (std::size_t k = 0; k < grid_.dim; ++k)
    if (c[k] < 0 || c[k] >= grid_.extents[k]) return false;
  return true;
}

std::size_t VoxelSet::count() const {
  std::size_t total = 0;
  for (auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

void VoxelSet::set_run(std::size_t row_base, long x0, long x1) {
  if (x1 <= x0) return;
  std::size_t a = row_base + static_cast<std::size_t>(x0);
  std::size_t b = row_base + static_cast<std::size_t>(x1);  // exclusive
  while (a < b && (a & 63)) set(a++);
  while (a + 64 <= b) {
    bits_[a >> 6] = ~std::uint64_t{0};
    a += 64;
  }
  while (a < b) set(a++);
}

RasterMode parse_raster_mode(const std::string& s) {
  if (s == "inner") return RasterMode::Inner;
  if (s == "outer") return RasterMode::Outer;
  if (s == "center") return RasterMode::Center;
  fail_input("unknown raster mode '" + s + "' (inner|outer|center)");
}

RationalVector cell_center(const GridSpec& grid, const CellIndex& c) {
  RationalVector p(grid.dim);
  for (std::size_t k = 0; k < grid.dim; ++k) p[k] = grid.origin[k] + grid.h * (Rational(c[k]) + Rational(1, 2));
  return p;
}

namespace {

/// Visits each row (all cells sharing axes 1..n-1) with its index and base offset.
/// Rows outside [lo, hi] on axes 1..n-1 are skipped.
void for_each_row(const GridSpec& g, const std::function<void(const CellIndex&, std::size_t)>& fn,
                  const CellIndex* lo = nullptr, const CellIndex* hi = nullptr) {
  CellIndex first(g.dim, 0), last(g.dim, 0);
  for (std::size_t k = 1; k < g.dim; ++k) {
    first[k] = lo ? std::max(0L, (*lo)[k]) : 0;
    last[k] = hi ? std::min(g.extents[k] - 1, (*hi)[k]) : g.extents[k] - 1;
    if (first[k] > last[k]) return;
  }
  CellIndex c = first;
  while (true) {
    std::size_t base = 0;
    for (std::size_t k = g.dim; k-- > 1;) base = (base + static_cast<std::size_t>(c[k])) * static_cast<std::size_t>(g.extents[k - 1]);
    fn(c, base);
    std::size_t k = 1;
    for (; k < g.dim; ++k) {
      if (++c[k] <= last[k]) break;
      c[k] = first[k];
    }
    if (k >= g.dim) break;
  }
}

/// Cell-index bounding box of a simplex (clamped to the grid).
std::pair<CellIndex, CellIndex> cell_bounds(const Simplex& s, const GridSpec& g) {
  CellIndex lo(g.dim), hi(g.dim);
  for (std::size_t k = 0; k < g.dim; ++k) {
    Rational mn = s.vertex(0)[k], mx = s.vertex(0)[k];
    for (const auto& v : s.vertices()) {
      mn = std::min(mn, v[k]);
      mx = std::max(mx, v[k]);
    }
    lo[k] = std::max(0L, to_long(floor((mn - g.origin[k]) / g.h)) - 1);
    hi[k] = std::min(g.extents[k] - 1, to_long(floor((mx - g.origin[k]) / g.h)) + 1);
  }
  return {lo, hi};
}

enum class RowRule { Center, Inner, OuterCandidate };

/// Range [lo, hi] of axis-0 cells in a row satisfying every half-space under the rule.
std::pair<long, long> row_range(const std::vector<RationalHalfSpace>& hs, const GridSpec& g,
                                const CellIndex& row, RowRule rule) {
  long lo = 0, hi = g.extents[0] - 1;
  const Rational& o0 = g.origin[0];
  for (const auto& h : hs) {
    // rest = b − Σ_{k≥1} a_k y_k, with y_k chosen by the rule.
    Rational rest = h.b;
    for (std::size_t k = 1; k < g.dim; ++k) {
      if (h.a[k] == 0) continue;
      Rational y;
      switch (rule) {
        case RowRule::Center:
          y = g.origin[k] + g.h * (Rational(row[k]) + Rational(1, 2));
          break;
        case RowRule::Inner:  // worst corner: maximises a_k y_k
          y = g.origin[k] + g.h * Rational(h.a[k] > 0 ? row[k] + 1 : row[k]);
          break;
        case RowRule::OuterCandidate:  // best corner
          y = g.origin[k] + g.h * Rational(h.a[k] > 0 ? row[k] : row[k] + 1);
          break;
      }
      rest -= h.a[k] * y;
    }
    const Rational& a0 = h.a[0];
    if (a0 == 0) {
      if (rest < 0) return {1, 0};
      continue;
    }
    Rational x = (rest / a0 - o0) / g.h;  // bound on the axis-0 coordinate in cell units
    if (a0 > 0) {
      long cap = 0;
      switch (rule) {
        case RowRule::Center: cap = to_long(floor(x - Rational(1, 2))); break;
        case RowRule::Inner: cap = to_long(floor(x)) - 1; break;
        case RowRule::OuterCandidate: cap = to_long(floor(x)); break;
      }
      hi = std::min(hi, cap);
    } else {
      long cap = 0;
      switch (rule) {
        case RowRule::Center: cap = to_long(ceil(x - Rational(1, 2))); break;
        case RowRule::Inner: cap = to_long(ceil(x)); break;
        case RowRule::OuterCandidate: cap = to_long(ceil(x)) - 1; break;
      }
      lo = std::max(lo, cap);
    }
    if (lo > hi) return {1, 0};
  }
  return {lo, hi};
}

bool box_inside_grid(const RationalVector& lo, const RationalVector& hi, const GridSpec& g) {
  RationalVector up = g.upper_corner();
  for (std::size_t k = 0; k < g.dim; ++k)
    if (lo[k] < g.origin[k] || hi[k] > up[k]) return false;
  return true;
}

/// Generalized cross product of n-1 vectors in R^n (cofactor expansion).
RationalVector normal_of(const std::vector<RationalVector>& vs, std::size_t n) {
  RationalVector out(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<RationalVector> minor;
    for (const auto& v : vs) {
      RationalVector row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(v[c]);
      minor.push_back(std::move(row));
    }
    Rational d = determinant(std::move(minor));
    out[col] = (col % 2 == 0) ? d : Rational(-d);
  }
  return out;
}

/// Exact test: does the closed cell box meet the closed simplex? Separating-axis
/// theorem with candidate axes spanned by n-1 edge directions of either body.
bool box_meets_simplex(const RationalVector& lo, const Rational& h, const Simplex& s,
                       const std::vector<RationalVector>& axes) {
  const std::size_t n = lo.size();
  for (const auto& a : axes) {
    Rational bmin = 0, bmax = 0;
    for (std::size_t k = 0; k < n; ++k) {
      Rational p = a[k] * lo[k];
      Rational q = a[k] * (lo[k] + h);
      bmin += std::min(p, q);
      bmax += std::max(p, q);
    }
    Rational smin, smax;
    for (std::size_t i = 0; i <= n; ++i) {
      Rational v = 0;
      for (std::size_t k = 0; k < n; ++k) v += a[k] * s.vertex(i)[k];
      if (i == 0 || v < smin) smin = v;
      if (i == 0 || v > smax) smax = v;
    }
    if (bmax < smin || smax < bmin) return false;
  }
  return true;
}

std::vector<RationalVector> separating_axes(const Simplex& s) {
  const std::size_t n = s.dim();
  std::vector<RationalVector> dirs;
  for (std::size_t k = 0; k < n; ++k) {
    RationalVector e(n, Rational(0));
    e[k] = 1;
    dirs.push_back(e);
  }
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) dirs.push_back(s.vertex(j) - s.vertex(i));
  std::vector<RationalVector> axes;
  if (n == 1) return {RationalVector{Rational(1)}};
  std::vector<std::size_t> pick(n - 1);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
    if (depth == n - 1) {
      std::vector<RationalVector> vs;
      for (auto idx : pick) vs.push_back(dirs[idx]);
      RationalVector a = normal_of(vs, n);
      bool zero = std::all_of(a.begin(), a.end(), [](const Rational& x) { return x == 0; });
      if (!zero) axes.push_back(std::move(a));
      return;
    }
    for (std::size_t i = start; i < dirs.size(); ++i) {
      pick[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
  return axes;
}

}  // namespace

std::vector<RationalHalfSpace> half_spaces(const Simplex& s) {
  const std::size_t n = s.dim();
  // Barycentric coordinate functions λ_j(x) = g_j·x + c_j; facet j is λ_j >= 0.
  std::vector<RationalVector> m(n, RationalVector(n));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t r = 0; r < n; ++r) m[r][i - 1] = s.vertex(i)[r] - s.vertex(0)[r];
  // Rows of M^{-1}: solve M^T y = e_k... simpler: invert column by column.
  std::vector<RationalVector> inv_cols;
  for (std::size_t k = 0; k < n; ++k) {
    RationalVector e(n, Rational(0));
    e[k] = 1;
    inv_cols.push_back(solve(m, e));
  }
  // inv[i][k] = inv_cols[k][i]
  std::vector<RationalHalfSpace> out;
  RationalVector g0(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = inv_cols[k][i];
    Rational c = 0;
    for (std::size_t k = 0; k < n; ++k) c -= g[k] * s.vertex(0)[k];
    // λ_{i+1} = g·x + c >= 0  ⇔  (−g)·x <= c
    out.push_back({Rational(-1) * g, c});
    g0 = g0 + g;
  }
  // λ_0 = 1 − Σ λ_i = 1 − g0·x − Σc >= 0  ⇔  g0·x <= 1 − Σc
  Rational csum = 0;
  for (const auto& hsp : out) csum += hsp.b;
  out.insert(out.begin(), {g0, Rational(1) - csum});
  return out;
}

VoxelSet rasterize_polytope(const std::vector<RationalHalfSpace>& hs, const GridSpec& grid) {
  VoxelSet out(grid);
  for_each_row(grid, [&](const CellIndex& row, std::size_t base) {
    auto [lo, hi] = row_range(hs, grid, row, RowRule::Center);
    if (lo <= hi) out.set_run(base, lo, hi + 1);
  });
  return out;
}

VoxelSet rasterize_simplex(const Simplex& s, const GridSpec& grid, RasterMode mode) {
  if (s.dim() != grid.dim) fail_input("simplex and grid dimensions differ");
  RationalVector lo = s.vertex(0), hi = s.vertex(0);
  for (const auto& v : s.vertices())
    for (std::size_t k = 0; k < v.size(); ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  if (!box_inside_grid(lo, hi, grid)) fail_input("simplex does not fit inside the grid box");
  auto hs = half_spaces(s);
  VoxelSet out(grid);
  auto [blo, bhi] = cell_bounds(s, grid);
  if (mode == RasterMode::Center) {
    for_each_row(grid, [&](const CellIndex& row, std::size_t base) {
      auto [lo, hi] = row_range(hs, grid, row, RowRule::Center);
      if (lo <= hi) out.set_run(base, lo, hi + 1);
    }, &blo, &bhi);
    return out;
  }
  std::vector<RationalVector> axes;
  if (mode == RasterMode::Outer) axes = separating_axes(s);
  for_each_row(grid, [&](const CellIndex& row, std::size_t base) {
    auto [ilo, ihi] = row_range(hs, grid, row, RowRule::Inner);
    if (mode == RasterMode::Inner) {
      if (ilo <= ihi) out.set_run(base, ilo, ihi + 1);
      return;
    }
    auto [olo, ohi] = row_range(hs, grid, row, RowRule::OuterCandidate);
    CellIndex c = row;
    RationalVector corner(grid.dim);
    for (std::size_t k = 1; k < grid.dim; ++k) corner[k] = grid.origin[k] + grid.h * Rational(row[k]);
    for (long x = olo; x <= ohi; ++x) {
      if (ilo <= ihi && x >= ilo && x <= ihi) {
        out.set(base + static_cast<std::size_t>(x));
        continue;
      }
      corner[0] = grid.origin[0] + grid.h * Rational(x);
      if (box_meets_simplex(corner, grid.h, s, axes)) out.set(base + static_cast<std::size_t>(x));
    }
  }, &blo, &bhi);
  return out;
}

std::size_t simplex_boundary_cells(const Simplex& s, const GridSpec& grid) {
  return rasterize_simplex(s, grid, RasterMode::Outer).count() -
         rasterize_simplex(s, grid, RasterMode::Inner).count();
}

VoxelSet rasterize_box(const RationalVector& lo, const RationalVector& hi, const GridSpec& grid) {
  std::vector<RationalHalfSpace> hs;
  for (std::size_t k = 0; k < grid.dim; ++k) {
    RationalVector a(grid.dim, Rational(0));
    a[k] = 1;
    hs.push_back({a, hi[k]});
    a[k] = -1;
    hs.push_back({a, -lo[k]});
  }
  return rasterize_polytope(hs, grid);
}

VoxelSet rasterize_point(const RationalVector& p, const GridSpec& grid) {
  VoxelSet out(grid);
  CellIndex c(grid.dim);
  for (std::size_t k = 0; k < grid.dim; ++k) {
    c[k] = to_long(floor((p[k] - grid.origin[k]) / grid.h));
    // A point on the upper edge of the box belongs to the last cell.
    if (c[k] == grid.extents[k] && p[k] == grid.upper_corner()[k]) c[k] -= 1;
  }
  if (!out.in_grid(c)) fail_input("point " + to_string(p) + " lies outside the grid");
  out.set(c);
  return out;
}

VoxelSet refine(const VoxelSet& a, long factor) {
  if (factor < 1) fail_input("refinement factor must be >= 1");
  if (factor == 1) return a;
  const GridSpec& g = a.grid();
  VoxelSet out(g.refined(factor));
  const GridSpec& fg = out.grid();
  for_each_row(fg, [&](const CellIndex& row, std::size_t base) {
    CellIndex coarse(g.dim);
    for (std::size_t k = 1; k < g.dim; ++k) coarse[k] = row[k] / factor;
    coarse[0] = 0;
    std::size_t cbase = a.linear_index(coarse);
    for (long x = 0; x < g.extents[0]; ++x)
      if (a.test(cbase + static_cast<std::size_t>(x))) out.set_run(base, x * factor, (x + 1) * factor);
  });
  return out;
}

namespace {

void require_compatible(const VoxelSet& a, const VoxelSet& b) {
  if (!(a.grid() == b.grid())) fail_input("voxel sets live on incompatible grids");
}

}  // namespace

VoxelSet set_difference(const VoxelSet& a, const VoxelSet& b) {
  require_compatible(a, b);
  VoxelSet out = a;
  for (std::size_t i = 0; i < out.words().size(); ++i) out.words()[i] &= ~b.words()[i];
  return out;
}

VoxelSet set_intersection(const VoxelSet& a, const VoxelSet& b) {
  require_compatible(a, b);
  VoxelSet out = a;
  for (std::size_t i = 0; i < out.words().size(); ++i) out.words()[i] &= b.words()[i];
  return out;
}

VoxelSet set_union(const VoxelSet& a, const VoxelSet& b) {
  require_compatible(a, b);
  VoxelSet out = a;
  for (std::size_t i = 0; i < out.words().size(); ++i) out.words()[i] |= b.words()[i];
  return out;
}

bool is_subset(const VoxelSet& a, const VoxelSet& b) {
  require_compatible(a, b);
  for (std::size_t i = 0; i < a.words().size(); ++i)
    if (a.words()[i] & ~b.words()[i]) return false;
  return true;
}

std::size_t boundary_cell_count(const VoxelSet& a) {
  const GridSpec& g = a.grid();
  std::size_t total = 0;
  std::vector<std::size_t> stride(g.dim, 1);
  for (std::size_t k = 1; k < g.dim; ++k) stride[k] = stride[k - 1] * static_cast<std::size_t>(g.extents[k - 1]);
  for (std::size_t idx = 0; idx < g.cell_count(); ++idx) {
    if (!a.test(idx)) continue;
    CellIndex c = a.cell_of(idx);
    bool edge = false;
    for (std::size_t k = 0; k < g.dim && !edge; ++k) {
      if (c[k] == 0 || c[k] == g.extents[k] - 1) edge = true;
      else if (!a.test(idx - stride[k]) || !a.test(idx + stride[k])) edge = true;
    }
    if (edge) ++total;
  }
  return total;
}

std::vector<CellBox> box_decomposition(const VoxelSet& a) {
  const GridSpec& g = a.grid();
  VoxelSet used(g);
  std::vector<CellBox> boxes;
  auto free_cell = [&](const CellIndex& c) { return a.test(c) && !used.test(c); };
  for (std::size_t idx = 0; idx < g.cell_count(); ++idx) {
    if (!a.test(idx) || used.test(idx)) continue;
    CellIndex lo = a.cell_of(idx);
    CellIndex hi = lo;
    for (auto& x : hi) ++x;
    // Grow along each axis in turn while the whole new slab is free.
    for (std::size_t k = 0; k < g.dim; ++k) {
      while (hi[k] < g.extents[k]) {
        bool ok = true;
        CellIndex c = lo;
        c[k] = hi[k];
        std::function<void(std::size_t)> scan = [&](std::size_t axis) {
          if (!ok) return;
          if (axis == g.dim) {
            if (!free_cell(c)) ok = false;
            return;
          }
          if (axis == k) {
            scan(axis + 1);
            return;
          }
          for (long v = lo[axis]; v < hi[axis] && ok; ++v) {
            c[axis] = v;
            scan(axis + 1);
          }
        };
        scan(0);
        if (!ok) break;
        ++hi[k];
      }
    }
    CellIndex c = lo;
    std::function<void(std::size_t)> mark = [&](std::size_t axis) {
      if (axis == g.dim) {
        used.set(c);
        return;
      }
      for (long v = lo[axis]; v < hi[axis]; ++v) {
        c[axis] = v;
        mark(axis + 1);
      }
    };
    mark(0);
    boxes.push_back({lo, hi});
  }
  return boxes;
}

}  // namespace bmlab
