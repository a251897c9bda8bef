#include <algorithm>

#include "bmlab/voxel.hpp"

namespace bmlab {

namespace {

/// Sets every cell of the half-open index box [lo, hi) (clipped to the grid).
void paint_box(VoxelSet& out, const CellIndex& lo, const CellIndex& hi) {
  const GridSpec& g = out.grid();
  CellIndex c(g.dim);
  std::vector<long> clo(g.dim), chi(g.dim);
  for (std::size_t k = 0; k < g.dim; ++k) {
    clo[k] = std::max(0L, lo[k]);
    chi[k] = std::min(g.extents[k], hi[k]);
    if (clo[k] >= chi[k]) return;
  }
  // Odometer over axes 1..n-1.
  for (std::size_t k = 1; k < g.dim; ++k) c[k] = clo[k];
  c[0] = 0;
  while (true) {
    out.set_run(out.linear_index(c), clo[0], chi[0]);
    std::size_t k = 1;
    for (; k < g.dim; ++k) {
      if (++c[k] < chi[k]) break;
      c[k] = clo[k];
    }
    if (k == g.dim) break;
  }
}

/// Sorted distinct values p·a + r·b for a ∈ [lo1, hi1), b ∈ [lo2, hi2).
std::vector<long> combination_values(long lo1, long hi1, long lo2, long hi2, long p, long r) {
  std::vector<long> out;
  if (p == 0) {
    for (long b = lo2; b < hi2; ++b) out.push_back(r * b);
    return out;
  }
  if (r == 0) {
    for (long a = lo1; a < hi1; ++a) out.push_back(p * a);
    return out;
  }
  const long len2 = hi2 - lo2;
  for (long a0 = lo1; a0 < std::min(hi1, lo1 + r); ++a0) {
    long m_max = (hi1 - 1 - a0) / r;
    // a = a0 + m r gives p a0 + r (p m + b); collect w = p m + b.
    if (p <= len2) {
      for (long w = lo2; w <= p * m_max + hi2 - 1; ++w) out.push_back(p * a0 + r * w);
    } else {
      for (long m = 0; m <= m_max; ++m)
        for (long b = lo2; b < hi2; ++b) out.push_back(p * a0 + r * (p * m + b));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

VoxelSet interpolated_sumset(const VoxelSet& a, const VoxelSet& b, const Rational& t, SumsetMode mode) {
  if (!(a.grid() == b.grid())) fail_input("interpolated_sumset: incompatible grids");
  if (t < 0 || t > 1) fail_input("interpolated_sumset: t must lie in [0,1]");
  const long p = to_long(t.get_num());
  const long q = to_long(t.get_den());
  const long r = q - p;
  const GridSpec& g = a.grid();
  std::vector<CellBox> boxes_a = box_decomposition(a);
  std::vector<CellBox> boxes_b = (&a == &b || a == b) ? boxes_a : box_decomposition(b);

  if (mode == SumsetMode::Exact) {
    // t·[lo1,hi1]h + (1−t)·[lo2,hi2]h = [p lo1 + r lo2, p hi1 + r hi2]·(h/q).
    VoxelSet out(g.refined(q));
    CellIndex lo(g.dim), hi(g.dim);
    for (const auto& ba : boxes_a)
      for (const auto& bb : boxes_b) {
        for (std::size_t k = 0; k < g.dim; ++k) {
          lo[k] = p * ba.lo[k] + r * bb.lo[k];
          hi[k] = p * ba.hi[k] + r * bb.hi[k];
        }
        paint_box(out, lo, hi);
      }
    return out;
  }

  // Nearest: the combined center (v/q + 1/2)·h lands in cell floor(v/q + 1/2).
  VoxelSet out(g);
  for (const auto& ba : boxes_a)
    for (const auto& bb : boxes_b) {
      std::vector<std::vector<long>> axis_cells(g.dim);
      for (std::size_t k = 0; k < g.dim; ++k) {
        auto vals = combination_values(ba.lo[k], ba.hi[k], bb.lo[k], bb.hi[k], p, r);
        auto& cells = axis_cells[k];
        for (long v : vals) {
          long num = 2 * v + q;
          long den = 2 * q;
          long c = num >= 0 ? num / den : -((-num + den - 1) / den);
          if (c >= 0 && c < g.extents[k]) cells.push_back(c);
        }
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        if (cells.empty()) goto next_pair;
      }
      {
        CellIndex c(g.dim, 0);
        std::vector<std::size_t> pos(g.dim, 0);
        while (true) {
          for (std::size_t k = 1; k < g.dim; ++k) c[k] = axis_cells[k][pos[k]];
          std::size_t base = out.linear_index(c);
          const auto& xs = axis_cells[0];
          std::size_t i = 0;
          while (i < xs.size()) {
            std::size_t j = i;
            while (j + 1 < xs.size() && xs[j + 1] == xs[j] + 1) ++j;
            out.set_run(base, xs[i], xs[j] + 1);
            i = j + 1;
          }
          std::size_t k = 1;
          for (; k < g.dim; ++k) {
            if (++pos[k] < axis_cells[k].size()) break;
            pos[k] = 0;
          }
          if (k >= g.dim) break;
        }
      }
    next_pair:;
    }
  return out;
}

Rational interpolation_deficit(const VoxelSet& a, const Rational& t) {
  VoxelSet d = interpolated_sumset(a, a, t, SumsetMode::Exact);
  const long q = to_long(t.get_den());
  VoxelSet fine = q == 1 ? a : refine(a, q);
  return set_difference(d, fine).measure();
}

}  // namespace bmlab
