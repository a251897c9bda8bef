#include <algorithm>
#include <array>
#include <unordered_map>

#include "bmlab/voxel.hpp"

namespace bmlab {

namespace {

using P2 = std::array<long long, 2>;
using P3 = std::array<long long, 3>;

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

/// Corner points of the extreme cells of every axis-0 row: their hull is the
/// hull of the whole cell union.
std::vector<std::vector<long long>> extreme_corners(const VoxelSet& a) {
  const GridSpec& g = a.grid();
  std::vector<std::vector<long long>> pts;
  const std::size_t rows = g.cell_count() / static_cast<std::size_t>(g.extents[0]);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t base = r * static_cast<std::size_t>(g.extents[0]);
    long lo = -1, hi = -1;
    for (long x = 0; x < g.extents[0]; ++x)
      if (a.test(base + static_cast<std::size_t>(x))) {
        if (lo < 0) lo = x;
        hi = x;
      }
    if (lo < 0) continue;
    CellIndex c = a.cell_of(base);
    const std::size_t others = g.dim - 1;
    for (std::size_t mask = 0; mask < (std::size_t{1} << others); ++mask) {
      std::vector<long long> p(g.dim);
      for (std::size_t k = 1; k < g.dim; ++k) p[k] = c[k] + ((mask >> (k - 1)) & 1u);
      p[0] = lo;
      pts.push_back(p);
      p[0] = hi + 1;
      pts.push_back(p);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

long long cross2(const P2& o, const P2& p, const P2& q) {
  return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0]);
}

std::vector<P2> hull2(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<P2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

P3 sub(const P3& a, const P3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
P3 cross(const P3& a, const P3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
long long dot(const P3& a, const P3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// Incremental 3-D hull with exact integer predicates; returns outward facets.
std::vector<IntHalfSpace> hull3(const std::vector<P3>& pts) {
  if (pts.size() < 4) fail_domain("3-D hull needs at least four points");
  std::size_t i0 = 0, i1 = 0, i2 = 0, i3 = 0;
  long long best = -1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    P3 d = sub(pts[i], pts[i0]);
    if (dot(d, d) > best) best = dot(d, d), i1 = i;
  }
  best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    P3 c = cross(sub(pts[i1], pts[i0]), sub(pts[i], pts[i0]));
    if (dot(c, c) > best) best = dot(c, c), i2 = i;
  }
  if (best == 0) fail_domain("3-D hull of collinear points");
  P3 n0 = cross(sub(pts[i1], pts[i0]), sub(pts[i2], pts[i0]));
  best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    long long v = dot(n0, sub(pts[i], pts[i0]));
    if (v < 0) v = -v;
    if (v > best) best = v, i3 = i;
  }
  if (best == 0) fail_domain("3-D hull of coplanar points");

  struct Face {
    std::array<std::size_t, 3> v;
    P3 n;
    long long d;
    bool alive;
  };
  std::vector<Face> faces;
  std::unordered_map<std::uint64_t, std::size_t> edge_face;
  auto key = [](std::size_t u, std::size_t v) { return (static_cast<std::uint64_t>(u) << 32) | v; };
  auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
    P3 n = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
    faces.push_back({{a, b, c}, n, dot(n, pts[a]), true});
    std::size_t id = faces.size() - 1;
    edge_face[key(a, b)] = id;
    edge_face[key(b, c)] = id;
    edge_face[key(c, a)] = id;
  };
  std::array<std::size_t, 4> tet = {i0, i1, i2, i3};
  for (int f = 0; f < 4; ++f) {
    std::array<std::size_t, 3> tri;
    std::size_t other = 0;
    int m = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == f)
        other = tet[static_cast<std::size_t>(j)];
      else
        tri[static_cast<std::size_t>(m++)] = tet[static_cast<std::size_t>(j)];
    }
    P3 n = cross(sub(pts[tri[1]], pts[tri[0]]), sub(pts[tri[2]], pts[tri[0]]));
    if (dot(n, sub(pts[other], pts[tri[0]])) > 0) std::swap(tri[1], tri[2]);
    add_face(tri[0], tri[1], tri[2]);
  }
  std::vector<std::size_t> alive = {0, 1, 2, 3};
  std::vector<char> visible;
  for (std::size_t pi = 0; pi < pts.size(); ++pi) {
    if (pi == i0 || pi == i1 || pi == i2 || pi == i3) continue;
    const P3& p = pts[pi];
    visible.assign(faces.size(), 0);
    bool any = false;
    for (std::size_t f : alive)
      if (dot(faces[f].n, p) > faces[f].d) visible[f] = 1, any = true;
    if (!any) continue;
    std::vector<std::pair<std::size_t, std::size_t>> horizon;
    for (std::size_t f : alive) {
      if (!visible[f]) continue;
      for (int e = 0; e < 3; ++e) {
        std::size_t u = faces[f].v[static_cast<std::size_t>(e)];
        std::size_t v = faces[f].v[static_cast<std::size_t>((e + 1) % 3)];
        std::size_t g = edge_face.at(key(v, u));
        if (!visible[g]) horizon.emplace_back(u, v);
      }
    }
    for (std::size_t f : alive)
      if (visible[f]) {
        faces[f].alive = false;
        for (int e = 0; e < 3; ++e)
          edge_face.erase(key(faces[f].v[static_cast<std::size_t>(e)], faces[f].v[static_cast<std::size_t>((e + 1) % 3)]));
      }
    for (auto [u, v] : horizon) add_face(u, v, pi);
    std::vector<std::size_t> next;
    for (std::size_t f : alive)
      if (faces[f].alive) next.push_back(f);
    for (std::size_t f = faces.size() - horizon.size(); f < faces.size(); ++f) next.push_back(f);
    alive = std::move(next);
  }
  std::vector<IntHalfSpace> out;
  for (std::size_t f : alive) out.push_back({{faces[f].n[0], faces[f].n[1], faces[f].n[2]}, faces[f].d});
  return out;
}

}  // namespace

std::vector<IntHalfSpace> hull_half_spaces(const VoxelSet& a) {
  if (a.empty()) fail_input("convex hull of an empty set");
  const GridSpec& g = a.grid();
  auto pts = extreme_corners(a);
  if (g.dim == 1) {
    long long lo = pts.front()[0], hi = pts.back()[0];
    return {{{1}, hi}, {{-1}, -lo}};
  }
  if (g.dim == 2) {
    std::vector<P2> p2;
    for (const auto& p : pts) p2.push_back({p[0], p[1]});
    auto h = hull2(std::move(p2));
    std::vector<IntHalfSpace> out;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const P2& p = h[i];
      const P2& q = h[(i + 1) % h.size()];
      long long ca = q[1] - p[1], cb = p[0] - q[0];
      out.push_back({{ca, cb}, ca * p[0] + cb * p[1]});
    }
    return out;
  }
  if (g.dim == 3) {
    std::vector<P3> p3;
    for (const auto& p : pts) p3.push_back({p[0], p[1], p[2]});
    return hull3(p3);
  }
  fail_input("convex hull is implemented for n <= 3");
}

std::vector<std::array<Rational, 2>> hull_polygon_2d(const VoxelSet& a) {
  if (a.dim() != 2) fail_input("hull_polygon_2d needs a planar set");
  if (a.empty()) fail_input("convex hull of an empty set");
  std::vector<P2> p2;
  for (const auto& p : extreme_corners(a)) p2.push_back({p[0], p[1]});
  const GridSpec& g = a.grid();
  std::vector<std::array<Rational, 2>> out;
  for (const auto& p : hull2(std::move(p2)))
    out.push_back({g.origin[0] + g.h * Rational(static_cast<long>(p[0])), g.origin[1] + g.h * Rational(static_cast<long>(p[1]))});
  return out;
}

VoxelSet convex_hull(const VoxelSet& a) {
  auto hs = hull_half_spaces(a);
  const GridSpec& g = a.grid();
  VoxelSet out(g);
  const std::size_t rows = g.cell_count() / static_cast<std::size_t>(g.extents[0]);
  CellIndex c(g.dim, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t base = r * static_cast<std::size_t>(g.extents[0]);
    c = out.cell_of(base);
    long long lo = 0, hi = g.extents[0] - 1;
    for (const auto& h : hs) {
      // Doubled center coordinates: a·(2c+1) <= 2b.
      long long rest = 2 * h.b;
      for (std::size_t k = 1; k < g.dim; ++k) rest -= h.a[k] * (2 * c[k] + 1);
      long long a0 = h.a[0];
      if (a0 == 0) {
        if (rest < 0) hi = -1;
      } else if (a0 > 0) {
        hi = std::min(hi, floor_div(floor_div(rest, a0) - 1, 2));
      } else {
        lo = std::max(lo, ceil_div(ceil_div(rest, a0) - 1, 2));
      }
      if (lo > hi) break;
    }
    if (lo <= hi) out.set_run(base, static_cast<long>(lo), static_cast<long>(hi + 1));
  }
  return out;
}

}  // namespace bmlab
