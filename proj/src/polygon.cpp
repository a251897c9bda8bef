#include "bmlab/polygon.hpp"

#include <algorithm>

namespace bmlab::plane {

Rational cross(const Point& o, const Point& p, const Point& q) {
  return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0]);
}

Rational signed_area(const Polygon& poly) {
  Rational twice = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    twice += p[0] * q[1] - q[0] * p[1];
  }
  return twice / 2;
}

Rational area(const Polygon& poly) { return abs(signed_area(poly)); }

Polygon from_simplex(const Simplex& tri) {
  if (tri.dim() != 2) fail_input("from_simplex needs a triangle");
  Polygon poly;
  for (const auto& v : tri.vertices()) poly.push_back({v[0], v[1]});
  if (signed_area(poly) < 0) std::swap(poly[1], poly[2]);
  return poly;
}

std::vector<HalfPlane> half_planes(const Polygon& poly) {
  std::vector<HalfPlane> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    // Interior lies left of p→q: cross(p, q, x) >= 0.
    Rational a = q[1] - p[1];
    Rational b = p[0] - q[0];
    out.push_back({a, b, a * p[0] + b * p[1]});
  }
  return out;
}

Polygon clip(const Polygon& poly, const HalfPlane& h) {
  Polygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    Rational fp = h.a * p[0] + h.b * p[1] - h.c;
    Rational fq = h.a * q[0] + h.b * q[1] - h.c;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      Rational s = fp / (fp - fq);
      out.push_back({p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])});
    }
  }
  // Remove consecutive duplicates and collinear vertices.
  Polygon clean;
  for (const auto& p : out)
    if (clean.empty() || clean.back() != p) clean.push_back(p);
  while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
  bool changed = true;
  while (changed && clean.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      const Point& a = clean[(i + clean.size() - 1) % clean.size()];
      const Point& b = clean[i];
      const Point& c = clean[(i + 1) % clean.size()];
      if (cross(a, b, c) == 0) {
        clean.erase(clean.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  if (clean.size() < 3) return {};
  return clean;
}

Polygon intersect(const Polygon& p, const Polygon& q) {
  Polygon out = p;
  for (const auto& h : half_planes(q)) {
    if (out.empty()) break;
    out = clip(out, h);
  }
  return out;
}

Polygon convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return {};
  Polygon hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return {};
  return hull;
}

bool contains(const Polygon& poly, const Point& p) {
  if (poly.empty()) return false;
  for (const auto& h : half_planes(poly))
    if (h.a * p[0] + h.b * p[1] > h.c) return false;
  return true;
}

std::vector<Polygon> difference(const Polygon& region, const std::vector<Polygon>& cutters) {
  std::vector<Polygon> pieces;
  if (!region.empty()) pieces.push_back(region);
  for (const auto& cutter : cutters) {
    if (pieces.empty()) break;
    auto planes = half_planes(cutter);
    std::vector<Polygon> next;
    for (const auto& piece : pieces) {
      // piece \ cutter = ⋃_i piece ∩ {inside h_1..h_{i-1}} ∩ {outside h_i}.
      Polygon inside = piece;
      for (const auto& h : planes) {
        if (inside.empty()) break;
        Polygon outside = clip(inside, {-h.a, -h.b, -h.c});
        if (!outside.empty()) next.push_back(std::move(outside));
        inside = clip(inside, h);
      }
    }
    pieces = std::move(next);
  }
  return pieces;
}

Point centroid(const Polygon& poly) {
  Rational a = signed_area(poly);
  if (a == 0) fail_domain("centroid of a degenerate polygon");
  Rational cx = 0, cy = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    Rational w = p[0] * q[1] - q[0] * p[1];
    cx += (p[0] + q[0]) * w;
    cy += (p[1] + q[1]) * w;
  }
  return {cx / (6 * a), cy / (6 * a)};
}

}  // namespace bmlab::plane
