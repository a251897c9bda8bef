#pragma once

#include <array>
#include <vector>

#include "bmlab/geometry.hpp"

namespace bmlab::plane {

// Exact convex-polygon operations in the plane. Used as the 2-D oracle for
// hulls, fan triangulations and cover certification.

using Point = std::array<Rational, 2>;
/// Counter-clockwise vertex list without repetition; may be empty.
using Polygon = std::vector<Point>;

/// Half-plane a·x + b·y <= c.
struct HalfPlane {
  Rational a, b, c;
};

Rational cross(const Point& o, const Point& p, const Point& q);
Rational signed_area(const Polygon& poly);
Rational area(const Polygon& poly);

Polygon from_simplex(const Simplex& tri);
/// Inward half-planes of a CCW convex polygon.
std::vector<HalfPlane> half_planes(const Polygon& poly);

Polygon clip(const Polygon& poly, const HalfPlane& h);
Polygon intersect(const Polygon& p, const Polygon& q);
/// Monotone-chain hull; collinear points dropped.
Polygon convex_hull(std::vector<Point> points);
bool contains(const Polygon& poly, const Point& p);

/// Convex pieces of region \ (union of convex cutters), zero-area pieces
/// dropped. An empty result means the cutters cover region up to measure
/// zero, and for closed cutters that is full coverage.
std::vector<Polygon> difference(const Polygon& region, const std::vector<Polygon>& cutters);

Point centroid(const Polygon& poly);

}  // namespace bmlab::plane
