#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bmlab/rational.hpp"

namespace bmlab {

using RationalVector = std::vector<Rational>;

RationalVector operator+(const RationalVector& a, const RationalVector& b);
RationalVector operator-(const RationalVector& a, const RationalVector& b);
RationalVector operator*(const Rational& s, const RationalVector& v);
std::string to_string(const RationalVector& v);

/// Exact determinant by fraction-preserving Gaussian elimination.
Rational determinant(std::vector<RationalVector> rows);

/// Solves M x = b exactly; M square and nonsingular.
RationalVector solve(std::vector<RationalVector> m, RationalVector b);

/// Closed n-simplex with rational vertices, stored in lexicographic order.
///
/// Sorting is preserved by translations and positive homotheties, so two
/// homothets with positive ratio keep their vertices in correspondence.
class Simplex {
 public:
  /// Throws Input if the vertex count is not n+1, dimensions disagree, or the
  /// vertices are affinely dependent.
  explicit Simplex(std::vector<RationalVector> vertices);

  std::size_t dim() const { return vertices_.front().size(); }
  const RationalVector& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<RationalVector>& vertices() const { return vertices_; }
  RationalVector barycenter() const;

  /// Affine barycentric coordinates of p (sum to 1).
  RationalVector barycentric(const RationalVector& p) const;

  friend bool operator==(const Simplex& a, const Simplex& b) { return a.vertices_ == b.vertices_; }
  friend bool operator<(const Simplex& a, const Simplex& b) { return a.vertices_ < b.vertices_; }

 private:
  std::vector<RationalVector> vertices_;
};

/// conv{0, n!·e1, e2, ..., en}: rational, volume exactly 1.
Simplex make_reference_simplex(std::size_t n);

Rational volume(const Simplex& s);

/// Vertexwise v ↦ center + ratio·(v − center). Ratio must be nonzero.
Simplex homothety(const Simplex& s, const RationalVector& center, const Rational& ratio);

Simplex translate(const Simplex& s, const RationalVector& offset);

/// Closed containment: boundary counts as inside.
bool contains_point(const Simplex& s, const RationalVector& p);
bool contains_simplex(const Simplex& outer, const Simplex& inner);

/// Edge vectors of the simplex (v_i − v_0).
std::vector<RationalVector> edge_vectors(const Simplex& s);
bool is_translate(const Simplex& a, const Simplex& b);

/// λ·S1 + (1−λ)·S2 for translates S1, S2; λ ∈ [0,1].
Simplex weighted_average(const Simplex& s1, const Simplex& s2, const Rational& lambda);

/// A homothet of a base simplex written as ratio·base + (1−ratio)·position,
/// with position given by its barycentric coordinates in the base.
/// Every positive homothet of base with ratio ≠ 1 has a unique such form.
struct HomothetForm {
  Rational ratio;
  RationalVector position;  // barycentric w.r.t. base, sums to 1
};

/// Throws Domain if s is not a positive homothet of base or has ratio 1 with
/// a nonzero offset.
HomothetForm homothet_form(const Simplex& base, const Simplex& s);
Simplex from_homothet_form(const Simplex& base, const HomothetForm& form);

nlohmann::json to_json(const Simplex& s);
Simplex simplex_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RationalVector& v);
RationalVector vector_from_json(const nlohmann::json& j);

}  // namespace bmlab
