#include "bmlab/geometry.hpp"

#include <algorithm>

namespace bmlab {

RationalVector operator+(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) fail_input("dimension mismatch in vector addition");
  RationalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RationalVector operator-(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) fail_input("dimension mismatch in vector subtraction");
  RationalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RationalVector operator*(const Rational& s, const RationalVector& v) {
  RationalVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

std::string to_string(const RationalVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

Rational determinant(std::vector<RationalVector> rows) {
  const std::size_t n = rows.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && rows[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(rows[pivot], rows[col]);
      det = -det;
    }
    det *= rows[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (rows[r][col] == 0) continue;
      Rational f = rows[r][col] / rows[col][col];
      for (std::size_t c = col; c < n; ++c) rows[r][c] -= f * rows[col][c];
    }
  }
  return det;
}

RationalVector solve(std::vector<RationalVector> m, RationalVector b) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) fail_domain("singular linear system");
    std::swap(m[pivot], m[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
  return x;
}

Simplex::Simplex(std::vector<RationalVector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty() || vertices_.front().empty()) fail_input("simplex needs dimension >= 1");
  const std::size_t n = vertices_.front().size();
  if (vertices_.size() != n + 1)
    fail_input("simplex of dimension " + std::to_string(n) + " needs " + std::to_string(n + 1) +
               " vertices, got " + std::to_string(vertices_.size()));
  for (const auto& v : vertices_)
    if (v.size() != n) fail_input("simplex vertices have mixed dimensions");
  std::sort(vertices_.begin(), vertices_.end());
  if (determinant(edge_vectors(*this)) == 0) fail_input("degenerate simplex (affinely dependent vertices)");
}

RationalVector Simplex::barycenter() const {
  RationalVector c(dim(), Rational(0));
  for (const auto& v : vertices_) c = c + v;
  return Rational(1, dim() + 1) * c;
}

RationalVector Simplex::barycentric(const RationalVector& p) const {
  const std::size_t n = dim();
  if (p.size() != n) fail_input("dimension mismatch in barycentric coordinates");
  // p − v0 = Σ_{i≥1} w_i (v_i − v0); solve with edge vectors as columns.
  std::vector<RationalVector> m(n, RationalVector(n));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t r = 0; r < n; ++r) m[r][i - 1] = vertices_[i][r] - vertices_[0][r];
  RationalVector w = solve(std::move(m), p - vertices_[0]);
  RationalVector out(n + 1);
  Rational rest = 1;
  for (std::size_t i = 0; i < n; ++i) {
    out[i + 1] = w[i];
    rest -= w[i];
  }
  out[0] = rest;
  return out;
}

Simplex make_reference_simplex(std::size_t n) {
  if (n == 0) fail_input("reference simplex needs n >= 1");
  Integer fact = 1;
  for (std::size_t k = 2; k <= n; ++k) fact *= static_cast<unsigned long>(k);
  std::vector<RationalVector> verts(n + 1, RationalVector(n, Rational(0)));
  verts[1][0] = Rational(fact);
  for (std::size_t k = 2; k <= n; ++k) verts[k][k - 1] = 1;
  return Simplex(std::move(verts));
}

std::vector<RationalVector> edge_vectors(const Simplex& s) {
  std::vector<RationalVector> out;
  for (std::size_t i = 1; i <= s.dim(); ++i) out.push_back(s.vertex(i) - s.vertex(0));
  return out;
}

Rational volume(const Simplex& s) {
  Integer fact = 1;
  for (std::size_t k = 2; k <= s.dim(); ++k) fact *= static_cast<unsigned long>(k);
  return abs(determinant(edge_vectors(s))) / Rational(fact);
}

Simplex homothety(const Simplex& s, const RationalVector& center, const Rational& ratio) {
  if (ratio == 0) fail_input("homothety ratio must be nonzero");
  if (center.size() != s.dim()) fail_input("dimension mismatch in homothety center");
  std::vector<RationalVector> verts;
  for (const auto& v : s.vertices()) verts.push_back(center + ratio * (v - center));
  return Simplex(std::move(verts));
}

Simplex translate(const Simplex& s, const RationalVector& offset) {
  std::vector<RationalVector> verts;
  for (const auto& v : s.vertices()) verts.push_back(v + offset);
  return Simplex(std::move(verts));
}

bool contains_point(const Simplex& s, const RationalVector& p) {
  if (p.size() != s.dim()) fail_input("dimension mismatch in contains_point");
  for (const auto& b : s.barycentric(p))
    if (b < 0) return false;
  return true;
}

bool contains_simplex(const Simplex& outer, const Simplex& inner) {
  if (outer.dim() != inner.dim()) fail_input("dimension mismatch in contains_simplex");
  for (const auto& v : inner.vertices())
    if (!contains_point(outer, v)) return false;
  return true;
}

bool is_translate(const Simplex& a, const Simplex& b) {
  return a.dim() == b.dim() && edge_vectors(a) == edge_vectors(b);
}

Simplex weighted_average(const Simplex& s1, const Simplex& s2, const Rational& lambda) {
  if (lambda < 0 || lambda > 1) fail_input("weight must lie in [0,1]");
  if (!is_translate(s1, s2)) fail_input("weighted_average requires translates of one another");
  std::vector<RationalVector> verts;
  for (std::size_t i = 0; i <= s1.dim(); ++i)
    verts.push_back(lambda * s1.vertex(i) + (1 - lambda) * s2.vertex(i));
  return Simplex(std::move(verts));
}

HomothetForm homothet_form(const Simplex& base, const Simplex& s) {
  if (base.dim() != s.dim()) fail_input("dimension mismatch in homothet_form");
  const std::size_t n = base.dim();
  RationalVector be = base.vertex(1) - base.vertex(0);
  RationalVector se = s.vertex(1) - s.vertex(0);
  std::size_t axis = 0;
  while (be[axis] == 0) ++axis;
  Rational ratio = se[axis] / be[axis];
  if (ratio <= 0) fail_domain("not a positive homothet of the base simplex");
  for (std::size_t i = 1; i <= n; ++i)
    if (s.vertex(i) - s.vertex(0) != ratio * (base.vertex(i) - base.vertex(0)))
      fail_domain("not a homothet of the base simplex");
  if (ratio == 1) {
    if (s.vertex(0) != base.vertex(0)) fail_domain("ratio-1 translate has no homothet form");
    return {ratio, base.barycentric(base.barycenter())};
  }
  // s.v0 = ratio·b.v0 + (1−ratio)·q
  RationalVector q = Rational(1) / (1 - ratio) * (s.vertex(0) - ratio * base.vertex(0));
  return {ratio, base.barycentric(q)};
}

Simplex from_homothet_form(const Simplex& base, const HomothetForm& form) {
  const std::size_t n = base.dim();
  RationalVector q(n, Rational(0));
  for (std::size_t j = 0; j <= n; ++j) q = q + form.position[j] * base.vertex(j);
  std::vector<RationalVector> verts;
  for (const auto& v : base.vertices()) verts.push_back(form.ratio * v + (1 - form.ratio) * q);
  return Simplex(std::move(verts));
}

nlohmann::json to_json(const RationalVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

RationalVector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) fail_input("expected an array of rationals");
  RationalVector v;
  for (const auto& x : j) {
    if (x.is_string())
      v.push_back(parse_rational(x.get<std::string>()));
    else if (x.is_number_integer())
      v.push_back(Rational(x.get<long>()));
    else
      fail_input("rationals must be \"p/q\" strings or integers, got " + x.dump());
  }
  return v;
}

nlohmann::json to_json(const Simplex& s) {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : s.vertices()) verts.push_back(to_json(v));
  return {{"dim", s.dim()}, {"vertices", verts}};
}

Simplex simplex_from_json(const nlohmann::json& j) {
  if (!j.contains("vertices")) fail_input("simplex JSON needs 'vertices'");
  std::vector<RationalVector> verts;
  for (const auto& v : j.at("vertices")) verts.push_back(vector_from_json(v));
  Simplex s(std::move(verts));
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != s.dim())
    fail_input("simplex 'dim' disagrees with its vertices");
  return s;
}

}  // namespace bmlab
