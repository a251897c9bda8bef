#include "bmlab/families.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "bmlab/enclosure.hpp"

namespace bmlab {

namespace {

RationalVector unit(std::size_t n1, std::size_t j) {
  RationalVector e(n1, Rational(0));
  e[j] = 1;
  return e;
}

RationalVector combine(const Rational& w, const RationalVector& a, const RationalVector& b) {
  RationalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = w * a[i] + (1 - w) * b[i];
  return out;
}

Simplex member_at(const Simplex& t, const Rational& mu, const RationalVector& p) {
  return from_homothet_form(t, {mu, p});
}

/// (1−μ)p identifies a member uniquely, including the μ = 1 case.
RationalVector member_key(const Rational& mu, const RationalVector& p) { return (1 - mu) * p; }

void check_lambda(const Rational& lambda) {
  if (lambda < Rational(1, 2) || lambda >= 1) fail_input("λ must lie in [1/2, 1)");
}

}  // namespace

SimplexFamily corner_simplices(const Simplex& t, const Rational& mu, const Rational& lambda) {
  if (mu <= 0 || mu > 1) fail_input("corner_simplices: μ must lie in (0, 1]");
  check_lambda(lambda);
  SimplexFamily f{{lambda, mu, 0, t}, {}, {}, {}};
  std::map<RationalVector, std::size_t> seen;
  const std::size_t n1 = t.dim() + 1;
  for (std::size_t j = 0; j < n1; ++j) {
    RationalVector p = unit(n1, j);
    if (!seen.emplace(member_key(mu, p), f.members.size()).second) continue;
    f.members.push_back(member_at(t, mu, p));
    f.positions.push_back(p);
    GenerationEntry e;
    e.corner = static_cast<long>(j);
    f.generation_log.push_back(e);
  }
  return f;
}

SimplexFamily grow_family(const SimplexFamily& f, unsigned steps, std::size_t cap) {
  SimplexFamily out = f;
  if (out.size() > cap) fail_capacity("family already exceeds the member cap");
  const Rational& lambda = out.params.lambda;
  const Rational& mu = out.params.mu;
  std::map<RationalVector, std::size_t> seen;
  for (std::size_t m = 0; m < out.size(); ++m) seen.emplace(member_key(mu, out.positions[m]), m);
  for (unsigned s = 0; s < steps; ++s) {
    const std::size_t current = out.size();
    const unsigned gen = out.params.k + 1;
    for (std::size_t a = 0; a < current; ++a)
      for (std::size_t b = 0; b < current; ++b) {
        if (a == b) continue;
        RationalVector p = combine(lambda, out.positions[a], out.positions[b]);
        if (!seen.emplace(member_key(mu, p), out.size()).second) continue;
        if (out.size() + 1 > cap)
          fail_capacity("family growth exceeds the member cap of " + std::to_string(cap));
        out.members.push_back(member_at(out.params.base, mu, p));
        out.positions.push_back(std::move(p));
        out.generation_log.push_back({static_cast<long>(a), static_cast<long>(b), lambda, -1, gen});
      }
    out.params.k = gen;
  }
  return out;
}

nlohmann::json to_json(const SimplexFamily& f) {
  nlohmann::json members = nlohmann::json::array();
  nlohmann::json log = nlohmann::json::array();
  for (std::size_t m = 0; m < f.size(); ++m) {
    members.push_back(to_json(f.members[m]));
    const auto& e = f.generation_log[m];
    if (e.corner >= 0)
      log.push_back({{"corner", e.corner}, {"generation", e.generation}});
    else
      log.push_back({{"parent1", e.parent1}, {"parent2", e.parent2}, {"weight", to_string(e.weight)},
                     {"generation", e.generation}});
  }
  return {{"lambda", to_string(f.params.lambda)},
          {"mu", to_string(f.params.mu)},
          {"k", f.params.k},
          {"base", to_json(f.params.base)},
          {"members", members},
          {"generation_log", log}};
}

// ---------------------------------------------------------------------------
// Generation paths

unsigned FamilyPath::depth() const {
  std::vector<unsigned> d(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].corner < 0)
      d[i] = 1 + std::max(d[static_cast<std::size_t>(nodes[i].left)], d[static_cast<std::size_t>(nodes[i].right)]);
  return nodes.empty() ? 0 : d.back();
}

RationalVector FamilyPath::position(std::size_t n) const {
  std::vector<RationalVector> val(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const PathNode& nd = nodes[i];
    if (nd.corner >= 0)
      val[i] = unit(n + 1, static_cast<std::size_t>(nd.corner));
    else
      val[i] = combine(nd.weight, val[static_cast<std::size_t>(nd.left)], val[static_cast<std::size_t>(nd.right)]);
  }
  return val.back();
}

nlohmann::json to_json(const FamilyPath& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& nd : p.nodes) {
    if (nd.corner >= 0)
      out.push_back({{"corner", nd.corner}});
    else
      out.push_back(nlohmann::json::array({nd.left, nd.right, to_string(nd.weight)}));
  }
  return out;
}

FamilyPath path_from_json(const nlohmann::json& j) {
  FamilyPath p;
  try {
    for (const auto& e : j) {
      PathNode nd;
      if (e.is_object()) {
        nd.corner = e.at("corner").get<long>();
        if (nd.corner < 0) fail_input("negative corner index in path");
      } else {
        nd.left = e.at(0).get<long>();
        nd.right = e.at(1).get<long>();
        nd.weight = parse_rational(e.at(2).get<std::string>());
        const long here = static_cast<long>(p.nodes.size());
        if (nd.left < 0 || nd.right < 0 || nd.left >= here || nd.right >= here)
          fail_input("path node refers to a later node");
      }
      p.nodes.push_back(nd);
    }
  } catch (const nlohmann::json::exception& e) {
    fail_input(std::string("malformed path: ") + e.what());
  }
  if (p.nodes.empty()) fail_input("empty path");
  return p;
}

Simplex replay_path(const Simplex& t, const Rational& mu, const FamilyPath& path) {
  std::vector<Simplex> val;
  val.reserve(path.nodes.size());
  const std::size_t n1 = t.dim() + 1;
  for (const auto& nd : path.nodes) {
    if (nd.corner >= 0) {
      if (static_cast<std::size_t>(nd.corner) >= n1) fail_input("corner index out of range");
      val.push_back(homothety(t, t.vertex(static_cast<std::size_t>(nd.corner)), mu));
    } else {
      val.push_back(weighted_average(val[static_cast<std::size_t>(nd.left)], val[static_cast<std::size_t>(nd.right)],
                                     nd.weight));
    }
  }
  return val.back();
}

// ---------------------------------------------------------------------------
// Constructive containment

namespace {

class Locator {
 public:
  Locator(Rational lambda, std::size_t n1) : lambda_(std::move(lambda)) {
    for (std::size_t j = 0; j < n1; ++j) {
      PathNode nd;
      nd.corner = static_cast<long>(j);
      nodes_.push_back(nd);
      depth_.push_back(0);
    }
  }

  /// Target with slack vector c = (1−s)q over the vertex labels `verts`,
  /// corners realized by `corner` nodes, corner ratio μ (all relative to the
  /// current working simplex).
  long solve(std::vector<long> corner, RationalVector c, Rational s, Rational mu) {
    while (true) {
      const std::size_t m = corner.size() - 1;
      if (m == 0) return corner[0];
      const Rational r = 1 - c[m];
      if (r <= mu) return corner[m];
      if (m == 1) return solve_edge(corner[0], corner[1], c[0], c[1], mu);
      // Shrink factor of this level: σ = α̂μ with α̂^m ≥ s/μ.
      Rational sigma = level_size(s, mu, m);
      std::vector<long> next(m);
      for (std::size_t i = 0; i < m; ++i) next[i] = solve_edge(corner[i], corner[m], r - sigma, 1 - r, mu);
      RationalVector c2(m);
      for (std::size_t i = 0; i < m; ++i) c2[i] = c[i] / r;
      corner = std::move(next);
      c = std::move(c2);
      s = s / r;
      mu = sigma / r;
    }
  }

  FamilyPath path(long root) const {
    // Keep only nodes reachable from the root, renumbered in order.
    std::vector<long> keep(nodes_.size(), -1);
    std::vector<char> live(nodes_.size(), 0);
    live[static_cast<std::size_t>(root)] = 1;
    for (long i = root; i >= 0; --i) {
      if (!live[static_cast<std::size_t>(i)]) continue;
      const PathNode& nd = nodes_[static_cast<std::size_t>(i)];
      if (nd.corner < 0) live[static_cast<std::size_t>(nd.left)] = live[static_cast<std::size_t>(nd.right)] = 1;
    }
    FamilyPath p;
    for (long i = 0; i <= root; ++i) {
      if (!live[static_cast<std::size_t>(i)]) continue;
      PathNode nd = nodes_[static_cast<std::size_t>(i)];
      if (nd.corner < 0) {
        nd.left = keep[static_cast<std::size_t>(nd.left)];
        nd.right = keep[static_cast<std::size_t>(nd.right)];
      }
      keep[static_cast<std::size_t>(i)] = static_cast<long>(p.nodes.size());
      p.nodes.push_back(nd);
    }
    return p;
  }

 private:
  static Rational level_size(const Rational& s, const Rational& mu, std::size_t m) {
    const Rational ratio = s / mu;
    if (ratio >= 1) return mu;
    Enclosure a = nth_root(ratio, static_cast<unsigned>(m), 64);
    Rational alpha = a.hi;
    if (alpha > 1) alpha = 1;
    return alpha * mu;
  }

  long add(const Rational& w, long left, long right) {
    PathNode nd;
    nd.left = left;
    nd.right = right;
    nd.weight = w;
    nodes_.push_back(nd);
    depth_.push_back(1 + std::max(depth_[static_cast<std::size_t>(left)], depth_[static_cast<std::size_t>(right)]));
    return static_cast<long>(nodes_.size()) - 1;
  }

  /// Edge problem: a member x·A + (1−x)·B of ratio μ must satisfy
  /// (1−μ)x ≤ slack_a and (1−μ)(1−x) ≤ slack_b.
  long solve_edge(long node_a, long node_b, const Rational& slack_a, const Rational& slack_b, const Rational& mu) {
    const Rational lo = 1 - slack_b / (1 - mu);
    const Rational hi = slack_a / (1 - mu);
    if (lo > hi) fail_domain("edge problem has an empty window: target larger than the member ratio");
    auto inside = [&](const Rational& x) { return lo <= x && x <= hi; };
    Rational xl = 0, xh = 1;
    long nl = node_b, nh = node_a;
    for (int iter = 0; iter < 100000; ++iter) {
      if (inside(xl)) return nl;
      if (inside(xh)) return nh;
      Rational xj = lambda_ * xl + (1 - lambda_) * xh;
      Rational xk = (1 - lambda_) * xl + lambda_ * xh;
      long nj = add(lambda_, nl, nh);
      if (inside(xj)) return nj;
      long nk = add(lambda_, nh, nl);
      if (inside(xk)) return nk;
      if (hi < xj) {
        xh = xj, nh = nj;
      } else if (hi < xk) {
        xl = xj, nl = nj, xh = xk, nh = nk;
      } else {
        xl = xk, nl = nk;
      }
    }
    fail_domain("edge refinement did not converge");
  }

  Rational lambda_;
  std::vector<PathNode> nodes_;
  std::vector<unsigned> depth_;
};

/// Smallest integer N with a ≥ λ^N, i.e. ⌈log a / log λ⌉ for a ∈ (0,1].
template <class Bracket>
Integer ceil_log_ratio(const Bracket& bracket, const Rational& lambda) {
  Enclosure a = bracket(128u);
  if (a.lo <= 0) fail_domain("k′ term has a non-positive argument");
  Enclosure x = log(a.lo) / log(lambda);
  Enclosure y = log(a.hi) / log(lambda);
  Integer n = floor(std::min(x.lo, y.lo));
  if (n < 0) n = 0;
  for (;; ++n) {
    const Rational target = pow(lambda, static_cast<unsigned long>(to_long(n)));
    unsigned bits = 128;
    Enclosure e = a;
    while (true) {
      if (e.lo >= target) return n;
      if (e.hi < target) break;
      bits *= 2;
      if (bits > 8192) fail_domain("k′ term undecidable at available precision");
      e = bracket(bits);
    }
  }
}

}  // namespace

Integer k_prime_formula(std::size_t n, const Rational& alpha_power_n, const Rational& lambda, const Rational& mu) {
  Integer total = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    auto bracket = [&](unsigned bits) {
      Enclosure alpha = nth_root(alpha_power_n, static_cast<unsigned>(n), bits);
      return pow(alpha, j - 1) * (Enclosure::exact(1) - alpha) * Enclosure::exact(mu);
    };
    total += ceil_log_ratio(bracket, lambda);
  }
  return total;
}

Integer k_prime_formula_alpha(std::size_t n, const Rational& alpha, const Rational& lambda, const Rational& mu) {
  return k_prime_formula(n, pow(alpha, n), lambda, mu);
}

LocateResult locate_containing_simplex(const Simplex& t, const Simplex& target, const Rational& lambda,
                                       const Rational& mu) {
  check_lambda(lambda);
  if (mu <= 0 || mu >= 1) fail_input("locate: μ must lie in (0, 1)");
  if (t.dim() != target.dim()) fail_input("locate: dimension mismatch");
  if (!contains_simplex(t, target)) fail_input("locate: target is not inside T");
  HomothetForm form = homothet_form(t, target);
  const Rational& s = form.ratio;
  if (s > mu) fail_input("locate: target is larger than μT");
  const std::size_t n = t.dim();
  RationalVector c(n + 1);
  for (std::size_t j = 0; j <= n; ++j) c[j] = (1 - s) * form.position[j];

  Locator loc(lambda, n + 1);
  std::vector<long> corners(n + 1);
  for (std::size_t j = 0; j <= n; ++j) corners[j] = static_cast<long>(j);
  long root = loc.solve(corners, c, s, mu);
  FamilyPath path = loc.path(root);
  RationalVector p = path.position(n);
  for (std::size_t j = 0; j <= n; ++j)
    if ((1 - mu) * p[j] > c[j]) fail_domain("locate: constructed member misses the target (internal error)");
  Simplex member = member_at(t, mu, p);
  Enclosure alpha = nth_root(s / mu, static_cast<unsigned>(n), 64);
  Integer kp = s < mu ? k_prime_formula(n, s / mu, lambda, mu) : Integer(-1);
  return {member, path, path.depth(), alpha.lo, alpha.hi, kp};
}

Simplex clamp_translate(const Simplex& t, const Simplex& s) {
  if (t.dim() != s.dim()) fail_input("clamp: dimension mismatch");
  HomothetForm form = homothet_form(t, s);
  const Rational& r = form.ratio;
  if (r >= 1) fail_input("clamp: ratio must be below 1");
  RationalVector m(form.position.size());
  Rational total = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    m[j] = std::max(Rational((1 - r) * form.position[j]), Rational(0));
    total += m[j];
  }
  if (total > 1) fail_input("clamp: S does not meet T");
  // The region {β ≥ m} is S∩T; position m/Σm keeps (1−r)p ≤ m.
  RationalVector p(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) p[j] = m[j] / total;
  return from_homothet_form(t, {r, p});
}

std::vector<Rational> midpoint_gaps(const Rational& lambda, unsigned generations) {
  check_lambda(lambda);
  std::vector<Rational> pts = {0, 1};
  std::vector<Rational> gaps;
  for (unsigned g = 0;; ++g) {
    Rational largest = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) largest = std::max(largest, Rational(pts[i + 1] - pts[i]));
    gaps.push_back(largest);
    if (g == generations) break;
    std::vector<Rational> next;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      next.push_back(pts[i]);
      next.push_back(lambda * pts[i] + (1 - lambda) * pts[i + 1]);
      next.push_back((1 - lambda) * pts[i] + lambda * pts[i + 1]);
    }
    next.push_back(pts.back());
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    pts = std::move(next);
  }
  return gaps;
}

// ---------------------------------------------------------------------------
// Fractal inequality

namespace {

/// Cells of the grid whose center y has (y − x)/μ inside an occupied cell of A.
std::size_t pulled_back_excess(const VoxelSet& a, const VoxelSet& member_cells, const RationalVector& offset,
                               const Rational& mu) {
  const GridSpec& g = a.grid();
  // Per axis: cell index of the preimage of each cell center, -1 if off grid.
  std::vector<std::vector<long>> pre(g.dim);
  for (std::size_t k = 0; k < g.dim; ++k) {
    pre[k].resize(static_cast<std::size_t>(g.extents[k]));
    for (long c = 0; c < g.extents[k]; ++c) {
      Rational y = g.origin[k] + g.h * (Rational(2 * c + 1, 2));
      Rational z = (y - offset[k]) / mu;
      Integer idx = floor((z - g.origin[k]) / g.h);
      pre[k][static_cast<std::size_t>(c)] = (idx >= 0 && idx < g.extents[k]) ? to_long(idx) : -1;
    }
  }
  std::size_t count = 0;
  const std::size_t total = g.cell_count();
  CellIndex z(g.dim);
  for (std::size_t i = 0; i < total; ++i) {
    if (!member_cells.test(i) || a.test(i)) continue;
    CellIndex c = a.cell_of(i);
    bool ok = true;
    for (std::size_t k = 0; k < g.dim && ok; ++k) {
      z[k] = pre[k][static_cast<std::size_t>(c[k])];
      ok = z[k] >= 0;
    }
    if (ok && a.test(z)) ++count;
  }
  return count;
}

RationalVector sample_position(std::size_t n1, const Rational& lambda, unsigned k, std::mt19937_64& rng) {
  if (k == 0) {
    std::uniform_int_distribution<std::size_t> pick(0, n1 - 1);
    return unit(n1, pick(rng));
  }
  RationalVector left = sample_position(n1, lambda, k - 1, rng);
  RationalVector right = sample_position(n1, lambda, k - 1, rng);
  return combine(lambda, left, right);
}

}  // namespace

FractalReport check_fractal_inequality(const VoxelSet& a, const Simplex& t, const Rational& time, unsigned i,
                                       unsigned k, std::size_t cap, std::uint64_t seed) {
  if (time <= 0 || time > Rational(1, 2)) fail_input("fractal check: t must lie in (0, 1/2]");
  if (a.dim() != t.dim()) fail_input("fractal check: dimension mismatch");
  const GridSpec& g = a.grid();
  VoxelSet t_outer = rasterize_simplex(t, g, RasterMode::Outer);
  if (!is_subset(a, t_outer)) fail_input("fractal check: A is not inside T");

  FractalReport rep;
  rep.t = time;
  rep.lambda = 1 - time;
  rep.mu = pow(rep.lambda, i);
  rep.i = i;
  rep.k = k;
  rep.c = static_cast<long>(i + 2 * k);
  const Rational vol_t = volume(t);
  rep.delta = 1 - a.measure() / vol_t;
  rep.delta_at = interpolation_deficit(a, time);

  std::vector<RationalVector> positions;
  SimplexFamily base = corner_simplices(t, rep.mu, rep.lambda);
  try {
    SimplexFamily fam = grow_family(base, k, cap);
    positions = fam.positions;
    rep.family_size = fam.size();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Capacity) throw;
    rep.sampled = true;
    rep.family_size = cap;
    std::mt19937_64 rng(seed);
    std::map<RationalVector, int> seen;
    const std::size_t draws = std::min<std::size_t>(cap, 1024);
    for (std::size_t d = 0; d < draws; ++d) {
      RationalVector p = sample_position(t.dim() + 1, rep.lambda, k, rng);
      if (seen.emplace(p, 0).second) positions.push_back(std::move(p));
    }
    rep.sampled_members = positions.size();
  }

  const Rational cell = g.cell_volume();
  const Rational t_gap = cell * Rational(simplex_boundary_cells(t, g));
  const Rational a_boundary = cell * Rational(boundary_cell_count(a));
  for (const auto& p : positions) {
    FractalMemberRow row{member_at(t, rep.mu, p), 0, 0, 0, 0, 0, 0, 0, false, false};
    row.member_volume = pow(rep.mu, t.dim()) * vol_t;
    VoxelSet cells = rasterize_simplex(row.member, g, RasterMode::Center);
    row.measure_in_a = set_intersection(cells, a).measure();
    row.lower_bound = row.member_volume * (1 - rep.delta) - Rational(rep.c) * rep.delta_at;
    row.margin = cell * Rational(simplex_boundary_cells(row.member, g)) + row.member_volume * t_gap / vol_t;
    row.violation = row.measure_in_a + row.margin < row.lower_bound;

    RationalVector offset(t.dim(), Rational(0));
    for (std::size_t j = 0; j <= t.dim(); ++j) offset = offset + ((1 - rep.mu) * p[j]) * t.vertex(j);
    row.translate_excess = cell * Rational(pulled_back_excess(a, cells, offset, rep.mu));
    row.translate_bound = Rational(rep.c) * rep.delta_at;
    row.translate_margin = cell * Rational(simplex_boundary_cells(row.member, g)) + pow(rep.mu, t.dim()) * a_boundary;
    row.translate_violation = row.translate_excess > row.translate_bound + row.translate_margin;
    rep.violations += row.violation;
    rep.translate_violations += row.translate_violation;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

nlohmann::json to_json(const FractalReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"member", to_json(row.member)},
                    {"member_volume", to_string(row.member_volume)},
                    {"measure_in_A", to_string(row.measure_in_a)},
                    {"lower_bound", to_string(row.lower_bound)},
                    {"margin", to_string(row.margin)},
                    {"violation", row.violation},
                    {"translate_excess", to_string(row.translate_excess)},
                    {"translate_bound", to_string(row.translate_bound)},
                    {"translate_margin", to_string(row.translate_margin)},
                    {"translate_violation", row.translate_violation}});
  return {{"t", to_string(r.t)},
          {"lambda", to_string(r.lambda)},
          {"mu", to_string(r.mu)},
          {"i", r.i},
          {"k", r.k},
          {"c", r.c},
          {"delta", to_string(r.delta)},
          {"delta_At", to_string(r.delta_at)},
          {"family_size", r.family_size},
          {"sampled", r.sampled},
          {"sampled_members", r.sampled_members},
          {"violations", r.violations},
          {"translate_violations", r.translate_violations},
          {"members", rows}};
}

}  // namespace bmlab
