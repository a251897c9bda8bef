#include "bmlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "bmlab/enclosure.hpp"
#include "bmlab/polygon.hpp"

namespace bmlab {

namespace {

Rational cells(std::size_t k) { return Rational(static_cast<unsigned long>(k)); }

Rational constant_c_n(std::size_t n) { return Rational(pow(Integer(4 * static_cast<long>(n)), 5 * n)); }

VoxelSet sumset(const VoxelSet& a, const Rational& t) { return interpolated_sumset(a, a, t, SumsetMode::Exact); }

VoxelSet at_resolution(const VoxelSet& a, const Rational& t) {
  const long q = to_long(t.get_den());
  return q == 1 ? a : refine(a, q);
}

}  // namespace

// ---------------------------------------------------------------------------

StabilityReport stability_report(const VoxelSet& a, const Rational& t, const Rational& tau,
                                 const Rational& threshold) {
  if (a.empty()) fail_input("stability report: A is empty");
  if (tau <= 0 || tau > Rational(1, 2)) fail_input("stability report: tau must lie in (0, 1/2]");
  if (t < tau || t > 1 - tau) fail_input("stability report: t must lie in [tau, 1 - tau]");
  StabilityReport r;
  r.n = a.dim();
  r.t = t;
  r.tau = tau;
  r.threshold = threshold;
  const GridSpec& g = a.grid();
  VoxelSet d = sumset(a, t);
  VoxelSet af = at_resolution(a, t);
  VoxelSet hull = convex_hull(a);

  r.measure_a = a.measure();
  r.measure_d = d.measure();
  r.measure_hull = hull.measure();
  r.delta_at = set_difference(d, af).measure();
  r.hull_deficit = set_difference(hull, a).measure();
  r.omega_upper = r.hull_deficit / r.measure_a;
  if (r.delta_at > 0) r.ratio = r.hull_deficit / r.delta_at;
  r.c_n_bound = constant_c_n(r.n) / tau;

  const unsigned n = static_cast<unsigned>(r.n);
  Enclosure root = nth_root(r.measure_d / r.measure_a, n, 40);
  r.delta_prime = to_double((root.lo + root.hi) / 2) - 1;
  r.delta_prime_relation = to_double(r.delta_at / (Rational(static_cast<long>(n)) * r.measure_a));

  r.margin_a = g.cell_volume() * cells(boundary_cell_count(a));
  r.margin_d = d.grid().cell_volume() * cells(boundary_cell_count(d));
  r.margin_delta = r.margin_a + r.margin_d;
  r.margin_hull = g.cell_volume() * cells(boundary_cell_count(hull));

  if (r.delta_at / r.measure_a > threshold)
    r.verdict = "out of regime";
  else
    r.verdict = r.hull_deficit <= r.c_n_bound * r.delta_at + r.margin_hull ? "holds" : "violated";
  return r;
}

nlohmann::json to_json(const StabilityReport& r) {
  nlohmann::json j = {{"n", r.n},
                      {"t", to_string(r.t)},
                      {"tau", to_string(r.tau)},
                      {"measure_A", to_string(r.measure_a)},
                      {"measure_D", to_string(r.measure_d)},
                      {"measure_hull", to_string(r.measure_hull)},
                      {"delta_At", to_string(r.delta_at)},
                      {"hull_deficit", to_string(r.hull_deficit)},
                      {"delta_prime", r.delta_prime},
                      {"delta_prime_relation", r.delta_prime_relation},
                      {"omega_upper", to_string(r.omega_upper)},
                      {"omega_note", "upper bound with K_A = co(A)"},
                      {"ratio", r.ratio ? nlohmann::json(to_string(*r.ratio)) : nlohmann::json(nullptr)},
                      {"C_n_bound", to_string(r.c_n_bound)},
                      {"threshold", to_string(r.threshold)},
                      {"margins",
                       {{"measure_A", to_string(r.margin_a)},
                        {"measure_D", to_string(r.margin_d)},
                        {"delta_At", to_string(r.margin_delta)},
                        {"hull_deficit", to_string(r.margin_hull)}}},
                      {"verdict", r.verdict}};
  j["approx"] = {{"measure_A", to_double(r.measure_a)},
                 {"delta_At", to_double(r.delta_at)},
                 {"hull_deficit", to_double(r.hull_deficit)}};
  return j;
}

std::string csv_header() {
  return "n,t,tau,measure_A,measure_D,delta_At,hull_deficit,delta_prime,omega_upper,ratio,margin_delta,margin_hull,"
         "verdict";
}

std::string csv_row(const StabilityReport& r) {
  std::ostringstream os;
  os << std::setprecision(10) << r.n << ',' << to_string(r.t) << ',' << to_string(r.tau) << ','
     << to_double(r.measure_a) << ',' << to_double(r.measure_d) << ',' << to_double(r.delta_at) << ','
     << to_double(r.hull_deficit) << ',' << r.delta_prime << ',' << to_double(r.omega_upper) << ','
     << (r.ratio ? std::to_string(to_double(*r.ratio)) : "") << ',' << to_double(r.margin_delta) << ','
     << to_double(r.margin_hull) << ',' << r.verdict;
  return os.str();
}

// ---------------------------------------------------------------------------

Rational john_epsilon_squared(std::size_t n, const Rational& tau, const Rational& b) {
  if (tau <= 0 || tau >= 1) fail_input("john check: tau must lie in (0, 1)");
  const Rational base = pow(b, n) / 2 * pow(tau / (1 - tau), n);
  return base * base * pow(Rational(4) / Rational(static_cast<long>(n)), n);
}

JohnReport john_point_check(const JohnCheckInput& in) {
  const std::size_t n = in.p.dim();
  if (in.a.dim() != n) fail_input("john check: dimension mismatch");
  if (in.b <= 0 || in.b >= 1) fail_input("john check: b must lie in (0, 1)");
  if (in.t < in.tau || in.t > 1 - in.tau) fail_input("john check: t must lie in [tau, 1 - tau]");
  const GridSpec& g = in.a.grid();
  if (!is_subset(in.a, rasterize_simplex(in.p, g, RasterMode::Outer)))
    fail_input("john check: A is not contained in P");

  JohnReport r;
  VoxelSet pc = rasterize_simplex(in.p, g, RasterMode::Center);
  r.missing = set_difference(pc, in.a).measure() / volume(in.p);
  r.eps_squared = john_epsilon_squared(n, in.tau, in.b);
  r.precondition = r.missing * r.missing < r.eps_squared;
  if (!r.precondition) {
    std::ostringstream os;
    os << "john check: |P\\A|/|P| = " << to_double(r.missing) << " is not below eps = "
       << std::sqrt(to_double(r.eps_squared));
    fail_input(os.str());
  }

  VoxelSet d = sumset(in.a, in.t);
  const RationalVector o = in.p.barycenter();
  auto missing_at = [&](const Rational& b) -> std::size_t {
    if (b >= 1) return 0;
    VoxelSet inner = rasterize_simplex(homothety(in.p, o, 1 - b), d.grid(), RasterMode::Center);
    return set_difference(inner, d).count();
  };
  r.missing_cells = missing_at(in.b);
  r.inclusion = r.missing_cells == 0;

  long lo = 0, hi = 1024;  // inclusion holds at hi
  if (missing_at(0) == 0) hi = 0;
  while (hi - lo > 1) {
    long mid = (lo + hi) / 2;
    if (missing_at(frac(mid, 1024)) == 0)
      hi = mid;
    else
      lo = mid;
  }
  r.smallest_b = frac(hi, 1024);
  return r;
}

nlohmann::json to_json(const JohnReport& r) {
  return {{"missing_fraction", to_string(r.missing)},
          {"eps_squared", to_string(r.eps_squared)},
          {"eps_approx", std::sqrt(to_double(r.eps_squared))},
          {"precondition", r.precondition},
          {"inclusion", r.inclusion},
          {"missing_cells", r.missing_cells},
          {"smallest_b", to_string(r.smallest_b)}};
}

// ---------------------------------------------------------------------------

std::vector<ReductionPiece> reduce_to_simplices_2d(const VoxelSet& a, const RationalVector& o) {
  if (a.dim() != 2) fail_input("reduction to simplices is implemented for n = 2 only");
  if (o.size() != 2) fail_input("reduction: o must be a planar point");
  if (a.empty()) fail_input("reduction: A is empty");
  auto hull = hull_polygon_2d(a);
  const plane::Point po{o[0], o[1]};
  for (std::size_t k = 0; k < hull.size(); ++k)
    if (plane::cross(hull[k], hull[(k + 1) % hull.size()], po) <= 0)
      fail_input("reduction: o is not interior to co(A)");
  std::vector<ReductionPiece> out;
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const auto& p = hull[k];
    const auto& q = hull[(k + 1) % hull.size()];
    Simplex tri({o, {p[0], p[1]}, {q[0], q[1]}});
    VoxelSet part = set_intersection(a, rasterize_simplex(tri, a.grid(), RasterMode::Center));
    out.push_back({tri, std::move(part), volume(tri)});
  }
  return out;
}

std::vector<PieceInequality> reduction_inequalities(const VoxelSet& a, const std::vector<ReductionPiece>& pieces,
                                                   const Rational& t, const Rational& tau) {
  VoxelSet d = sumset(a, t);
  const Rational factor = 1 - tau / constant_c_n(a.dim());
  std::vector<PieceInequality> out;
  for (const auto& piece : pieces) {
    PieceInequality p;
    p.missing_a = set_difference(rasterize_simplex(piece.triangle, a.grid(), RasterMode::Center), a).measure();
    p.missing_d = set_difference(rasterize_simplex(piece.triangle, d.grid(), RasterMode::Center), d).measure();
    p.rhs = factor * p.missing_a;
    const Rational margin = d.grid().cell_volume() * cells(simplex_boundary_cells(piece.triangle, d.grid()));
    p.holds = p.missing_d <= p.rhs + margin;
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// A on a grid padded by `pad` cells on every side.
VoxelSet embed(const VoxelSet& a, long pad) {
  const GridSpec& g = a.grid();
  RationalVector origin = g.origin;
  std::vector<long> ext = g.extents;
  for (std::size_t k = 0; k < g.dim; ++k) {
    origin[k] -= Rational(pad) * g.h;
    ext[k] += 2 * pad;
  }
  VoxelSet out(GridSpec(origin, g.h, ext));
  for (std::size_t l = 0; l < g.cell_count(); ++l) {
    if (!a.test(l)) continue;
    CellIndex c = a.cell_of(l);
    for (auto& x : c) x += pad;
    out.set(c);
  }
  return out;
}

RationalVector centroid_of_cells(const VoxelSet& a) {
  RationalVector sum(a.dim(), Rational(0));
  std::size_t count = 0;
  for (std::size_t l = 0; l < a.grid().cell_count(); ++l) {
    if (!a.test(l)) continue;
    sum = sum + cell_center(a.grid(), a.cell_of(l));
    ++count;
  }
  return Rational(1) / cells(count) * sum;
}

}  // namespace

AsymmetryResult asymmetry_index(const VoxelSet& a, const VoxelSet& b) {
  if (a.empty() || b.empty()) fail_input("asymmetry index: empty input");
  if (a.dim() != b.dim()) fail_input("asymmetry index: dimension mismatch");
  const std::size_t n = a.dim();
  const GridSpec& ga = a.grid();
  const GridSpec& gb = b.grid();

  VoxelSet hull_b = convex_hull(b);
  const Rational measure_a = a.measure();
  AsymmetryResult res;
  res.s = nth_root(measure_a / hull_b.measure(), static_cast<unsigned>(n), 32).lo;
  const RationalVector cb = centroid_of_cells(hull_b);
  const RationalVector ca = centroid_of_cells(convex_hull(a));

  // World half-spaces of co(B).
  std::vector<RationalHalfSpace> base;
  for (const auto& hs : hull_half_spaces(b)) {
    RationalHalfSpace w{RationalVector(n), Rational(static_cast<long>(hs.b)) * gb.h};
    for (std::size_t k = 0; k < n; ++k) {
      w.a[k] = Rational(static_cast<long>(hs.a[k]));
      w.b += w.a[k] * gb.origin[k];
    }
    base.push_back(w);
  }

  const long max_cells = 16;
  long pad = max_cells + 2;
  {
    // co(B) extent after scaling, measured in A's cells.
    Rational ext = 0;
    for (std::size_t k = 0; k < n; ++k) ext = std::max(ext, Rational(Rational(gb.extents[k]) * gb.h));
    pad += to_long(ceil(res.s * ext / ga.h));
  }
  VoxelSet big = embed(a, pad);

  // s(x − cb) + ca + shift ∈ K  ⇔  a·y ≤ s(b − a·cb) + a·(ca + shift).
  auto evaluate = [&](const RationalVector& shift, Rational* margin) -> Rational {
    std::vector<RationalHalfSpace> hs;
    for (const auto& w : base) {
      Rational dot_cb = 0, dot_c = 0;
      for (std::size_t k = 0; k < n; ++k) {
        dot_cb += w.a[k] * cb[k];
        dot_c += w.a[k] * (ca[k] + shift[k]);
      }
      hs.push_back({w.a, res.s * (w.b - dot_cb) + dot_c});
    }
    VoxelSet k = rasterize_polytope(hs, big.grid());
    ++res.evaluations;
    if (margin) *margin = ga.cell_volume() * cells(boundary_cell_count(k)) / measure_a;
    const Rational common = set_intersection(big, k).measure();
    return (measure_a + k.measure() - 2 * common) / measure_a;
  };

  RationalVector shift(n, Rational(0));
  Rational best = evaluate(shift, &res.margin);
  res.initial = best;
  for (long step = 4; step >= 1; step /= 2) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t k = 0; k < n && !improved; ++k)
        for (long sgn : {1L, -1L}) {
          RationalVector trial = shift;
          trial[k] += Rational(sgn * step) * ga.h;
          if (abs(trial[k]) > Rational(max_cells) * ga.h) continue;
          Rational v = evaluate(trial, nullptr);
          if (v < best) {
            best = v;
            shift = trial;
            improved = true;
            break;
          }
        }
    }
  }
  res.value = best;
  res.shift = shift;
  return res;
}

}  // namespace bmlab
