#include "bmlab/covers.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "bmlab/polygon.hpp"

namespace bmlab {

namespace {

std::string show(const Rational& x) {
  std::ostringstream os;
  os << std::setprecision(12) << to_double(x);
  return os.str();
}

std::string show(const Enclosure& e) {
  if (e.lo == e.hi) return show(e.lo);
  std::ostringstream os;
  os << "[" << std::setprecision(12) << to_double(e.lo) << ", " << to_double(e.hi) << "]";
  return os.str();
}

Enclosure exact(const Rational& x) { return Enclosure::exact(x); }
Enclosure exact(long x) { return Enclosure::exact(Rational(x)); }

Rational lg_n(std::size_t n) { return Rational(static_cast<long>(n)); }

/// Smallest dyadic 2^-m at or above x (x > 0).
Rational dyadic_ceil(const Rational& x, unsigned bits) {
  Integer scale = pow(Integer(2), bits);
  Integer num = ceil(x * Rational(scale));
  return frac(num, scale);
}

/// Lower bounds a = (1−r)p of the barycentric description {β ≥ a} of a
/// positive homothet rT + (1−r)p.
RationalVector lower_bounds(const Simplex& t, const Simplex& s) {
  HomothetForm f = homothet_form(t, s);
  if (f.ratio == 1) return RationalVector(t.dim() + 1, Rational(0));
  return (1 - f.ratio) * f.position;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters and audits

CoverParams compute_cover_params(std::size_t n, const Rational& t, CoverMode mode, unsigned desk_i) {
  if (n < 2) fail_input("cover parameters need n >= 2");
  if (t <= 0 || t > Rational(1, 2)) fail_input("cover parameters need t in (0, 1/2]");
  CoverParams p;
  p.n = n;
  p.t = t;
  p.tau = t;
  p.mode = mode;
  const Rational lambda = 1 - t;
  const Rational big = pow(Rational(2 * static_cast<long>(n)), 5);
  if (mode == CoverMode::Paper) {
    // Smallest i with ((1−t)^i (2n)^5)^n ≤ n.
    unsigned i = 0;
    while (pow(pow(lambda, i) * big, n) > lg_n(n)) ++i;
    p.i = i;
  } else {
    if (desk_i == 0) fail_input("desk mode needs i >= 1");
    p.i = desk_i;
  }
  p.mu = pow(lambda, p.i);
  p.eta_pow_n = pow(p.mu, n) / lg_n(n);
  p.eta = nth_root(p.eta_pow_n, static_cast<unsigned>(n));
  p.eta_hat = dyadic_ceil(p.eta.hi, 48);
  p.zeta = exact(static_cast<long>(n + 1)) * p.eta;
  p.zeta_hat = Rational(static_cast<long>(n + 1)) * p.eta_hat;
  p.k_bound = k_prime_formula(n, Rational(1) / lg_n(n), lambda, p.mu);
  p.density_target = exact(7 * static_cast<long>(n)) * log(lg_n(n));
  return p;
}

nlohmann::json to_json(const CoverParams& p) {
  return {{"n", p.n},
          {"t", to_string(p.t)},
          {"tau", to_string(p.tau)},
          {"i", p.i},
          {"mode", p.mode == CoverMode::Paper ? "paper" : "desk"},
          {"mu", to_string(p.mu)},
          {"eta_pow_n", to_string(p.eta_pow_n)},
          {"eta", {to_string(p.eta.lo), to_string(p.eta.hi)}},
          {"eta_hat", to_string(p.eta_hat)},
          {"zeta_hat", to_string(p.zeta_hat)},
          {"k_bound", p.k_bound.get_str()},
          {"density_target_approx", to_double(p.density_target.hi)}};
}

AuditLine constant_audit(std::size_t n, const Rational& t, const Rational& tau) {
  const long nn = static_cast<long>(n);
  Enclosure l2n = log(Rational(2 * nn));
  Enclosure lhs = exact(2) * (exact(1) + exact(Rational(pow(Integer(2 * nn), 5 * n))) * exact(19 * nn) * l2n / exact(t));
  Rational rhs = Rational(pow(Integer(4 * nn), 5 * n)) / tau;
  return {"2(1+(2n)^{5n}·19n·log(2n)/t) <= (4n)^{5n}/tau", certainly_le(lhs, exact(rhs)), show(lhs), show(rhs)};
}

std::vector<AuditLine> audit_cover_params(const CoverParams& p) {
  std::vector<AuditLine> out;
  const std::size_t n = p.n;
  const long nn = static_cast<long>(n);
  const Rational big = pow(Rational(2 * nn), 5);
  const Enclosure l2n = log(Rational(2 * nn));
  const Enclosure root_n = nth_root(lg_n(n), static_cast<unsigned>(n));

  {
    bool upper = pow(p.mu * big, n) <= lg_n(n);
    out.push_back({"(1-t)^i <= n^{1/n}/(2n)^5", upper, show(p.mu), show(root_n / exact(big))});
    bool lower = pow(2 * p.mu * big, n) >= lg_n(n);
    out.push_back({"(1-t)^i >= n^{1/n}/(2(2n)^5)", lower, show(p.mu), show(root_n / exact(2 * big))});
  }
  {
    bool lo = pow(2 * big, n) * p.eta_pow_n >= 1;
    bool hi = pow(big, n) * p.eta_pow_n <= 1;
    out.push_back({"eta in [1/(2(2n)^5), 1/(2n)^5]", lo && hi, show(p.eta), show(Rational(1) / big)});
  }
  {
    Enclosure rhs = exact(6) * l2n / exact(p.t);
    out.push_back({"i <= 6 log(2n)/t", certainly_le(exact(static_cast<long>(p.i)), rhs), std::to_string(p.i), show(rhs)});
  }
  {
    const Enclosure a = exact(nn + 1) * p.eta;
    Enclosure l = pow(exact(1) + a, n) - pow(exact(1) - exact(2) * a, n);
    Enclosure rhs = exact(4 * nn * (nn + 1)) * p.eta;
    out.push_back({"|L| <= 4 eta n(n+1)", certainly_le(l, rhs), show(l), show(rhs)});
  }
  {
    Enclosure rhs = exact(8 * nn) * l2n / exact(p.t);
    out.push_back({"k <= 8n log(2n)/t", certainly_le(exact(Rational(p.k_bound)), rhs), p.k_bound.get_str(), show(rhs)});
    Enclosure c = exact(Rational(Integer(p.i) + 2 * p.k_bound));
    Enclosure mid = (exact(6) + exact(16 * nn)) * l2n / exact(p.t);
    out.push_back({"c = i+2k <= 6log(2n)/t + 16n log(2n)/t", certainly_le(c, mid), show(c), show(mid)});
    Enclosure top = exact(19 * nn) * l2n / exact(p.t);
    out.push_back({"c = i+2k <= 19n log(2n)/t", certainly_le(c, top), show(c), show(top)});
  }
  {
    // |𝓑| ≤ 4ηn(n+1)η^{-n}·7n log n ≤ η^{-n}/(2n) ≤ (2n)^{5n}
    Enclosure first = exact(4 * nn * (nn + 1)) * p.eta * p.density_target;
    out.push_back({"4 eta n(n+1)·7n log n <= 1/(2n)", certainly_le(first, exact(Rational(1, 2 * nn))), show(first),
                   show(Rational(1, 2 * nn))});
    Rational second = Rational(1) / (Rational(2 * nn) * p.eta_pow_n);
    Rational cap(pow(Integer(2 * nn), 5 * n));
    out.push_back({"eta^{-n}/(2n) <= (2n)^{5n}", second <= cap, show(second), show(cap)});
  }
  out.push_back(constant_audit(n, p.t, p.tau));
  return out;
}

nlohmann::json to_json(const std::vector<AuditLine>& lines) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& l : lines) out.push_back({{"name", l.name}, {"holds", l.holds}, {"lhs", l.lhs}, {"rhs", l.rhs}});
  return out;
}

// ---------------------------------------------------------------------------
// Slab

Slab build_slab(const Simplex& t, const CoverParams& p) {
  const Rational a = Rational(static_cast<long>(p.n + 1)) * p.eta_hat;
  if (p.zeta_hat + a >= 1) fail_domain("slab is degenerate: zeta + (n+1)eta >= 1; choose a larger i");
  const RationalVector o = t.barycenter();
  Slab s{homothety(t, o, 1 - p.zeta_hat), homothety(t, o, 1 + a), homothety(t, o, 1 - p.zeta_hat - a), 0};
  s.volume_l = volume(s.l_outer) - volume(s.l_inner);
  return s;
}

std::size_t slab_sample_check(const Simplex& t, const CoverParams& p, std::size_t samples, std::uint64_t seed) {
  Slab slab = build_slab(t, p);
  const std::size_t n1 = p.n + 1;
  const Rational& eta = p.eta_hat;
  const Rational rho = (1 - (1 - p.zeta_hat)) / Rational(static_cast<long>(n1));
  RationalVector inner = lower_bounds(t, slab.l_inner);
  std::mt19937_64 rng(seed);
  const long den = 1L << 20;
  std::uniform_int_distribution<long> pick(0, den);
  std::size_t ok = 0, drawn = 0;
  while (drawn < samples) {
    RationalVector a(n1);
    Rational rest = 1 - eta;
    for (std::size_t j = 1; j < n1; ++j) {
      a[j] = -eta + (1 + eta) * frac(pick(rng), den);
      rest -= a[j];
    }
    a[0] = rest;
    if (a[0] < -eta) continue;
    Rational m_total = 0;
    bool near = false;
    for (const auto& x : a) {
      Rational m = std::max(x, Rational(0));
      m_total += m;
      near = near || m < rho;
    }
    if (m_total > 1 || !near) continue;  // misses T∖R
    ++drawn;
    Simplex x = from_homothet_form(t, {eta, Rational(1) / (1 - eta) * a});
    Rational overlap = 0;
    for (std::size_t j = 0; j < n1; ++j) overlap += std::max(a[j], inner[j]);
    if (contains_simplex(slab.l_outer, x) && overlap >= 1) ++ok;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Coverage witness

namespace {

struct Coverage {
  std::size_t checked = 0;
  std::size_t uncovered = 0;
};

/// Checks every cell center of T∖R (R = {β ≥ rho}) against members {β ≥ a}.
Coverage check_coverage(const Simplex& t, const std::vector<Simplex>& members, const Rational& rho,
                        const Rational& h) {
  const std::size_t n = t.dim();
  RationalVector lo = t.vertex(0), hi = t.vertex(0);
  for (const auto& v : t.vertices())
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  GridSpec g = grid_covering(lo, hi, h);
  if (g.cell_count() > 60'000'000) fail_capacity("coverage witness grid is too large; use a coarser resolution");

  std::vector<RationalVector> bounds;
  for (const auto& m : members) bounds.push_back(lower_bounds(t, m));

  // Buckets of side `f` cells.
  Rational ext = 0;
  if (!members.empty())
    for (std::size_t k = 0; k < n; ++k) {
      Rational mn = members[0].vertex(0)[k], mx = mn;
      for (const auto& v : members[0].vertices()) {
        mn = std::min(mn, v[k]);
        mx = std::max(mx, v[k]);
      }
      ext = std::max(ext, Rational(mx - mn));
    }
  const long f = std::max(1L, to_long(ceil(ext / h)));
  std::vector<long> bext(n);
  std::size_t nb = 1;
  for (std::size_t k = 0; k < n; ++k) nb *= static_cast<std::size_t>(bext[k] = g.extents[k] / f + 1);
  std::vector<std::vector<std::uint32_t>> buckets(nb);
  for (std::size_t m = 0; m < members.size(); ++m) {
    std::vector<long> blo(n), bhi(n);
    for (std::size_t k = 0; k < n; ++k) {
      Rational mn = members[m].vertex(0)[k], mx = mn;
      for (const auto& v : members[m].vertices()) {
        mn = std::min(mn, v[k]);
        mx = std::max(mx, v[k]);
      }
      blo[k] = std::clamp(to_long(floor((mn - g.origin[k]) / h)) / f, 0L, bext[k] - 1);
      bhi[k] = std::clamp(to_long(floor((mx - g.origin[k]) / h)) / f, 0L, bext[k] - 1);
    }
    std::vector<long> c = blo;
    while (true) {
      std::size_t idx = 0;
      for (std::size_t k = n; k-- > 0;) idx = idx * static_cast<std::size_t>(bext[k]) + static_cast<std::size_t>(c[k]);
      buckets[idx].push_back(static_cast<std::uint32_t>(m));
      std::size_t k = 0;
      for (; k < n; ++k) {
        if (++c[k] <= bhi[k]) break;
        c[k] = blo[k];
      }
      if (k == n) break;
    }
  }

  // β(center of cell c) = base + Σ_k c_k·step_k.
  std::vector<RationalVector> edges = edge_vectors(t);
  std::vector<RationalVector> cols(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) cols[k][i] = edges[i][k];
  // inverse of the edge matrix E (columns = edges) via solves.
  std::vector<RationalVector> e_rows(n, RationalVector(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) e_rows[r][c] = edges[c][r];
  auto bary = [&](const RationalVector& d) {
    RationalVector x = solve(e_rows, d);
    RationalVector b(n + 1);
    Rational s = 0;
    for (std::size_t j = 0; j < n; ++j) s += (b[j + 1] = x[j]);
    b[0] = -s;
    return b;
  };
  RationalVector first(n);
  for (std::size_t k = 0; k < n; ++k) first[k] = g.origin[k] + h / 2;
  RationalVector base = bary(first - t.vertex(0));
  base[0] += 1;
  std::vector<RationalVector> step(n);
  for (std::size_t k = 0; k < n; ++k) {
    RationalVector d(n, Rational(0));
    d[k] = h;
    step[k] = bary(d);
  }

  Coverage cov;
  const std::size_t total = g.cell_count();
  const long e0 = g.extents[0];
  CellIndex c(n, 0);
  RationalVector beta(n + 1), row(n + 1);
  for (std::size_t rowstart = 0; rowstart < total; rowstart += static_cast<std::size_t>(e0)) {
    std::size_t rem = rowstart / static_cast<std::size_t>(e0);
    for (std::size_t k = 1; k < n; ++k) {
      c[k] = static_cast<long>(rem % static_cast<std::size_t>(g.extents[k]));
      rem /= static_cast<std::size_t>(g.extents[k]);
    }
    row = base;
    for (std::size_t k = 1; k < n; ++k)
      for (std::size_t j = 0; j <= n; ++j) row[j] += Rational(c[k]) * step[k][j];
    beta = row;
    for (long x = 0; x < e0; ++x, beta = beta + step[0]) {
      bool in_t = true, in_r = true;
      for (const auto& b : beta) {
        if (b < 0) in_t = false;
        if (b < rho) in_r = false;
      }
      if (!in_t || in_r) continue;
      ++cov.checked;
      c[0] = x;
      std::size_t bidx = 0;
      for (std::size_t k = n; k-- > 0;) bidx = bidx * static_cast<std::size_t>(bext[k]) + static_cast<std::size_t>(c[k] / f);
      bool hit = false;
      for (std::uint32_t m : buckets[bidx]) {
        bool inside = true;
        for (std::size_t j = 0; j <= n && inside; ++j) inside = beta[j] >= bounds[m][j];
        if (inside) {
          hit = true;
          break;
        }
      }
      if (!hit) ++cov.uncovered;
    }
  }
  return cov;
}

/// Lattice whose translates of the standard simplex Δ = conv{0, e_1..e_n}
/// cover space. Columns of `basis` generate it; `inverse` maps back.
struct CoveringLattice {
  std::string name;
  std::vector<RationalVector> basis;    // basis[l] = l-th generator
  std::vector<RationalVector> inverse;  // rows of B^{-1}
  Rational density;
};

CoveringLattice make_lattice(std::size_t n) {
  CoveringLattice lat;
  if (n == 2) {
    lat.name = "triangle lattice (2/3,-1/3),(-1/3,2/3)";
    lat.basis = {{Rational(2, 3), Rational(-1, 3)}, {Rational(-1, 3), Rational(2, 3)}};
    lat.inverse = {{2, 1}, {1, 2}};
    lat.density = Rational(3, 2);
    // Exact check: translates near the fundamental parallelogram cover it.
    using plane::Point;
    const auto& b1 = lat.basis[0];
    const auto& b2 = lat.basis[1];
    plane::Polygon cell = plane::convex_hull(
        {Point{0, 0}, Point{b1[0], b1[1]}, Point{b1[0] + b2[0], b1[1] + b2[1]}, Point{b2[0], b2[1]}});
    std::vector<plane::Polygon> cutters;
    for (long z1 = -3; z1 <= 3; ++z1)
      for (long z2 = -3; z2 <= 3; ++z2) {
        Rational x = Rational(z1) * b1[0] + Rational(z2) * b2[0];
        Rational y = Rational(z1) * b1[1] + Rational(z2) * b2[1];
        cutters.push_back(plane::convex_hull({Point{x, y}, Point{x + 1, y}, Point{x, y + 1}}));
      }
    if (!plane::difference(cell, cutters).empty()) fail_domain("triangle lattice does not cover (internal error)");
    return lat;
  }
  // Cube lattice (1/n)Z^n: Δ contains [0,1/n]^n, whose translates tile.
  lat.name = "cube lattice (1/n)Z^n";
  lat.basis.assign(n, RationalVector(n, Rational(0)));
  lat.inverse.assign(n, RationalVector(n, Rational(0)));
  Rational fact = 1;
  for (std::size_t k = 0; k < n; ++k) {
    lat.basis[k][k] = Rational(1, static_cast<long>(n));
    lat.inverse[k][k] = Rational(static_cast<long>(n));
    fact *= Rational(static_cast<long>(k + 1));
  }
  lat.density = pow(Rational(static_cast<long>(n)), n) / fact;
  return lat;
}

/// Barycentric lower bounds a of the translate η·Δ + η·B(z + u) (vertex 0 is
/// the origin of Δ), enumerated for all z meeting T∖R.
class LatticeWalker {
 public:
  LatticeWalker(const CoveringLattice& lat, const Rational& eta, const RationalVector& u, const Rational& rho)
      : lat_(lat), eta_(eta), u_(u), rho_(rho), n_(u.size()) {}

  template <class Fn>
  void each(Fn&& fn) const {
    const std::size_t n = n_;
    // Box of z from v ∈ [−η, 1]^n.
    const Rational wlo = -1, whi = 1 / eta_;
    std::vector<long> zlo(n), zhi(n);
    for (std::size_t k = 0; k < n; ++k) {
      Rational mn = 0, mx = 0;
      for (std::size_t l = 0; l < n; ++l) {
        const Rational& c = lat_.inverse[k][l];
        mn += c * (c > 0 ? wlo : whi);
        mx += c * (c > 0 ? whi : wlo);
      }
      zlo[k] = to_long(floor(mn)) - 2;
      zhi[k] = to_long(ceil(mx)) + 2;
    }
    std::vector<long> z = zlo;
    RationalVector alpha(n + 1), beta(n + 1), a(n + 1);
    // β: change of a per unit z_0.
    Rational bsum = 0;
    for (std::size_t j = 1; j <= n; ++j) bsum += (beta[j] = eta_ * lat_.basis[0][j - 1]);
    beta[0] = -bsum;
    while (true) {
      // α: a at z_0 = 0 with the other coordinates fixed.
      Rational vsum = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        Rational v = eta_ * lat_.basis[0][j - 1] * u_[0];
        for (std::size_t l = 1; l < n; ++l) v += eta_ * lat_.basis[l][j - 1] * (Rational(z[l]) + u_[l]);
        alpha[j] = v;
        vsum += v;
      }
      alpha[0] = 1 - eta_ - vsum;
      auto [l1, h1] = interval(alpha, beta, -eta_);
      auto [l2, h2] = interval(alpha, beta, rho_);
      for (long z0 = std::max(l1, zlo[0]); z0 <= std::min(h1, zhi[0]); ++z0) {
        if (l2 <= h2 && z0 >= l2 && z0 <= h2) {
          z0 = h2;
          continue;
        }
        Rational m_total = 0;
        for (std::size_t j = 0; j <= n; ++j) {
          a[j] = alpha[j] + Rational(z0) * beta[j];
          if (a[j] > 0) m_total += a[j];
        }
        if (m_total <= 1) fn(a);
      }
      std::size_t k = 1;
      for (; k < n; ++k) {
        if (++z[k] <= zhi[k]) break;
        z[k] = zlo[k];
      }
      if (k >= n) break;
    }
  }

 private:
  /// Integer z with α_j + β_j z ≥ c for every j.
  static std::pair<long, long> interval(const RationalVector& alpha, const RationalVector& beta, const Rational& c) {
    long lo = std::numeric_limits<long>::min() / 4, hi = std::numeric_limits<long>::max() / 4;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      if (beta[j] == 0) {
        if (alpha[j] < c) return {1, 0};
        continue;
      }
      Rational x = (c - alpha[j]) / beta[j];
      if (beta[j] > 0)
        lo = std::max(lo, to_long(ceil(x)));
      else
        hi = std::min(hi, to_long(floor(x)));
    }
    return {lo, hi};
  }

  const CoveringLattice& lat_;
  Rational eta_;
  RationalVector u_;
  Rational rho_;
  std::size_t n_;
};

}  // namespace

Rational default_witness_resolution(const CoverParams& p) {
  Rational h = 1;
  while (h > p.eta.lo / 8) h /= 2;
  return h;
}

CoverFacts verify_certificate(const CoverCertificate& c, bool check_coverage_flag, const Rational& witness) {
  CoverFacts f;
  f.member_count = c.members.size();
  if (c.multiplicity.size() != c.members.size()) fail_input("certificate multiplicity list has the wrong length");
  const Rational vol_t = volume(c.base);
  f.all_inside_t = true;
  f.same_size = true;
  f.total_volume = 0;
  f.geometric_volume = 0;
  for (std::size_t m = 0; m < c.members.size(); ++m) {
    const Simplex& s = c.members[m];
    f.all_inside_t = f.all_inside_t && contains_simplex(c.base, s);
    bool same = false;
    try {
      same = homothet_form(c.base, s).ratio == c.member_ratio;
    } catch (const Error&) {
      same = false;
    }
    f.same_size = f.same_size && same;
    f.total_volume += Rational(static_cast<long>(c.multiplicity[m])) * c.nominal_ratio_pow_n * vol_t;
    f.geometric_volume += Rational(static_cast<long>(c.multiplicity[m])) * volume(s);
  }
  f.witness_resolution = witness;
  if (check_coverage_flag && c.base.dim() <= 3) {
    const Rational rho = (1 - c.region_ratio) / Rational(static_cast<long>(c.base.dim() + 1));
    Coverage cov = check_coverage(c.base, c.members, rho, witness);
    f.coverage_checked = true;
    f.checked_cells = cov.checked;
    f.uncovered_cells = cov.uncovered;
    f.covers_target = cov.uncovered == 0 && f.all_inside_t;
  }
  return f;
}

CoverCertificate rogers_cover(const Simplex& t, const CoverParams& p, std::uint64_t seed, std::size_t max_tries,
                              bool verify, std::optional<Rational> witness) {
  if (t.dim() != p.n) fail_input("cover: simplex dimension differs from parameters");
  if (max_tries == 0) fail_input("cover: max_tries must be positive");
  build_slab(t, p);  // validates the slab
  const std::size_t n = p.n;
  const Rational& eta = p.eta_hat;
  const Rational rho = p.zeta_hat / Rational(static_cast<long>(n + 1));
  CoveringLattice lat = make_lattice(n);

  std::mt19937_64 rng(seed);
  const long den = 1L << 16;
  std::uniform_int_distribution<long> pick(0, den - 1);
  RationalVector best_u;
  std::size_t best_count = std::numeric_limits<std::size_t>::max();
  for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
    RationalVector u(n);
    for (auto& x : u) x = frac(pick(rng), den);
    std::size_t count = 0;
    LatticeWalker(lat, eta, u, rho).each([&](const RationalVector&) {
      if (++count > kMaxCoverMembers) fail_capacity("cover: more than " + std::to_string(kMaxCoverMembers) + " members");
    });
    if (count < best_count) {
      best_count = count;
      best_u = u;
    }
  }

  CoverCertificate c{"boundary", p, t, eta, p.eta_pow_n, 1 - p.zeta_hat, {}, {}, lat.name, lat.density, {}, seed,
                     max_tries, best_count, 0, -1, p.k_bound, {}};
  c.shift = RationalVector(n, Rational(0));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k) c.shift[k] += eta * lat.basis[l][k] * best_u[l];
  std::map<RationalVector, std::size_t> seen;
  LatticeWalker(lat, eta, best_u, rho).each([&](const RationalVector& a) {
    // Clamp into T: the part {β ≥ max(a, 0)} is kept inside the result.
    RationalVector m(a.size());
    Rational total = 0;
    for (std::size_t j = 0; j < a.size(); ++j) total += (m[j] = std::max(a[j], Rational(0)));
    RationalVector pos(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) pos[j] = m[j] / total;
    if (!seen.emplace(pos, c.members.size()).second) return;
    c.members.push_back(from_homothet_form(t, {eta, pos}));
    c.multiplicity.push_back(1);
  });
  Rational h = witness ? *witness : default_witness_resolution(p);
  c.facts = verify_certificate(c, verify && n <= 3, h);
  return c;
}

CoverCertificate lift_cover(const CoverCertificate& b, const Simplex& t, const CoverParams& p, bool verify,
                            std::optional<Rational> witness) {
  const Rational lambda = 1 - p.t;
  CoverCertificate c{"lifted", p, t, p.mu, pow(p.mu, p.n), b.region_ratio, {}, {}, b.lattice, b.lattice_density,
                     b.shift, b.seed, b.tries, b.candidates_before_clamp, 0, -1, p.k_bound, {}};
  std::map<Simplex, std::size_t> index;
  for (std::size_t m = 0; m < b.members.size(); ++m) {
    LocateResult r = locate_containing_simplex(t, b.members[m], lambda, p.mu);
    if (!contains_simplex(r.member, b.members[m])) fail_domain("lift: located member misses its target");
    c.k_max_used = std::max(c.k_max_used, r.k_used);
    if (c.k_prime_effective < r.k_prime) c.k_prime_effective = r.k_prime;
    auto [it, fresh] = index.emplace(r.member, c.members.size());
    if (fresh) {
      c.members.push_back(r.member);
      c.multiplicity.push_back(b.multiplicity[m]);
    } else {
      c.multiplicity[it->second] += b.multiplicity[m];
    }
  }
  Rational h = witness ? *witness : default_witness_resolution(p);
  c.facts = verify_certificate(c, verify && p.n <= 3, h);
  return c;
}

nlohmann::json to_json(const CoverCertificate& c) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : c.members) members.push_back(to_json(m)["vertices"]);
  const CoverFacts& f = c.facts;
  return {{"kind", c.kind},
          {"params", to_json(c.params)},
          {"base", to_json(c.base)},
          {"member_ratio", to_string(c.member_ratio)},
          {"nominal_ratio_pow_n", to_string(c.nominal_ratio_pow_n)},
          {"region_ratio", to_string(c.region_ratio)},
          {"lattice", c.lattice},
          {"lattice_density", to_string(c.lattice_density)},
          {"shift", to_json(c.shift)},
          {"seed", c.seed},
          {"tries", c.tries},
          {"candidates_before_clamp", c.candidates_before_clamp},
          {"k_max_used", c.k_max_used},
          {"k_prime_effective", c.k_prime_effective.get_str()},
          {"k_prime_nominal", c.k_prime_nominal.get_str()},
          {"facts",
           {{"coverage_checked", f.coverage_checked},
            {"covers_target", f.covers_target},
            {"witness_resolution", to_string(f.witness_resolution)},
            {"checked_cells", f.checked_cells},
            {"uncovered_cells", f.uncovered_cells},
            {"member_count", f.member_count},
            {"total_volume", to_string(f.total_volume)},
            {"geometric_volume", to_string(f.geometric_volume)},
            {"all_inside_T", f.all_inside_t},
            {"same_size", f.same_size}}},
          {"multiplicity", c.multiplicity},
          {"members", members}};
}

CoverCertificate certificate_from_json(const nlohmann::json& j) {
  try {
    const auto& pj = j.at("params");
    CoverMode mode = pj.at("mode").get<std::string>() == "paper" ? CoverMode::Paper : CoverMode::Desk;
    CoverParams p = compute_cover_params(pj.at("n").get<std::size_t>(), parse_rational(pj.at("t").get<std::string>()),
                                         mode, pj.at("i").get<unsigned>());
    Simplex base = simplex_from_json(j.at("base"));
    CoverCertificate c{j.at("kind").get<std::string>(),
                       p,
                       base,
                       parse_rational(j.at("member_ratio").get<std::string>()),
                       parse_rational(j.at("nominal_ratio_pow_n").get<std::string>()),
                       parse_rational(j.at("region_ratio").get<std::string>()),
                       {},
                       j.at("multiplicity").get<std::vector<std::size_t>>(),
                       j.at("lattice").get<std::string>(),
                       parse_rational(j.at("lattice_density").get<std::string>()),
                       vector_from_json(j.at("shift")),
                       j.at("seed").get<std::uint64_t>(),
                       j.at("tries").get<std::size_t>(),
                       j.at("candidates_before_clamp").get<std::size_t>(),
                       j.at("k_max_used").get<unsigned>(),
                       Integer(j.at("k_prime_effective").get<std::string>()),
                       Integer(j.at("k_prime_nominal").get<std::string>()),
                       {}};
    for (const auto& m : j.at("members")) c.members.push_back(simplex_from_json({{"vertices", m}}));
    const auto& fj = j.at("facts");
    c.facts = verify_certificate(c, fj.at("coverage_checked").get<bool>(),
                                 parse_rational(fj.at("witness_resolution").get<std::string>()));
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail_input(std::string("malformed certificate: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Main bound

MainBoundReport assemble_main_bound(const VoxelSet& a, const Simplex& t, const Rational& time,
                                    const CoverCertificate& cover, unsigned i, unsigned k) {
  if (time <= 0 || time >= 1) fail_input("main bound: t must lie in (0, 1)");
  if (a.dim() != t.dim()) fail_input("main bound: dimension mismatch");
  const long q = to_long(time.get_den());
  VoxelSet af = q == 1 ? a : refine(a, q);
  VoxelSet d = interpolated_sumset(a, a, time, SumsetMode::Exact);
  const GridSpec& g = af.grid();
  const Rational cell = g.cell_volume();

  MainBoundReport rep;
  rep.t = time;
  rep.h = g.h;
  rep.c = static_cast<long>(i + 2 * k);
  VoxelSet tc = rasterize_simplex(t, g, RasterMode::Center);
  const Rational t_margin = cell * Rational(simplex_boundary_cells(t, g));
  rep.t_minus_a = set_difference(tc, af).measure();
  rep.t_minus_d = set_difference(tc, d).measure();
  rep.delta_at = set_difference(d, af).measure();

  Simplex r = homothety(t, t.barycenter(), cover.region_ratio);
  VoxelSet rc = rasterize_simplex(r, g, RasterMode::Center);
  rep.r_cells_missing = set_difference(rc, d).count();
  rep.r_inside_d = rep.r_cells_missing == 0;
  const Rational r_margin = cell * Rational(simplex_boundary_cells(r, g));

  Rational sum_d = 0, sum_a = 0, sum_margin = 0;
  rep.sum_members = 0;
  std::size_t weighted = 0;
  for (std::size_t m = 0; m < cover.members.size(); ++m) {
    const Simplex& s = cover.members[m];
    const Rational mult(static_cast<long>(cover.multiplicity[m]));
    weighted += cover.multiplicity[m];
    VoxelSet sc = rasterize_simplex(s, g, RasterMode::Center);
    sum_d += mult * set_difference(sc, d).measure();
    sum_a += mult * set_difference(sc, af).measure();
    sum_margin += mult * cell * Rational(simplex_boundary_cells(s, g));
    rep.sum_members += mult * volume(s);
  }
  rep.cover_size = weighted;
  const Rational vol_t = volume(t);
  const Rational cd = Rational(static_cast<long>(weighted)) * Rational(rep.c) * rep.delta_at;
  VoxelSet shell = set_difference(tc, rc);

  auto link = [&](std::string name, Rational lhs, Rational rhs, Rational margin, bool info = false) {
    BoundLink l{std::move(name), lhs, rhs, margin, lhs <= rhs + margin, info};
    rep.links.push_back(l);
  };
  link("|T\\D| <= |(T\\R)\\D|  (R inside D)", rep.t_minus_d, set_difference(shell, d).measure(), r_margin);
  link("|(T\\R)\\D| <= sum |T''\\D|", set_difference(shell, d).measure(), sum_d, sum_margin + t_margin);
  link("sum |T''\\D| <= sum |T''\\A|", sum_d, sum_a, 0);
  link("sum |T''\\A| <= (|T\\A|/|T|) sum |T''| + |A|c delta(A;t)", sum_a,
       rep.t_minus_a / vol_t * rep.sum_members + cd, sum_margin + rep.sum_members * t_margin / vol_t);
  link("(|T\\A|/|T|) sum |T''| <= 1/2 |T\\A|  (needs sum |T''| <= 1/2)", rep.t_minus_a / vol_t * rep.sum_members,
       rep.t_minus_a / 2, 0, true);
  link("sum |T''\\A| <= 1/2 |T\\A| + |A|c delta(A;t)", sum_a, rep.t_minus_a / 2 + cd,
       sum_margin + t_margin);
  link("|T\\D| = |T\\A| - delta(A;t)", rep.t_minus_d, rep.t_minus_a - rep.delta_at,
       set_difference(d, tc).measure(), true);
  rep.final_rhs = 2 * (1 + Rational(static_cast<long>(weighted)) * Rational(rep.c)) * rep.delta_at;
  rep.final_holds = rep.t_minus_a <= rep.final_rhs + t_margin;
  rep.all_links_hold = true;
  for (const auto& l : rep.links)
    if (!l.informational) rep.all_links_hold = rep.all_links_hold && l.holds;
  return rep;
}

nlohmann::json to_json(const MainBoundReport& r) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : r.links)
    links.push_back({{"name", l.name},
                     {"lhs", to_string(l.lhs)},
                     {"rhs", to_string(l.rhs)},
                     {"margin", to_string(l.margin)},
                     {"lhs_approx", to_double(l.lhs)},
                     {"rhs_approx", to_double(l.rhs)},
                     {"holds", l.holds},
                     {"informational", l.informational}});
  return {{"t", to_string(r.t)},
          {"h", to_string(r.h)},
          {"R_inside_D", r.r_inside_d},
          {"R_cells_missing", r.r_cells_missing},
          {"T_minus_A", to_string(r.t_minus_a)},
          {"T_minus_D", to_string(r.t_minus_d)},
          {"delta_At", to_string(r.delta_at)},
          {"sum_member_volume", to_string(r.sum_members)},
          {"cover_size", r.cover_size},
          {"c", r.c},
          {"links", links},
          {"final_rhs", to_string(r.final_rhs)},
          {"final_holds", r.final_holds},
          {"all_links_hold", r.all_links_hold}};
}

}  // namespace bmlab
