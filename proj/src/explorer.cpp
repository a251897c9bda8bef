#include "bmlab/explorer.hpp"

#include <algorithm>
#include <optional>
#include <iomanip>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include "bmlab/polygon.hpp"

namespace bmlab {

namespace {

void check_problem(unsigned m, const Rational& eta0) {
  if (m < 1 || m > 3) fail_input("cover search supports m in {1, 2, 3}");
  if (eta0 <= 0 || eta0 > Rational(1, 2)) fail_input("cover search needs eta0 in (0, 1/2]");
}

Rational witness_for(const Rational& eta0) { return eta0 / 16; }

bool covers(const RationalVector& x, const Rational& eta0, const RationalVector& p) {
  Rational s = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    Rational d = p[k] - x[k];
    if (d < 0) return false;
    s += d;
  }
  return s <= eta0;
}

/// Vertex lists of the exact uncovered pieces of F (m ≤ 2). Each inner
/// vector holds the vertices of one convex piece.
std::vector<std::vector<RationalVector>> uncovered_pieces(unsigned m, const Rational& eta0,
                                                          const std::vector<RationalVector>& xs,
                                                          const std::vector<std::size_t>& use) {
  std::vector<std::vector<RationalVector>> out;
  if (m == 1) {
    std::vector<std::pair<Rational, Rational>> iv;
    for (std::size_t k : use) iv.push_back({xs[k][0], xs[k][0] + eta0});
    std::sort(iv.begin(), iv.end());
    Rational reach = 0;
    for (const auto& [lo, hi] : iv) {
      if (lo > reach && reach < 1) out.push_back({{reach}, {std::min(lo, Rational(1))}});
      reach = std::max(reach, hi);
      if (reach >= 1) break;
    }
    if (reach < 1) out.push_back({{reach}, {1}});
    return out;
  }
  if (m == 2) {
    plane::Polygon f = {{0, 0}, {1, 0}, {0, 1}};
    std::vector<plane::Polygon> cutters;
    for (std::size_t k : use) {
      const auto& x = xs[k];
      cutters.push_back({{x[0], x[1]}, {x[0] + eta0, x[1]}, {x[0], x[1] + eta0}});
    }
    for (const auto& piece : plane::difference(f, cutters)) {
      std::vector<RationalVector> v;
      for (const auto& p : piece) v.push_back({p[0], p[1]});
      out.push_back(std::move(v));
    }
    return out;
  }
  fail_domain("exact uncovered pieces are only available for m <= 2");
}

/// Witness grid points i·w of F not covered by the selected translates.
/// x + η₀F contains i·w iff i_k ≥ ⌈x_k/w⌉ and Σi ≤ ⌊(Σx + η₀)/w⌋.
std::vector<RationalVector> uncovered_witness(unsigned m, const Rational& eta0, const std::vector<RationalVector>& xs,
                                              const std::vector<std::size_t>& use, std::size_t* total) {
  const Rational w = witness_for(eta0);
  const long n = to_long(floor(1 / w));
  struct Box {
    std::vector<long> lo;
    long sum;
  };
  std::vector<Box> boxes;
  for (std::size_t k : use) {
    Box b{std::vector<long>(m), 0};
    Rational s = eta0;
    for (unsigned d = 0; d < m; ++d) {
      b.lo[d] = to_long(ceil(xs[k][d] / w));
      s += xs[k][d];
    }
    b.sum = to_long(floor(s / w));
    boxes.push_back(std::move(b));
  }
  std::vector<RationalVector> out;
  std::vector<long> i(m, 0);
  std::size_t count = 0;
  while (true) {
    long s = std::accumulate(i.begin(), i.end(), 0L);
    if (s <= n) {
      ++count;
      bool hit = false;
      for (const auto& b : boxes) {
        if (s > b.sum) continue;
        bool in = true;
        for (unsigned d = 0; d < m && in; ++d) in = i[d] >= b.lo[d];
        if (in) {
          hit = true;
          break;
        }
      }
      if (!hit) {
        RationalVector p(m);
        for (unsigned k = 0; k < m; ++k) p[k] = Rational(i[k]) * w;
        out.push_back(std::move(p));
      }
    }
    unsigned k = 0;
    for (; k < m; ++k) {
      if (++i[k] <= n) break;
      i[k] = 0;
    }
    if (k == m) break;
  }
  if (total) *total = count;
  return out;
}

std::vector<std::size_t> all_of(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

bool is_cover(unsigned m, const Rational& eta0, const std::vector<RationalVector>& xs,
              const std::vector<std::size_t>& use) {
  if (m <= 2) return uncovered_pieces(m, eta0, xs, use).empty();
  return uncovered_witness(m, eta0, xs, use, nullptr).empty();
}

/// Largest translate corner x = min over points; feasible iff all points fit.
std::optional<RationalVector> single_translate_for(const std::vector<RationalVector>& pts, const Rational& eta0) {
  if (pts.empty()) return std::nullopt;
  RationalVector x = pts.front();
  for (const auto& p : pts)
    for (std::size_t k = 0; k < p.size(); ++k) x[k] = std::min(x[k], p[k]);
  for (const auto& p : pts)
    if (!covers(x, eta0, p)) return std::nullopt;
  return x;
}

}  // namespace

CoverSolution verify_cover(unsigned m, const Rational& eta0, const std::vector<RationalVector>& translates) {
  check_problem(m, eta0);
  for (const auto& x : translates)
    if (x.size() != m) fail_input("translate has the wrong dimension");
  CoverSolution s;
  s.m = m;
  s.eta0 = eta0;
  s.translates = translates;
  s.ratio = Rational(static_cast<long>(translates.size())) * pow(eta0, m);
  s.witness_resolution = witness_for(eta0);
  const auto use = all_of(translates.size());
  s.uncovered_points = uncovered_witness(m, eta0, translates, use, &s.witness_points).size();
  if (m <= 2) {
    s.verification = "exact";
    s.verified = s.uncovered_points == 0 && uncovered_pieces(m, eta0, translates, use).empty();
  } else {
    s.verification = "numerical-only";
    s.verified = s.uncovered_points == 0;
  }
  return s;
}

CoverSolution greedy_cover(const CoverSearchProblem& p) {
  check_problem(p.m, p.eta0);
  if (p.q < static_cast<long>(p.m)) fail_input("candidate refinement q must be at least m");
  const unsigned m = p.m;
  const Rational lower = ceil(1 / pow(p.eta0, m));
  if (Rational(static_cast<unsigned long>(p.budget)) < lower) fail_input("budget is below the volume lower bound");

  if (m == 1) {
    // Left-to-right sweep, optimal on an interval.
    std::vector<RationalVector> xs;
    for (Rational reach = 0; reach < 1; reach += p.eta0) {
      if (xs.size() >= p.budget) fail_capacity("cover search: budget exhausted before coverage");
      xs.push_back({reach});
    }
    return verify_cover(m, p.eta0, xs);
  }
  // Samples i·w, w = η₀/(2q); candidates x = j·(2w).
  const Rational w = p.eta0 / (2 * p.q);
  const long n = to_long(floor(1 / w));
  const long foot = 2 * p.q;  // η₀/w
  const long side = n + 1;
  std::vector<long> stride(m, 1);
  for (unsigned k = 1; k < m; ++k) stride[k] = stride[k - 1] * side;
  const std::size_t grid = static_cast<std::size_t>(stride[m - 1] * side);
  std::vector<char> is_sample(grid, 0);
  std::vector<int> cover_count(grid, 0);
  std::size_t uncovered = 0;
  {
    std::vector<long> i(m, 0);
    for (std::size_t l = 0; l < grid; ++l) {
      long rem = static_cast<long>(l), s = 0;
      for (unsigned k = 0; k < m; ++k) {
        i[k] = rem % side;
        rem /= side;
        s += i[k];
      }
      if (s <= n) {
        is_sample[l] = 1;
        ++uncovered;
      }
    }
  }
  // Footprint offsets d ≥ 0, Σd ≤ foot.
  std::vector<std::vector<long>> footprint;
  {
    std::vector<long> d(m, 0);
    while (true) {
      if (std::accumulate(d.begin(), d.end(), 0L) <= foot) footprint.push_back(d);
      unsigned k = 0;
      for (; k < m; ++k) {
        if (++d[k] <= foot) break;
        d[k] = 0;
      }
      if (k == m) break;
    }
  }
  // Candidates j with 2j_k ≥ −foot, 2j_k ≤ n, Σ2j ≤ n.
  std::vector<std::vector<long>> cand;
  {
    const long jlo = -p.q, jhi = n / 2;
    std::vector<long> j(m, jlo);
    while (true) {
      if (2 * std::accumulate(j.begin(), j.end(), 0L) <= n) cand.push_back(j);
      unsigned k = 0;
      for (; k < m; ++k) {
        if (++j[k] <= jhi) break;
        j[k] = jlo;
      }
      if (k == m) break;
    }
  }
  auto offset = [&](std::size_t c) {
    RationalVector x(m);
    for (unsigned k = 0; k < m; ++k) x[k] = Rational(2 * cand[c][k]) * w;
    return x;
  };
  auto for_each_cell = [&](std::size_t c, auto&& fn) {
    for (const auto& d : footprint) {
      long l = 0;
      bool ok = true;
      for (unsigned k = 0; k < m && ok; ++k) {
        long i = 2 * cand[c][k] + d[k];
        ok = i >= 0 && i <= n;
        l += i * stride[k];
      }
      if (ok && is_sample[static_cast<std::size_t>(l)]) fn(static_cast<std::size_t>(l));
    }
  };

  std::vector<RationalVector> extra;
  std::vector<int> extra_count;
  std::vector<std::size_t> chosen;

  auto gain = [&](std::size_t c) {
    long g = 0;
    for_each_cell(c, [&](std::size_t l) { g += cover_count[l] == 0; });
    if (!extra.empty()) {
      RationalVector x = offset(c);
      for (std::size_t e = 0; e < extra.size(); ++e) g += extra_count[e] == 0 && covers(x, p.eta0, extra[e]);
    }
    return g;
  };
  auto apply = [&](std::size_t c, int delta) {
    for_each_cell(c, [&](std::size_t l) {
      if (cover_count[l] == 0 && delta > 0) --uncovered;
      cover_count[l] += delta;
      if (cover_count[l] == 0 && delta < 0) ++uncovered;
    });
    RationalVector x = offset(c);
    for (std::size_t e = 0; e < extra.size(); ++e)
      if (covers(x, p.eta0, extra[e])) extra_count[e] += delta;
  };
  auto extra_uncovered = [&] {
    return std::count(extra_count.begin(), extra_count.end(), 0);
  };

  for (int round = 0; round < 64; ++round) {
    using Entry = std::pair<long, long>;  // (gain, −index)
    std::priority_queue<Entry> heap;
    for (std::size_t c = 0; c < cand.size(); ++c) heap.push({gain(c), -static_cast<long>(c)});
    while (uncovered > 0 || extra_uncovered() > 0) {
      if (chosen.size() >= p.budget) fail_capacity("cover search: budget exhausted before coverage");
      while (true) {
        auto [g, neg] = heap.top();
        heap.pop();
        const std::size_t c = static_cast<std::size_t>(-neg);
        long fresh = gain(c);
        if (fresh == g) {
          if (g == 0) fail_domain("cover search: no candidate reaches the remaining samples");
          chosen.push_back(c);
          apply(c, +1);
          break;
        }
        heap.push({fresh, neg});
      }
    }
    // Prune redundant members, latest first.
    for (std::size_t k = chosen.size(); k-- > 0;) {
      const std::size_t c = chosen[k];
      bool needed = false;
      for_each_cell(c, [&](std::size_t l) { needed = needed || cover_count[l] == 1; });
      RationalVector x = offset(c);
      for (std::size_t e = 0; e < extra.size() && !needed; ++e)
        needed = extra_count[e] == 1 && covers(x, p.eta0, extra[e]);
      if (!needed) {
        apply(c, -1);
        chosen.erase(chosen.begin() + static_cast<long>(k));
      }
    }
    std::vector<RationalVector> xs;
    for (std::size_t c : chosen) xs.push_back(offset(c));
    if (m == 3) return verify_cover(m, p.eta0, xs);
    auto pieces = uncovered_pieces(m, p.eta0, xs, all_of(xs.size()));
    if (pieces.empty()) return verify_cover(m, p.eta0, xs);
    for (const auto& piece : pieces) {
      RationalVector c(m, Rational(0));
      for (const auto& v : piece) c = c + v;
      extra.push_back(Rational(1) / Rational(static_cast<long>(piece.size())) * c);
      int cnt = 0;
      for (const auto& x : xs) cnt += covers(x, p.eta0, extra.back());
      extra_count.push_back(cnt);
    }
  }
  fail_domain("cover search: sample refinement did not converge");
}

namespace {

/// Uncovered pieces when `removed` leave a cover: they lie inside the
/// removed triangles, so only those regions and the cutters meeting them
/// are clipped (m = 2).
std::vector<std::vector<RationalVector>> uncovered_after_removal(unsigned m, const Rational& eta0,
                                                                 const std::vector<RationalVector>& xs,
                                                                 const std::vector<std::size_t>& rest,
                                                                 const std::vector<std::size_t>& removed) {
  if (m != 2) return uncovered_pieces(m, eta0, xs, rest);
  const plane::Polygon f = {{0, 0}, {1, 0}, {0, 1}};
  auto tri = [&](const RationalVector& x) -> plane::Polygon {
    return {{x[0], x[1]}, {x[0] + eta0, x[1]}, {x[0], x[1] + eta0}};
  };
  std::vector<std::vector<RationalVector>> out;
  for (std::size_t r : removed) {
    plane::Polygon region = plane::intersect(f, tri(xs[r]));
    if (region.size() < 3) continue;
    std::vector<plane::Polygon> cutters;
    for (std::size_t k : rest)
      if (abs(xs[k][0] - xs[r][0]) < eta0 && abs(xs[k][1] - xs[r][1]) < eta0) cutters.push_back(tri(xs[k]));
    for (const auto& piece : plane::difference(region, cutters)) {
      std::vector<RationalVector> v;
      for (const auto& p : piece) v.push_back({p[0], p[1]});
      out.push_back(std::move(v));
    }
  }
  return out;
}

/// Remove-one and two-for-one moves until neither applies.
std::size_t descend(unsigned m, const Rational& eta0, std::vector<RationalVector>& xs, std::mt19937_64& rng) {
  std::size_t improvements = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> order = all_of(xs.size());
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k : order) {
      std::vector<std::size_t> rest;
      for (std::size_t r = 0; r < xs.size(); ++r)
        if (r != k) rest.push_back(r);
      if (m == 3 ? is_cover(m, eta0, xs, rest) : uncovered_after_removal(m, eta0, xs, rest, {k}).empty()) {
        xs.erase(xs.begin() + static_cast<long>(k));
        ++improvements;
        changed = true;
        break;
      }
    }
    if (changed) continue;

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < xs.size(); ++a)
      for (std::size_t b = a + 1; b < xs.size(); ++b) {
        bool near = true;
        for (unsigned k = 0; k < m; ++k) near = near && abs(xs[a][k] - xs[b][k]) <= 2 * eta0;
        if (near) pairs.push_back({a, b});
      }
    std::shuffle(pairs.begin(), pairs.end(), rng);
    for (auto [a, b] : pairs) {
      std::vector<std::size_t> rest;
      for (std::size_t r = 0; r < xs.size(); ++r)
        if (r != a && r != b) rest.push_back(r);
      std::vector<RationalVector> pts;
      if (m <= 2) {
        for (const auto& piece : uncovered_after_removal(m, eta0, xs, rest, {a, b}))
          for (const auto& v : piece) pts.push_back(v);
      } else {
        pts = uncovered_witness(m, eta0, xs, rest, nullptr);
      }
      auto x = single_translate_for(pts, eta0);
      if (!x) continue;
      std::vector<RationalVector> next;
      for (std::size_t r : rest) next.push_back(xs[r]);
      next.push_back(*x);
      xs = std::move(next);
      ++improvements;
      changed = true;
      break;
    }
  }
  return improvements;
}

/// Greedy cover of `pts` by lattice translates j·(η₀/q). In lattice units
/// j covers p iff j_k ≤ ⌊p_k/pitch⌋ and Σj ≥ ⌈(Σp − η₀)/pitch⌉.
std::vector<RationalVector> recover_points(unsigned m, const Rational& eta0, long q,
                                           const std::vector<RationalVector>& pts) {
  const Rational pitch = eta0 / q;
  std::map<std::vector<long>, std::vector<std::size_t>> cand;
  std::vector<long> hi(m), j(m);
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const auto& p = pts[s];
    Rational sum = -eta0;
    for (unsigned k = 0; k < m; ++k) {
      hi[k] = to_long(floor(p[k] / pitch));
      sum += p[k];
    }
    const long need = to_long(ceil(sum / pitch));
    for (unsigned k = 0; k < m; ++k) j[k] = hi[k] - q;
    while (true) {
      if (std::accumulate(j.begin(), j.end(), 0L) >= need) cand[j].push_back(s);
      unsigned k = 0;
      for (; k < m; ++k) {
        if (++j[k] <= hi[k]) break;
        j[k] = hi[k] - q;
      }
      if (k == m) break;
    }
  }
  std::vector<const std::vector<long>*> keys;
  std::vector<const std::vector<std::size_t>*> lists;
  for (const auto& [key, list] : cand) {
    keys.push_back(&key);
    lists.push_back(&list);
  }
  using Entry = std::pair<std::size_t, long>;  // (gain, −index)
  std::priority_queue<Entry> heap;
  for (std::size_t c = 0; c < lists.size(); ++c) heap.push({lists[c]->size(), -static_cast<long>(c)});
  std::vector<char> done(pts.size(), 0);
  std::size_t left = pts.size();
  std::vector<RationalVector> out;
  while (left > 0 && !heap.empty()) {
    auto [g, neg] = heap.top();
    heap.pop();
    const std::size_t c = static_cast<std::size_t>(-neg);
    std::size_t fresh = 0;
    for (std::size_t s : *lists[c]) fresh += !done[s];
    if (fresh != g) {
      if (fresh > 0) heap.push({fresh, neg});
      continue;
    }
    RationalVector x(m);
    for (unsigned k = 0; k < m; ++k) x[k] = Rational((*keys[c])[k]) * pitch;
    out.push_back(std::move(x));
    for (std::size_t s : *lists[c])
      if (!done[s]) {
        done[s] = 1;
        --left;
      }
  }
  return out;
}

}  // namespace

CoverSolution local_improve(const CoverSolution& s, const CoverSearchProblem& p, std::uint64_t seed) {
  const unsigned m = s.m;
  const Rational& eta0 = s.eta0;
  std::vector<RationalVector> xs = s.translates;
  if (!is_cover(m, eta0, xs, all_of(xs.size()))) fail_input("local improvement needs a verified cover");
  std::mt19937_64 rng(seed);
  std::size_t improvements = descend(m, eta0, xs, rng);

  // Large-neighbourhood moves: clear the members near a random one and cover
  // the hole again from scratch; keep the result if it is no larger.
  const Rational floor_count = ceil(1 / pow(eta0, m));
  std::size_t stall = 0;
  for (std::size_t iter = 0; iter < p.lns_iterations && xs.size() > 1; ++iter) {
    if (Rational(static_cast<unsigned long>(xs.size())) <= floor_count || stall >= p.lns_stall) break;
    ++stall;
    const std::size_t a = std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng);
    std::vector<std::pair<Rational, std::size_t>> near;
    for (std::size_t r = 0; r < xs.size(); ++r) {
      Rational d = 0;
      for (unsigned k = 0; k < m; ++k) d = std::max(d, Rational(abs(xs[r][k] - xs[a][k])));
      if (d <= 2 * eta0) near.push_back({d, r});
    }
    std::sort(near.begin(), near.end());
    const std::size_t take = std::min<std::size_t>(near.size(), 2 + iter % 5);
    std::vector<char> drop(xs.size(), 0);
    for (std::size_t k = 0; k < take; ++k) drop[near[k].second] = 1;
    std::vector<std::size_t> rest;
    for (std::size_t r = 0; r < xs.size(); ++r)
      if (!drop[r]) rest.push_back(r);

    std::vector<RationalVector> pts = uncovered_witness(m, eta0, xs, rest, nullptr);
    std::vector<RationalVector> next;
    for (std::size_t r : rest) next.push_back(xs[r]);
    const std::size_t base = next.size();
    bool ok = false;
    for (int round = 0; round < 8; ++round) {
      next.resize(base);
      for (auto& x : recover_points(m, eta0, p.q, pts)) next.push_back(x);
      if (m == 3) {
        ok = uncovered_witness(m, eta0, next, all_of(next.size()), nullptr).empty();
        break;
      }
      auto pieces = uncovered_pieces(m, eta0, next, all_of(next.size()));
      if (pieces.empty()) {
        ok = true;
        break;
      }
      for (const auto& piece : pieces) {
        RationalVector c(m, Rational(0));
        for (const auto& v : piece) c = c + v;
        pts.push_back(Rational(1) / Rational(static_cast<long>(piece.size())) * c);
      }
    }
    if (!ok || next.size() > xs.size()) continue;
    const std::size_t before = xs.size();
    if (next.size() < before) ++improvements;
    xs = std::move(next);
    improvements += descend(m, eta0, xs, rng);
    if (xs.size() < before) stall = 0;
  }

  CoverSolution out = verify_cover(m, eta0, xs);
  out.locally_optimal = true;
  out.improvements = s.improvements + improvements;
  return out;
}

nlohmann::json to_json(const CoverSolution& s) {
  nlohmann::json xs = nlohmann::json::array();
  for (const auto& x : s.translates) xs.push_back(to_json(x));
  return {{"m", s.m},
          {"eta0", to_string(s.eta0)},
          {"translates", xs},
          {"count", s.translates.size()},
          {"ratio", to_string(s.ratio)},
          {"ratio_approx", to_double(s.ratio)},
          {"verified", s.verified},
          {"verification", s.verification},
          {"witness_resolution", to_string(s.witness_resolution)},
          {"witness_points", s.witness_points},
          {"uncovered_points", s.uncovered_points},
          {"locally_optimal", s.locally_optimal},
          {"improvements", s.improvements}};
}

CoverSolution cover_solution_from_json(const nlohmann::json& j) {
  try {
    std::vector<RationalVector> xs;
    for (const auto& x : j.at("translates")) xs.push_back(vector_from_json(x));
    CoverSolution s = verify_cover(j.at("m").get<unsigned>(), parse_rational(j.at("eta0").get<std::string>()), xs);
    s.locally_optimal = j.value("locally_optimal", false);
    s.improvements = j.value("improvements", std::size_t{0});
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail_input(std::string("malformed cover solution: ") + e.what());
  }
}

std::vector<FrontierRow> ratio_frontier(unsigned m, const std::vector<Rational>& etas, std::size_t budget, long q,
                                        std::uint64_t seed) {
  std::vector<FrontierRow> rows;
  for (const auto& eta0 : etas) {
    CoverSearchProblem p{m, eta0, q, budget};
    CoverSolution best = local_improve(greedy_cover(p), p, seed);
    FrontierRow r{eta0, best, 1 / eta0, {}, false};
    r.below_inverse = best.ratio < r.inverse;
    for (const Rational& eps : {Rational(1, 10), Rational(1, 4), Rational(1, 2)})
      r.below_eps.push_back(best.ratio < r.inverse * (1 - eps));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string frontier_csv(const std::vector<FrontierRow>& rows) {
  std::ostringstream os;
  os << "m,eta0,count,ratio,ratio_approx,inverse,below_inverse,below_0.9,below_0.75,below_0.5,verified,verification\n";
  os << std::setprecision(10);
  for (const auto& r : rows)
    os << r.best.m << ',' << to_string(r.eta0) << ',' << r.best.translates.size() << ',' << to_string(r.best.ratio)
       << ',' << to_double(r.best.ratio) << ',' << to_string(r.inverse) << ',' << r.below_inverse << ','
       << r.below_eps[0] << ',' << r.below_eps[1] << ',' << r.below_eps[2] << ',' << r.best.verified << ','
       << r.best.verification << '\n';
  return os.str();
}

nlohmann::json to_json(const std::vector<FrontierRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"eta0", to_string(r.eta0)},
                   {"inverse", to_string(r.inverse)},
                   {"below_inverse", r.below_inverse},
                   {"below_eps", {{"0.1", r.below_eps[0]}, {"0.25", r.below_eps[1]}, {"0.5", r.below_eps[2]}}},
                   {"best", to_json(r.best)}});
  return out;
}

std::string cover_svg(const CoverSolution& s) {
  if (s.m != 2) fail_input("svg output is available for m = 2 only");
  const double scale = 400, pad = 40;
  const double lo = -to_double(s.eta0);
  auto px = [&](const Rational& x) { return pad + (to_double(x) - lo) * scale; };
  auto py = [&](const Rational& y) { return pad + (1 - to_double(y)) * scale; };
  const double size = 2 * pad + (1 - lo) * scale;
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& x : s.translates) {
    os << "<polygon points=\"" << px(x[0]) << ',' << py(x[1]) << ' ' << px(x[0] + s.eta0) << ',' << py(x[1]) << ' '
       << px(x[0]) << ',' << py(x[1] + s.eta0) << "\" fill=\"steelblue\" fill-opacity=\"0.3\" stroke=\"navy\"/>\n";
  }
  os << "<polygon points=\"" << px(0) << ',' << py(0) << ' ' << px(1) << ',' << py(0) << ' ' << px(0) << ',' << py(1)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  os << "<text x=\"" << pad << "\" y=\"" << pad / 2 << "\" font-family=\"monospace\" font-size=\"14\">eta0="
     << to_string(s.eta0) << " count=" << s.translates.size() << " ratio=" << to_string(s.ratio)
     << (s.verified ? " verified" : " unverified") << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace bmlab
