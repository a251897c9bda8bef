#include "bmlab/properties.hpp"

#include <chrono>
#include <random>

namespace bmlab {

namespace {

using Rng = std::mt19937_64;

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Rational random_rational(Rng& rng, long range = 20, long max_den = 12) {
  return frac(uniform(rng, -range, range), uniform(rng, 1, max_den));
}

Rational random_nonzero(Rng& rng) {
  Rational r;
  do r = random_rational(rng, 9, 7);
  while (r == 0);
  return r;
}

RationalVector random_point(Rng& rng, std::size_t n) {
  RationalVector v(n);
  for (auto& x : v) x = random_rational(rng);
  return v;
}

Simplex random_simplex(Rng& rng, std::size_t n) {
  while (true) {
    std::vector<RationalVector> vs;
    for (std::size_t k = 0; k <= n; ++k) vs.push_back(random_point(rng, n));
    try {
      return Simplex(std::move(vs));
    } catch (const Error&) {
    }
  }
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void record(PropertyResult& r, bool ok, const std::string& what) {
  ++r.cases;
  if (ok) return;
  if (r.failures++ == 0) r.first_failure = what;
}

/// Random boxes of 1..3 cells knocked out of `x` until at least `target`
/// cells are gone (or the set is nearly empty).
VoxelSet knock_out(const VoxelSet& x, std::size_t target, Rng& rng) {
  VoxelSet y = x;
  const GridSpec& g = x.grid();
  const std::size_t n = g.dim;
  std::size_t removed = 0;
  std::vector<std::size_t> cells;
  for (std::size_t l = 0; l < g.cell_count(); ++l)
    if (x.test(l)) cells.push_back(l);
  for (int guard = 0; removed < target && guard < 10000; ++guard) {
    CellIndex c = x.cell_of(cells[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(cells.size()) - 1))]);
    const long side = uniform(rng, 1, 3);
    CellIndex d(n, 0);
    while (true) {
      CellIndex e(n);
      for (std::size_t k = 0; k < n; ++k) e[k] = c[k] + d[k];
      if (y.in_grid(e) && y.test(e)) {
        y.reset(y.linear_index(e));
        ++removed;
      }
      std::size_t k = 0;
      for (; k < n; ++k) {
        if (++d[k] < side) break;
        d[k] = 0;
      }
      if (k == n) break;
    }
  }
  return y;
}

}  // namespace

PropertyResult check_homothety_composition(std::size_t cases, std::uint64_t seed) {
  Timer clock;
  PropertyResult r{"homothety composition", 0, 0, "", 0};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 3));
    Simplex s = random_simplex(rng, n);
    RationalVector center = random_point(rng, n);
    Rational r1 = random_nonzero(rng), r2 = random_nonzero(rng);
    record(r, homothety(homothety(s, center, r1), center, r2) == homothety(s, center, r1 * r2),
           "n=" + std::to_string(n) + " r1=" + to_string(r1) + " r2=" + to_string(r2));
  }
  r.seconds = clock.seconds();
  return r;
}

PropertyResult check_volume_homogeneity(std::size_t cases, std::uint64_t seed) {
  Timer clock;
  PropertyResult r{"volume homogeneity", 0, 0, "", 0};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 3));
    Simplex s = random_simplex(rng, n);
    Rational ratio = random_nonzero(rng);
    record(r, volume(homothety(s, random_point(rng, n), ratio)) == pow(abs(ratio), n) * volume(s),
           "n=" + std::to_string(n) + " ratio=" + to_string(ratio));
  }
  r.seconds = clock.seconds();
  return r;
}

PropertyResult check_inclusion_exclusion(std::size_t cases, std::uint64_t seed) {
  Timer clock;
  PropertyResult r{"inclusion-exclusion", 0, 0, "", 0};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 3));
    std::vector<long> ext(n);
    for (auto& e : ext) e = uniform(rng, 1, n == 3 ? 12 : 40);
    GridSpec g(random_point(rng, n), frac(1, uniform(rng, 1, 64)), ext);
    VoxelSet a(g), b(g);
    const double pa = uniform(rng, 0, 100) / 100.0, pb = uniform(rng, 0, 100) / 100.0;
    std::bernoulli_distribution fa(pa), fb(pb);
    for (std::size_t l = 0; l < g.cell_count(); ++l) {
      if (fa(rng)) a.set(l);
      if (fb(rng)) b.set(l);
    }
    const Rational ma = a.measure(), mb = b.measure(), mi = set_intersection(a, b).measure();
    record(r, set_union(a, b).measure() == ma + mb - mi && set_difference(a, b).measure() + mi == ma,
           "n=" + std::to_string(n) + " cells=" + std::to_string(g.cell_count()));
  }
  r.seconds = clock.seconds();
  return r;
}

TranslateClaim translate_claim_instance(std::size_t n, const Rational& lambda, std::uint64_t seed) {
  if (n < 1 || n > 2) fail_input("translate claim instances are built for n in {1, 2}");
  if (lambda <= 0 || lambda >= 1) fail_input("translate claim needs 0 < lambda < 1");
  Rng rng(seed);
  // X = ½T at a grid-aligned offset inside the box [0,2]×[0,1].
  const long m = n == 1 ? 64 : 32;
  const Rational h = frac(1, m);
  std::vector<long> ext(n, m);
  ext[0] = 2 * m;
  GridSpec g(RationalVector(n, Rational(0)), h, ext);
  const Simplex half = homothety(make_reference_simplex(n), RationalVector(n, Rational(0)), Rational(1, 2));
  auto offset = [&] {
    RationalVector o(n);
    o[0] = uniform(rng, 0, m) * h;
    if (n == 2) o[1] = uniform(rng, 0, m / 2) * h;
    return o;
  };
  const VoxelSet x = rasterize_simplex(translate(half, offset()), g, RasterMode::Center);
  const VoxelSet xp = rasterize_simplex(translate(half, offset()), g, RasterMode::Center);
  const std::size_t cells = static_cast<std::size_t>(to_long(floor(x.measure() / g.cell_volume())));
  const VoxelSet y = knock_out(x, static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(cells / 5))), rng);
  const VoxelSet yp = knock_out(xp, static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(cells / 5))), rng);

  TranslateClaim c;
  c.n = n;
  c.lambda = lambda;
  c.v = x.measure();
  c.v_prime = std::max(set_difference(x, y).measure(), set_difference(xp, yp).measure());
  c.sumset = y.measure() == 0 || yp.measure() == 0 ? Rational(0)
                                                    : interpolated_sumset(y, yp, lambda, SumsetMode::Exact).measure();
  c.margin = 2 * g.cell_volume() * Rational(static_cast<long>(boundary_cell_count(y) + boundary_cell_count(yp)));
  c.holds = c.sumset >= c.v - c.v_prime - c.margin;
  return c;
}

PropertyResult check_translate_claim(std::size_t cases, std::uint64_t seed) {
  Timer clock;
  PropertyResult r{"translate claim |lY+(1-l)Y'| >= V-V'", 0, 0, "", 0};
  const Rational lambdas[] = {Rational(1, 2), Rational(1, 3), Rational(2, 3)};
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = c < cases / 2 ? 1 : 2;
    const Rational& lambda = lambdas[c % 3];
    TranslateClaim t = translate_claim_instance(n, lambda, seed + c);
    record(r, t.holds,
           "n=" + std::to_string(n) + " lambda=" + to_string(lambda) + " sumset=" + to_string(t.sumset) +
               " V-V'=" + to_string(t.v - t.v_prime));
  }
  r.seconds = clock.seconds();
  return r;
}

std::vector<PropertyResult> run_property_suites(std::uint64_t seed) {
  return {check_homothety_composition(100, seed), check_volume_homogeneity(100, seed + 1),
          check_inclusion_exclusion(100, seed + 2), check_translate_claim(50, seed + 3)};
}

nlohmann::json to_json(const PropertyResult& r) {
  return {{"name", r.name},
          {"cases", r.cases},
          {"failures", r.failures},
          {"first_failure", r.first_failure},
          {"seconds", r.seconds}};
}

}  // namespace bmlab
