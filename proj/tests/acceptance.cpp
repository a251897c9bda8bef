// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "bmlab/covers.hpp"
#include "bmlab/examples.hpp"
#include "bmlab/explorer.hpp"
#include "bmlab/families.hpp"
#include "bmlab/properties.hpp"
#include "bmlab/scene.hpp"
#include "commands.hpp"

using namespace bmlab;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

RationalVector random_bary(std::size_t n1, std::mt19937_64& rng, long den = 97) {
  std::uniform_int_distribution<long> pick(1, den);
  std::vector<long> w(n1);
  long total = 0;
  for (auto& x : w) total += (x = pick(rng));
  RationalVector out;
  for (long x : w) out.push_back(frac(x, total));
  return out;
}

/// Vertices of S∩T for S = rT + x, a positive homothet of T meeting T.
/// In T's barycentric coordinates S is {β_j ≥ (1−r)·position_j}, so S∩T is
/// {β_j ≥ m_j} with m_j the positive part; its vertex k puts the slack on k.
std::vector<RationalVector> intersection_vertices(const Simplex& t, const Simplex& s) {
  const HomothetForm f = homothet_form(t, s);
  const std::size_t n1 = t.vertices().size();
  RationalVector m(n1);
  Rational total = 0;
  for (std::size_t j = 0; j < n1; ++j) total += (m[j] = std::max(Rational((1 - f.ratio) * f.position[j]), Rational(0)));
  std::vector<RationalVector> out;
  for (std::size_t k = 0; k < n1; ++k) {
    RationalVector beta = m;
    beta[k] += 1 - total;
    RationalVector x(t.dim(), Rational(0));
    for (std::size_t j = 0; j < n1; ++j) x = x + beta[j] * t.vertex(j);
    out.push_back(std::move(x));
  }
  return out;
}

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail, double seconds) {
  if (!pass) ++failures;
  std::printf("%s %2d %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
}

void run(int id, const std::string& title, const std::function<bool(std::ostringstream&)>& body) {
  const auto t0 = Clock::now();
  std::ostringstream detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail << "threw: " << e.what();
  }
  report(id, title, pass, detail.str(), since(t0));
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

bool verified(std::ostringstream& d, const SceneVerification& v, Clock::time_point t0, double limit) {
  const double seconds = since(t0);
  for (const auto& c : v.checks) d << c.quantity << '=' << fmt(to_double(c.measured)) << " (" << fmt(100 * c.rel_error) << "%) ";
  d << "t=" << fmt(seconds) << "s";
  return v.strict && seconds < limit;
}

}  // namespace

int main() {
  run(1, "constant lower-bound example", [](std::ostringstream& d) {
    auto t0 = Clock::now();
    auto [s2, a2] = build_constant_example(2, 2, frac(1, 128));
    const bool ok2 = verified(d, verify_scene(s2, a2, frac(2, 100)), t0, 60);
    d << " | n=3: ";
    t0 = Clock::now();
    auto [s3, a3] = build_constant_example(3, 2, frac(1, 64));
    const bool ok3 = verified(d, verify_scene(s3, a3, frac(4, 100)), t0, 60);
    return ok2 && ok3;
  });

  run(2, "exponent example and slope", [](std::ostringstream& d) {
    const auto t0 = Clock::now();
    auto [s, a] = build_exponent_example(2, frac(1, 16), frac(1, 4), frac(1, 256));
    const bool ok = verified(d, verify_scene(s, a, frac(5, 100)), t0, 60);
    auto slope = exponent_slope(2, {frac(1, 8), frac(1, 16), frac(1, 32), frac(1, 64)}, frac(1, 4));
    d << " slope=" << fmt(slope.slope);
    return ok && std::abs(slope.slope - 1) <= 0.05;
  });

  run(3, "constructive containment", [](std::ostringstream& d) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(3);
    const Rational mu = frac(1, 4);
    std::size_t cases = 0, good = 0;
    unsigned worst = 0;
    for (std::size_t n : {2u, 3u}) {
      const Simplex t = make_reference_simplex(n);
      // α^n μ with α = n^(−1/n) is μ/n.
      const Rational ratio_n = mu / Rational(static_cast<long>(n));
      for (const Rational& lambda : {frac(1, 2), frac(2, 3)}) {
        const Integer k_prime = k_prime_formula(n, frac(1, static_cast<long>(n)), lambda, mu);
        for (int trial = 0; trial < 200; ++trial) {
          const Simplex target = from_homothet_form(t, {ratio_n, random_bary(n + 1, rng)});
          auto res = locate_containing_simplex(t, target, lambda, mu);
          ++cases;
          worst = std::max(worst, res.k_used);
          if (contains_simplex(res.member, target) && Integer(res.k_used) <= k_prime &&
              replay_path(t, mu, res.path) == res.member)
            ++good;
        }
      }
    }
    d << good << '/' << cases << " contained with k_used <= k', max k_used " << worst;
    return good == cases && since(t0) < 60;
  });

  run(4, "clamp double containment", [](std::ostringstream& d) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<long> pick(-60, 60), scale(1, 9);
    bool ok = true;
    for (std::size_t n : {1u, 2u, 3u}) {
      const Simplex t = make_reference_simplex(n);
      std::size_t done = 0, good = 0;
      while (done < 100) {
        const Rational r = frac(scale(rng), 10);
        RationalVector shift;
        for (std::size_t k = 0; k < n; ++k) shift.push_back(frac(pick(rng), 40));
        const Simplex s = translate(homothety(t, t.vertex(0), r), shift);
        if (contains_simplex(t, s)) continue;
        std::optional<Simplex> c;
        try {
          c = clamp_translate(t, s);
        } catch (const Error&) {
          continue;  // S misses T
        }
        ++done;
        bool inner = true;
        for (const auto& x : intersection_vertices(t, s)) inner = inner && contains_point(*c, x);
        if (inner && contains_simplex(t, *c) && volume(*c) == volume(s)) ++good;
      }
      d << "n=" << n << ": " << good << "/100 ";
      ok = ok && good == 100;
    }
    return ok;
  });

  run(5, "fractal inequality on holed scenes", [](std::ostringstream& d) {
    const Simplex t = make_reference_simplex(2);
    std::size_t runs = 0, violations = 0, members = 0;
    Rational worst_delta = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const long holes = 4 + static_cast<long>(seed % 17);  // ≤ 20 holes of 4 cells: δ ≤ 80/4096
      const VoxelSet a = evaluate(holes_scene(seed, holes, 2, frac(1, 64)));
      for (const Rational& time : {frac(1, 2), frac(1, 3)})
        for (auto [i, k] : {std::pair{1u, 0u}, {1u, 1u}, {2u, 1u}}) {
          const FractalReport r = check_fractal_inequality(a, t, time, i, k);
          ++runs;
          violations += r.violations;
          members += r.sampled ? r.sampled_members : r.family_size;
          worst_delta = std::max(worst_delta, r.delta);
        }
    }
    d << runs << " runs, " << members << " members, " << violations << " violations, max delta "
      << fmt(to_double(worst_delta));
    return violations == 0 && worst_delta <= frac(2, 100);
  });

  run(6, "exact constant audits n=2..10", [](std::ostringstream& d) {
    const std::vector<std::string> listed = {"(1-t)^i <= n^{1/n}/(2n)^5", "(1-t)^i >= n^{1/n}/(2(2n)^5)",
                                             "i <= 6 log(2n)/t", "|L| <= 4 eta n(n+1)", "c = i+2k <= 19n log(2n)/t"};
    std::size_t lines = 0, held = 0;
    std::string first_bad;
    for (std::size_t n = 2; n <= 10; ++n)
      for (const Rational& time : {frac(1, 2), frac(1, 3), frac(1, 10)}) {
        const CoverParams p = compute_cover_params(n, time, CoverMode::Paper);
        std::vector<AuditLine> audit;
        for (const auto& l : audit_cover_params(p))
          if (std::find(listed.begin(), listed.end(), l.name) != listed.end()) audit.push_back(l);
        audit.push_back(constant_audit(n, time, time));
        if (audit.size() != listed.size() + 1) first_bad = "missing audit line";
        for (const auto& l : audit) {
          ++lines;
          if (l.holds) ++held;
          else if (first_bad.empty()) first_bad = l.name + " at n=" + std::to_string(n) + " t=" + to_string(time);
        }
      }
    d << held << '/' << lines << " lines hold" << (first_bad.empty() ? "" : ", first failure: " + first_bad);
    return first_bad.empty() && held == lines;
  });

  // Shared by 7 and 8.
  const Simplex tri = make_reference_simplex(2);
  const CoverParams desk = compute_cover_params(2, frac(1, 2), CoverMode::Desk, 5);
  std::optional<CoverCertificate> base, lifted;

  run(7, "desk cover certificate and lift", [&](std::ostringstream& d) {
    const auto t0 = Clock::now();
    base = rogers_cover(tri, desk, 7);
    lifted = lift_cover(*base, tri, desk);
    const Rational w = base->facts.witness_resolution;
    d << base->members.size() << " members, witness " << to_string(w) << " (eta/8 <= " << fmt(to_double(desk.eta_hat / 8))
      << "), lifted " << lifted->members.size() << ", volume x" << to_string(lifted->facts.total_volume / base->facts.total_volume);
    return base->facts.covers_target && base->facts.coverage_checked && w <= desk.eta.lo / 8 &&
           lifted->facts.covers_target && lifted->facts.total_volume == 2 * base->facts.total_volume &&
           since(t0) < 300;
  });

  run(8, "main bound on a 1% holes scene", [&](std::ostringstream& d) {
    if (!lifted) {
      d << "no certificate";
      return false;
    }
    const VoxelSet a = evaluate(holes_scene(5, 41, 2, frac(1, 128)));
    const Rational full = rasterize_simplex(tri, a.grid(), RasterMode::Center).measure();
    const MainBoundReport r = assemble_main_bound(a, tri, frac(1, 2), *lifted, desk.i, lifted->k_max_used);
    bool links = true;
    for (const auto& l : r.links)
      if (!l.informational) links = links && l.holds;
    d << "holes " << fmt(100 * to_double((full - a.measure()) / full)) << "%, |T\\A|=" << fmt(to_double(r.t_minus_a))
      << " <= " << fmt(to_double(r.final_rhs)) << ", links " << (links ? "hold" : "FAIL");
    for (const auto& l : r.links)
      if (l.informational) d << ", informational: " << l.name << (l.holds ? " holds" : " does not hold");
    return r.r_inside_d && links && r.final_holds;
  });

  run(9, "facet cover explorer", [](std::ostringstream& d) {
    bool ok = true;
    for (const Rational& e : {frac(1, 2), frac(1, 3), frac(2, 5), frac(3, 10), frac(1, 7)}) {
      CoverSearchProblem p;
      p.m = 1;
      p.eta0 = e;
      const CoverSolution s = local_improve(greedy_cover(p), p, 1);
      ok = ok && s.verified && s.ratio == e * ceil(1 / e);
    }
    d << "m=1 oracle " << (ok ? "matches" : "differs");
    CoverSearchProblem p;
    const CoverSolution s = local_improve(greedy_cover(p), p, 1);
    const CoverSolution back = cover_solution_from_json(to_json(s));
    const CoverSolution again = verify_cover(2, back.eta0, back.translates);
    d << "; m=2 eta0=1/2: " << s.translates.size() << " translates, ratio " << to_string(s.ratio) << ", "
      << s.verification;
    return ok && s.verified && s.verification == "exact" && s.ratio < 2 && again.verified && again.ratio == s.ratio;
  });

  run(10, "property suites and selftest", [](std::ostringstream& d) {
    bool ok = true;
    for (const auto& r : run_property_suites(1)) {
      d << r.name.substr(0, r.name.find(' ')) << ' ' << r.cases - r.failures << '/' << r.cases << "; ";
      ok = ok && r.failures == 0;
    }
    const bool big_enough = check_translate_claim(50, 1).cases >= 50;
    const auto t0 = Clock::now();
    cli::SelftestOptions o;
    o.out = (std::filesystem::temp_directory_path() / "bmlab_acceptance_selftest").string();
    const bool self = cli::cmd_selftest(o).value("pass", false);
    const double secs = since(t0);
    d << "selftest " << (self ? "pass" : "fail") << " in " << fmt(secs) << "s";
    return ok && big_enough && self && secs < 600;
  });

  std::printf("%s\n", failures == 0 ? "ALL PASS" : (std::to_string(failures) + " FAILED").c_str());
  return failures == 0 ? 0 : 1;
}
