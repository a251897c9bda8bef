#include <doctest.h>

#include <algorithm>
#include <functional>

#include "bmlab/explorer.hpp"

using namespace bmlab;

namespace {

Rational q(long p, long d = 1) { return frac(p, d); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Domain;
}

// Independent check on the grid (η₀/d)ℤ^m ∩ F, straight from the definition.
bool dense_check(const CoverSolution& s, long d) {
  const Rational w = s.eta0 / d;
  const long n = to_long(floor(1 / w));
  for (long i = 0; i <= n; ++i)
    for (long j = 0; i + j <= n; ++j) {
      const Rational px = i * w, py = j * w;
      bool hit = false;
      for (const auto& x : s.translates)
        if (px >= x[0] && py >= x[1] && (px - x[0]) + (py - x[1]) <= s.eta0) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
  return true;
}

CoverSolution search(unsigned m, const Rational& eta0, std::size_t budget = 256) {
  CoverSearchProblem p;
  p.m = m;
  p.eta0 = eta0;
  p.budget = budget;
  return local_improve(greedy_cover(p), p, 1);
}

}  // namespace

TEST_CASE("interval covers are optimal") {
  for (const Rational& e : {q(1, 2), q(1, 3), q(2, 5), q(3, 10), q(1, 7)}) {
    CoverSolution s = search(1, e);
    CHECK(s.verified);
    CHECK(s.verification == "exact");
    CHECK(Rational(static_cast<long>(s.translates.size())) == ceil(1 / e));
    CHECK(s.ratio == e * ceil(1 / e));
  }
}

TEST_CASE("half-size triangle cover beats the trivial ratio") {
  CoverSolution s = search(2, q(1, 2));
  CHECK(s.verified);
  CHECK(s.verification == "exact");
  CHECK(s.ratio <= q(7, 4));
  CHECK(s.ratio < 2);
  CHECK(s.locally_optimal);
  CHECK(dense_check(s, 64));
}

TEST_CASE("hand-built covers") {
  std::vector<RationalVector> six = {{q(0), q(0)},    {q(1, 2), q(0)},    {q(0), q(1, 2)},
                                     {q(1, 4), q(0)}, {q(0), q(1, 4)}, {q(1, 4), q(1, 4)}};
  CoverSolution s = verify_cover(2, q(1, 2), six);
  CHECK(s.verified);
  CHECK(s.ratio == q(3, 2));
  CHECK(dense_check(s, 64));
  for (std::size_t k = 0; k < six.size(); ++k) {
    auto fewer = six;
    fewer.erase(fewer.begin() + static_cast<long>(k));
    CHECK_FALSE(verify_cover(2, q(1, 2), fewer).verified);
  }
  CoverSolution corners = verify_cover(2, q(1, 2), {{q(0), q(0)}, {q(1, 2), q(0)}, {q(0), q(1, 2)}});
  CHECK_FALSE(corners.verified);
  CHECK(corners.uncovered_points > 0);
}

TEST_CASE("a gap narrower than the witness grid is still caught") {
  const Rational e = q(1, 2);
  const Rational gap = q(1, 1000);
  // Shift one member right by less than a witness step: the sliver along x = 1/4 opens.
  std::vector<RationalVector> xs = {{q(0), q(0)},           {q(1, 2), q(0)},    {q(0), q(1, 2)},
                                    {q(1, 4) + gap, q(0)}, {q(0), q(1, 4)}, {q(1, 4), q(1, 4)}};
  CoverSolution s = verify_cover(2, e, xs);
  CHECK_FALSE(s.verified);
}

TEST_CASE("redundant members are removed") {
  CoverSolution s = search(2, q(1, 2));
  auto xs = s.translates;
  xs.push_back(xs.front());
  xs.push_back({q(1, 8), q(1, 8)});
  CoverSolution padded = verify_cover(2, q(1, 2), xs);
  REQUIRE(padded.verified);
  CoverSearchProblem p;
  CoverSolution better = local_improve(padded, p, 7);
  CHECK(better.verified);
  CHECK(better.translates.size() <= s.translates.size());
  CHECK(better.improvements >= 2);
}

TEST_CASE("JSON round trip re-verifies") {
  CoverSolution s = search(2, q(1, 2));
  CoverSolution back = cover_solution_from_json(nlohmann::json::parse(to_json(s).dump()));
  CHECK(back.translates == s.translates);
  CHECK(back.ratio == s.ratio);
  CHECK(back.verified == s.verified);
  CHECK(back.uncovered_points == s.uncovered_points);
  nlohmann::json bad = to_json(s);
  bad["translates"] = nlohmann::json::array();
  CHECK_FALSE(cover_solution_from_json(bad).verified);
  CHECK_THROWS_AS(cover_solution_from_json(nlohmann::json{{"m", 2}}), Error);
}

TEST_CASE("budget and range errors") {
  CoverSearchProblem p;
  p.budget = 3;
  CHECK(kind_of([&] { greedy_cover(p); }) == ErrorKind::Input);
  p.budget = 5;
  CHECK(kind_of([&] { greedy_cover(p); }) == ErrorKind::Capacity);
  p.budget = 256;
  p.eta0 = q(3, 4);
  CHECK(kind_of([&] { greedy_cover(p); }) == ErrorKind::Input);
  p.eta0 = q(1, 2);
  p.m = 4;
  CHECK(kind_of([&] { greedy_cover(p); }) == ErrorKind::Input);
}

TEST_CASE("a larger budget never gives a worse cover") {
  CHECK(search(2, q(1, 2), 64).ratio == search(2, q(1, 2), 256).ratio);
  CHECK(search(2, q(1, 2), 16).ratio == search(2, q(1, 2), 64).ratio);
}

TEST_CASE("three-dimensional covers are labelled numerical-only") {
  CoverSearchProblem p;
  p.m = 3;
  p.lns_iterations = 20;
  CoverSolution s = local_improve(greedy_cover(p), p, 1);
  CHECK(s.verified);
  CHECK(s.verification == "numerical-only");
  CHECK(s.witness_resolution == q(1, 32));
  CHECK(s.witness_points == 35 * 34 * 33 / 6);
  CHECK_THROWS_AS(cover_svg(s), Error);
}

TEST_CASE("frontier table and picture") {
  auto rows = ratio_frontier(2, {q(1, 2)});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].below_inverse);
  CHECK(rows[0].below_eps[0]);
  CHECK_FALSE(rows[0].below_eps[1]);
  CHECK_FALSE(rows[0].below_eps[2]);
  std::string csv = frontier_csv(rows);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.rfind("m,eta0,count,ratio", 0) == 0);
  std::string svg = cover_svg(rows[0].best);
  CHECK(svg.find("<svg") == 0);
  std::size_t polys = 0;
  for (std::size_t at = svg.find("<polygon"); at != std::string::npos; at = svg.find("<polygon", at + 1)) ++polys;
  CHECK(polys == rows[0].best.translates.size() + 1);
}
