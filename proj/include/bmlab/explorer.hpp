#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "bmlab/geometry.hpp"

namespace bmlab {

/// Cover F = conv{0, e_1, …, e_m} by translates x + η₀F.
struct CoverSearchProblem {
  unsigned m = 2;
  Rational eta0{1, 2};
  long q = 8;              // candidate offsets on the lattice (η₀/q)ℤ^m
  std::size_t budget = 256;
  std::size_t lns_iterations = 200;
  std::size_t lns_stall = 60;  // stop after this many moves without a smaller cover
};

struct CoverSolution {
  unsigned m = 0;
  Rational eta0;
  std::vector<RationalVector> translates;
  Rational ratio;  // count·η₀^m
  bool verified = false;
  /// "exact" (interval or polygon difference empty, m ≤ 2) or
  /// "numerical-only" (witness points only, m = 3).
  std::string verification;
  Rational witness_resolution;
  std::size_t witness_points = 0;
  std::size_t uncovered_points = 0;
  bool locally_optimal = false;  // no remove-one or two-for-one move exists
  std::size_t improvements = 0;
};

/// m = 1: left-to-right sweep. Otherwise greedy max-coverage over the
/// candidate lattice, then pruning; refines its sample set from the exact
/// uncovered pieces until the cover verifies.
/// Throws Capacity when more than `budget` translates are needed.
CoverSolution greedy_cover(const CoverSearchProblem& p);

/// Remove-one and two-for-one moves (the replacement placed exactly) in a
/// seeded order, then large-neighbourhood moves: drop a cluster of nearby
/// translates, re-cover the hole greedily, keep it when no larger.
/// locally_optimal refers to the first two move types.
CoverSolution local_improve(const CoverSolution& s, const CoverSearchProblem& p, std::uint64_t seed);

/// Recomputes ratio and verification of the translates.
CoverSolution verify_cover(unsigned m, const Rational& eta0, const std::vector<RationalVector>& translates);

nlohmann::json to_json(const CoverSolution& s);
CoverSolution cover_solution_from_json(const nlohmann::json& j);

struct FrontierRow {
  Rational eta0;
  CoverSolution best;
  Rational inverse;                   // η₀⁻¹
  std::vector<bool> below_eps;        // ratio < η₀⁻¹(1−ε), ε ∈ {0.1, 0.25, 0.5}
  bool below_inverse = false;
};

std::vector<FrontierRow> ratio_frontier(unsigned m, const std::vector<Rational>& etas, std::size_t budget = 256,
                                        long q = 8, std::uint64_t seed = 1);
std::string frontier_csv(const std::vector<FrontierRow>& rows);
nlohmann::json to_json(const std::vector<FrontierRow>& rows);

/// Picture of an m = 2 cover.
std::string cover_svg(const CoverSolution& s);

}  // namespace bmlab
