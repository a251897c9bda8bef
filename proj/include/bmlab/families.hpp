#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

#include "bmlab/geometry.hpp"
#include "bmlab/voxel.hpp"

namespace bmlab {

/// Family 𝒯_k(λ; μ; T): translates of μT grown from the corner simplices by
/// k rounds of pairwise λ-averaging.
struct FamilyParams {
  Rational lambda;
  Rational mu;
  unsigned k = 0;
  Simplex base;
};

/// How a member was produced. Corners have parent1 = parent2 = -1 and carry
/// the vertex index; averages are weight·parent1 + (1−weight)·parent2.
struct GenerationEntry {
  long parent1 = -1;
  long parent2 = -1;
  Rational weight = 1;
  long corner = -1;
  unsigned generation = 0;
};

struct SimplexFamily {
  FamilyParams params;
  std::vector<Simplex> members;
  /// Barycentric position p of each member μT + (1−μ)p.
  std::vector<RationalVector> positions;
  std::vector<GenerationEntry> generation_log;

  std::size_t size() const { return members.size(); }
};

constexpr std::size_t kDefaultFamilyCap = 20000;

/// The n+1 corner simplices (1−μ)x_j + μT. λ is stored for later growth.
SimplexFamily corner_simplices(const Simplex& t, const Rational& mu, const Rational& lambda = Rational(1, 2));

/// Adds all pairwise λ-averages `steps` times. Throws Capacity past `cap`.
SimplexFamily grow_family(const SimplexFamily& f, unsigned steps, std::size_t cap = kDefaultFamilyCap);

nlohmann::json to_json(const SimplexFamily& f);

/// A generation path as a DAG: nodes 0.. are either corners or
/// weight·left + (1−weight)·right of earlier nodes; the last node is the member.
struct PathNode {
  long corner = -1;
  long left = -1;
  long right = -1;
  Rational weight = 1;
};

struct FamilyPath {
  std::vector<PathNode> nodes;

  /// Depth of the root: the generation the member first appears in.
  unsigned depth() const;
  /// Barycentric position of the root member.
  RationalVector position(std::size_t n) const;
};

nlohmann::json to_json(const FamilyPath& p);
FamilyPath path_from_json(const nlohmann::json& j);

/// Rebuilds the member by explicit weighted averages of corner simplices.
Simplex replay_path(const Simplex& t, const Rational& mu, const FamilyPath& path);

struct LocateResult {
  Simplex member;
  FamilyPath path;
  unsigned k_used = 0;
  /// Shrink factor α = (s/μ)^(1/n) of the target (s its ratio), bracketed.
  Rational alpha_lo, alpha_hi;
  /// Σ_j ⌈log(α^(j−1)(1−α)μ)/log λ⌉ at that α; −1 when α = 1.
  Integer k_prime;
};

/// Member of some 𝒯_k(λ; μ; T) containing `target`, found by the facet
/// recursion with 1-D bracket refinement on each edge.
LocateResult locate_containing_simplex(const Simplex& t, const Simplex& target, const Rational& lambda,
                                       const Rational& mu);

/// Σ_{j=1..n} ⌈log(α^(j−1)(1−α)μ)/log λ⌉ with α = x^(1/n), decided exactly.
Integer k_prime_formula(std::size_t n, const Rational& alpha_power_n, const Rational& lambda, const Rational& mu);
/// Same with α given as a rational.
Integer k_prime_formula_alpha(std::size_t n, const Rational& alpha, const Rational& lambda, const Rational& mu);

/// rT + y with (S ∩ T) ⊆ rT + y ⊆ T, for S = rT + x a positive homothet, r < 1.
Simplex clamp_translate(const Simplex& t, const Simplex& s);

/// 1-D refinement: consecutive points a < b gain λa+(1−λ)b and (1−λ)a+λb.
/// Returns the largest consecutive gap of generations 0..j.
std::vector<Rational> midpoint_gaps(const Rational& lambda, unsigned generations);

struct FractalMemberRow {
  Simplex member;
  Rational member_volume;
  Rational measure_in_a;      // |T'∩A|
  Rational lower_bound;       // |T'|(1−δ) − (i+2k)·δ(A;t)
  Rational translate_excess;  // |(λ^i A)_{T'} \ A|
  Rational translate_bound;   // (i+2k)·δ(A;t)
  Rational margin;
  Rational translate_margin;
  bool violation = false;
  bool translate_violation = false;
};

struct FractalReport {
  Rational t, lambda, mu;
  unsigned i = 0, k = 0;
  Rational delta;     // 1 − |A|/|T|
  Rational delta_at;  // |D(A;t) \ A|
  long c = 0;         // i + 2k
  std::size_t family_size = 0;
  bool sampled = false;
  std::size_t sampled_members = 0;
  std::vector<FractalMemberRow> rows;
  std::size_t violations = 0;
  std::size_t translate_violations = 0;
};

/// Checks |T'∩A| ≥ |T'|(1−δ) − (i+2k)δ(A;t) for every T' in 𝒯_{i,k}(1−t),
/// falling back to uniform path sampling when the family exceeds `cap`.
FractalReport check_fractal_inequality(const VoxelSet& a, const Simplex& t, const Rational& time, unsigned i,
                                       unsigned k, std::size_t cap = kDefaultFamilyCap, std::uint64_t seed = 1);

nlohmann::json to_json(const FractalReport& r);

}  // namespace bmlab
