#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "bmlab/voxel.hpp"

namespace bmlab {

/// Outcome of one randomized property suite.
struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  double seconds = 0;
};

/// homothety(homothety(S,c,r1),c,r2) = homothety(S,c,r1·r2), n ∈ {1,2,3}.
PropertyResult check_homothety_composition(std::size_t cases, std::uint64_t seed);
/// volume(homothety(S,c,r)) = |r|^n·volume(S).
PropertyResult check_volume_homogeneity(std::size_t cases, std::uint64_t seed);
/// |A∪B| = |A|+|B|−|A∩B| and |A∖B|+|A∩B| = |A| on random bit arrays.
PropertyResult check_inclusion_exclusion(std::size_t cases, std::uint64_t seed);

/// One instance of the translate claim: X′ a grid-aligned translate of X,
/// Y ⊆ X and Y′ ⊆ X′ with |X∖Y|, |X′∖Y′| ≤ V′, and |λY+(1−λ)Y′| ≥ V−V′.
struct TranslateClaim {
  std::size_t n = 0;
  Rational lambda;
  Rational v;        // |X| on the grid
  Rational v_prime;  // max(|X∖Y|, |X′∖Y′|)
  Rational sumset;   // |λY+(1−λ)Y′|
  Rational margin;   // 2h^n·(boundary cells of Y and Y′)
  bool holds = false;
};
TranslateClaim translate_claim_instance(std::size_t n, const Rational& lambda, std::uint64_t seed);
/// Half the instances in one dimension, half in two, λ ∈ {1/2, 1/3, 2/3}.
PropertyResult check_translate_claim(std::size_t cases, std::uint64_t seed);

/// All four suites at their acceptance sizes (100, 100, 100, 50).
std::vector<PropertyResult> run_property_suites(std::uint64_t seed);
nlohmann::json to_json(const PropertyResult& r);

}  // namespace bmlab
