#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "bmlab/geometry.hpp"
#include "bmlab/voxel.hpp"

namespace bmlab {

/// Default for the regime thresholds Δ_n(τ), δ_n(τ): δ(A;t)/|A| above it is
/// "out of regime".
inline const Rational kDefaultDeltaThreshold{1, 100};

struct StabilityReport {
  std::size_t n = 0;
  Rational t, tau;
  Rational measure_a, measure_d, measure_hull;
  Rational delta_at;      // |D(A;t)∖A|
  Rational hull_deficit;  // |co(A)∖A|
  double delta_prime = 0;           // (|D|^(1/n) − |A|^(1/n))/|A|^(1/n)
  double delta_prime_relation = 0;  // δ(A;t)/(n|A|)
  Rational omega_upper;             // hull_deficit/|A|, K_A = co(A)
  std::optional<Rational> ratio;    // hull_deficit/delta_at, absent when delta_at = 0
  Rational c_n_bound;               // (4n)^(5n)/τ
  Rational threshold;
  // h^n · boundary cells of the sets each quantity is read from.
  Rational margin_a, margin_d, margin_delta, margin_hull;
  std::string verdict;  // "holds", "violated", "out of regime"
};

/// Measures A, D(A;t) (exact sumset) and co(A) and compares
/// |co(A)∖A| with (4n)^(5n)τ⁻¹δ(A;t).
StabilityReport stability_report(const VoxelSet& a, const Rational& t, const Rational& tau,
                                 const Rational& threshold = kDefaultDeltaThreshold);
nlohmann::json to_json(const StabilityReport& r);
std::string csv_header();
std::string csv_row(const StabilityReport& r);

struct JohnCheckInput {
  Simplex p;
  VoxelSet a;
  Rational t, tau, b;
};

struct JohnReport {
  Rational missing;       // |P∖A|/|P| measured on the grid
  Rational eps_squared;   // ε², ε = b^n·½·(τ/(1−τ))^n·(2/√n)^n
  bool precondition = false;
  bool inclusion = false;  // (1−b)P ⊆ D(A;t)
  std::size_t missing_cells = 0;
  /// Smallest b on the 1/1024 grid with (1−b)P ⊆ D(A;t).
  Rational smallest_b;
};

/// Throws Input when |P∖A| ≥ ε|P|.
JohnReport john_point_check(const JohnCheckInput& in);
/// ε_n(τ)² at b, exact.
Rational john_epsilon_squared(std::size_t n, const Rational& tau, const Rational& b);
nlohmann::json to_json(const JohnReport& r);

struct ReductionPiece {
  Simplex triangle;
  VoxelSet part;  // A restricted to the triangle (center mode)
  Rational area;
};

/// Fan triangulation of the hull of A's cells at o. n = 2 only.
std::vector<ReductionPiece> reduce_to_simplices_2d(const VoxelSet& a, const RationalVector& o);

struct PieceInequality {
  Rational missing_a;  // |T_i∖A|
  Rational missing_d;  // |T_i∖D(A;t)|
  Rational rhs;        // (1 − C_n⁻¹τ)|T_i∖A|
  bool holds = false;
};
std::vector<PieceInequality> reduction_inequalities(const VoxelSet& a, const std::vector<ReductionPiece>& pieces,
                                                   const Rational& t, const Rational& tau);

struct AsymmetryResult {
  Rational value;  // |A Δ (s·co(B) + x)|/|A| at the best shift found
  Rational initial;
  Rational s;
  RationalVector shift;
  Rational margin;
  std::size_t evaluations = 0;
};

/// Upper bound on the asymmetry index by local search over grid shifts,
/// starting from s·co(B) scaled about the centroid of co(B) and moved to A's.
AsymmetryResult asymmetry_index(const VoxelSet& a, const VoxelSet& b);

}  // namespace bmlab
