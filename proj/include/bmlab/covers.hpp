#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bmlab/enclosure.hpp"
#include "bmlab/families.hpp"
#include "bmlab/geometry.hpp"
#include "bmlab/voxel.hpp"

namespace bmlab {

enum class CoverMode { Paper, Desk };

/// Construction constants for covering T∖R. η = n^(−1/n)(1−t)^i is
/// irrational in general: η^n is kept exactly, η as a certified enclosure,
/// and geometry uses the rational upper bracket eta_hat ≥ η.
struct CoverParams {
  std::size_t n = 0;
  Rational t, tau;
  unsigned i = 0;
  CoverMode mode = CoverMode::Desk;
  Rational mu;         // (1−t)^i
  Rational eta_pow_n;  // (1−t)^(in)/n
  Enclosure eta;
  Rational eta_hat;
  Enclosure zeta;  // (n+1)η
  Rational zeta_hat;
  Integer k_bound;         // k′ at α = n^(−1/n), λ = 1−t, μ
  Enclosure density_target;  // 7n·log n
};

/// Full-scale ("paper") mode picks the smallest i with (1−t)^i ≤ n^(1/n)/(2n)^5; desk mode
/// takes `desk_i`.
CoverParams compute_cover_params(std::size_t n, const Rational& t, CoverMode mode, unsigned desk_i = 0);
nlohmann::json to_json(const CoverParams& p);

struct AuditLine {
  std::string name;
  bool holds = false;
  std::string lhs, rhs;
};

/// Exact or certified checks of the construction constants.
std::vector<AuditLine> audit_cover_params(const CoverParams& p);
/// 2(1 + (2n)^(5n)·19n·log(2n)/t) ≤ (4n)^(5n)/τ.
AuditLine constant_audit(std::size_t n, const Rational& t, const Rational& tau);
nlohmann::json to_json(const std::vector<AuditLine>& lines);

/// R = (1−ζ)T, L = (1+(n+1)η)T ∖ (1−ζ−(n+1)η)T, all about the barycenter,
/// built with eta_hat.
struct Slab {
  Simplex r, l_outer, l_inner;
  Rational volume_l;
};
Slab build_slab(const Simplex& t, const CoverParams& p);

/// Random translates of eta_hat·T meeting T∖R, checked to lie in L.
/// Returns the number of samples that do.
std::size_t slab_sample_check(const Simplex& t, const CoverParams& p, std::size_t samples, std::uint64_t seed);

struct CoverFacts {
  bool coverage_checked = false;
  bool covers_target = false;
  Rational witness_resolution;
  std::size_t checked_cells = 0;
  std::size_t uncovered_cells = 0;
  std::size_t member_count = 0;
  Rational total_volume;      // Σ multiplicity · nominal member volume
  Rational geometric_volume;  // Σ multiplicity · |member|
  bool all_inside_t = false;
  bool same_size = false;

  friend bool operator==(const CoverFacts&, const CoverFacts&) = default;
};

/// A family of translates of one size covering T∖R, with recomputable facts.
/// Nominal member volume is η^n|T| for the boundary cover and μ^n|T| for
/// the lifted cover.
struct CoverCertificate {
  std::string kind;  // "boundary" or "lifted"
  CoverParams params;
  Simplex base;
  Rational member_ratio;
  Rational nominal_ratio_pow_n;
  Rational region_ratio;  // R = region_ratio·T about the barycenter
  std::vector<Simplex> members;
  std::vector<std::size_t> multiplicity;

  // Boundary cover construction record.
  std::string lattice;
  Rational lattice_density;
  RationalVector shift;
  std::uint64_t seed = 0;
  std::size_t tries = 0;
  std::size_t candidates_before_clamp = 0;

  // Lifted cover record.
  unsigned k_max_used = 0;
  Integer k_prime_effective = -1;  // k′ at the targets' own α
  Integer k_prime_nominal = -1;      // k′ at α = n^(−1/n)

  CoverFacts facts;
};

/// Default witness resolution: the largest dyadic h ≤ η/8.
Rational default_witness_resolution(const CoverParams& p);

inline constexpr std::size_t kMaxCoverMembers = 2'000'000;

/// Periodic lattice covering by translates of eta_hat·T, best of `max_tries`
/// seeded shifts (fewest translates meeting T∖R), each clamped into T.
/// Coverage is verified at `witness` when n ≤ 3 and `verify` is set.
/// Throws Capacity past kMaxCoverMembers candidates.
CoverCertificate rogers_cover(const Simplex& t, const CoverParams& p, std::uint64_t seed, std::size_t max_tries = 64,
                              bool verify = true, std::optional<Rational> witness = std::nullopt);

/// Maps each member into 𝒯_{i,k}(1−t) via locate_containing_simplex.
CoverCertificate lift_cover(const CoverCertificate& b, const Simplex& t, const CoverParams& p, bool verify = true,
                            std::optional<Rational> witness = std::nullopt);

/// Recomputes all facts; coverage only when `check_coverage`.
CoverFacts verify_certificate(const CoverCertificate& c, bool check_coverage, const Rational& witness);

nlohmann::json to_json(const CoverCertificate& c);
CoverCertificate certificate_from_json(const nlohmann::json& j);

struct BoundLink {
  std::string name;
  Rational lhs, rhs, margin;
  bool holds = false;
  bool informational = false;
};

struct MainBoundReport {
  Rational t, h;
  bool r_inside_d = false;
  std::size_t r_cells_missing = 0;
  Rational t_minus_a;      // |T∖A|
  Rational t_minus_d;      // |T∖D(A;t)|
  Rational delta_at;       // |D(A;t)∖A|
  Rational sum_members;    // Σ|T''|
  std::size_t cover_size = 0;
  long c = 0;              // i + 2k
  std::vector<BoundLink> links;
  Rational final_rhs;      // 2(1 + |𝒜|c)δ(A;t)
  bool final_holds = false;
  bool all_links_hold = false;
};

/// Evaluates |T∖D| ≤ Σ|T''∖D| ≤ Σ|T''∖A| ≤ ½|T∖A| + |𝒜|cδ(A;t) on the grid
/// (refined to the sumset grid), each link with its margin.
MainBoundReport assemble_main_bound(const VoxelSet& a, const Simplex& t, const Rational& time,
                                    const CoverCertificate& cover, unsigned i, unsigned k);
nlohmann::json to_json(const MainBoundReport& r);

}  // namespace bmlab
