#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

#include "bmlab/metrics.hpp"
#include "bmlab/scene.hpp"

namespace bmlab {

/// One of the two sharpness families, with closed-form expected values.
/// exponent_sharpness: A = ({0} ∪ [λ,1+λ]×[0,1]) × [0,1]^(n−2).
/// constant_lower_bound: A = [0,2]^(n−1)×[−R,0] ∪ {(0,…,0,2)}.
struct ExampleScene {
  std::string name;
  std::size_t n = 0;
  Rational param;  // λ or R
  Rational t;
  Rational h;
  std::map<std::string, Rational> expected;  // "hull_deficit", "delta_At"
};

/// The isolated point becomes the cell with that point as its lower corner.
std::pair<ExampleScene, VoxelSet> build_exponent_example(std::size_t n, const Rational& lambda, const Rational& t,
                                                         const Rational& h);
std::pair<ExampleScene, VoxelSet> build_constant_example(std::size_t n, const Rational& r, const Rational& h);
/// Rebuilds the voxel realization of a scene.
VoxelSet realize(const ExampleScene& s);

nlohmann::json to_json(const ExampleScene& s);
ExampleScene scene_from_json(const nlohmann::json& j);
/// Generic scene file with the same realization, t and expected values.
Scene to_scene(const ExampleScene& s);

struct QuantityCheck {
  std::string quantity;
  Rational measured, expected, margin;
  double rel_error = 0;
  bool strict = false;  // |measured − expected| ≤ rel_tol·expected
  bool pass = false;    // same, plus the grid margin
};

struct SceneVerification {
  StabilityReport report;
  std::vector<QuantityCheck> checks;
  bool pass = false;
  bool strict = false;
};

SceneVerification verify_scene(const ExampleScene& s, const VoxelSet& a, const Rational& rel_tol);
SceneVerification verify_expected(const std::map<std::string, Rational>& expected, const StabilityReport& report,
                                  const Rational& rel_tol);
nlohmann::json to_json(const SceneVerification& v);

/// 2^(n−1)/n against (4n)^(5n), exactly.
struct ConstantComparison {
  Rational implied_lower;
  Rational implemented;
  bool consistent = false;
};
ConstantComparison compare_constants(std::size_t n);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SlopePoint {
  Rational lambda, h, hull_deficit, delta_at;
};
struct SlopeReport {
  std::vector<SlopePoint> points;
  double slope = 0;
};

/// The exponent family across λ at h = λ/cells_per_lambda: slope of log hull deficit
/// against log δ(A;t).
SlopeReport exponent_slope(std::size_t n, const std::vector<Rational>& lambdas, const Rational& t,
                           long cells_per_lambda = 16);

struct ConvergenceReport {
  std::vector<Rational> hs;
  std::vector<double> hull_error, delta_error;
  double hull_rate = 0, delta_rate = 0;  // slope of log error against log h
};

/// Measured-vs-expected errors at h, h/2, …; a zero error counts as
/// converged and is left out of the fit.
ConvergenceReport convergence_study(const ExampleScene& s, unsigned levels = 3);
nlohmann::json to_json(const SlopeReport& r);
nlohmann::json to_json(const ConvergenceReport& r);

}  // namespace bmlab
