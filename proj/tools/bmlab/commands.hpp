#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bmlab::cli {

// Every command writes its files plus manifest.json into `out` and returns a
// short JSON summary for stdout. Rationals arrive as "p/q" strings.

struct ReportOptions {
  std::string scene, out = "bmlab_out";
  std::string t, tau, threshold = "1/100", rel_tol = "5/100";
  long resolution = 1;
};
nlohmann::json cmd_report(const ReportOptions& o);

struct CoverOptions {
  std::size_t n = 2;
  std::string t = "1/2", mode = "desk", witness, out = "bmlab_out";
  unsigned i = 5;
  std::uint64_t seed = 1;
  std::size_t tries = 64;
  bool lift = false, verify = true;
};
nlohmann::json cmd_cover(const CoverOptions& o);

struct FractalOptions {
  std::string scene, t, out = "bmlab_out";
  unsigned i = 1, k = 1;
  std::size_t cap = 0;  // 0: library default
  std::uint64_t seed = 1;
};
nlohmann::json cmd_fractal(const FractalOptions& o);

struct ExploreOptions {
  unsigned m = 2;
  std::vector<std::string> etas{"1/2"};
  std::size_t budget = 256, lns_iterations = 200;
  long q = 8;
  std::uint64_t seed = 1;
  std::string out = "bmlab_out";
};
nlohmann::json cmd_explore(const ExploreOptions& o);

struct JohnOptions {
  std::string scene, t, tau, b, simplex, out = "bmlab_out";
};
nlohmann::json cmd_john(const JohnOptions& o);

struct ExampleOptions {
  std::string name = "constant";  // "constant" or "exponent"
  std::size_t n = 2;
  std::string param, t = "1/4", h, rel_tol, out = "bmlab_out";
};
nlohmann::json cmd_example(const ExampleOptions& o);

struct SelftestOptions {
  bool quick = false;
  std::uint64_t seed = 1;
  std::string out = "bmlab_out";
};
/// Summary carries "pass"; the caller turns a failure into exit code 1.
nlohmann::json cmd_selftest(const SelftestOptions& o);

}  // namespace bmlab::cli
