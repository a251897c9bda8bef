#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "bmlab/manifest.hpp"
#include "bmlab/plot.hpp"

using namespace bmlab;

namespace {

std::size_t occurrences(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
}

TEST_CASE("output directory records and manifest round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "bmlab_manifest_test";
  std::filesystem::remove_all(dir);
  OutputDir out(dir.string());
  out.write("a.txt", "hello");
  out.write("b.txt", "");
  REQUIRE(out.records().size() == 2);
  CHECK(out.records()[0].bytes == 5);
  CHECK(hash_file((dir / "a.txt").string()).fnv1a64 == out.records()[0].fnv1a64);

  RunManifest m{"cover", {{"t", "1/2"}}, 7, {hash_file((dir / "a.txt").string())}, out.records()};
  const auto j = to_json(m);
  CHECK(j.contains("versions"));
  const RunManifest back = manifest_from_json(j);
  CHECK(back.command == "cover");
  CHECK(back.seed == 7);
  CHECK(back.config == m.config);
  CHECK(back.outputs.size() == 2);
  CHECK(to_json(back) == j);
  CHECK_THROWS_AS(manifest_from_json(nlohmann::json{{"command", "x"}}), Error);
  CHECK_THROWS_AS(hash_file((dir / "missing").string()), Error);
}

TEST_CASE("thread cap reads the environment") {
  setenv("BMLAB_THREADS", "3", 1);
  CHECK(thread_cap() == 3);
  setenv("BMLAB_THREADS", "zero", 1);
  CHECK(thread_cap() == 1);
  unsetenv("BMLAB_THREADS");
  CHECK(thread_cap() == 1);
}

TEST_CASE("axis slice picks one layer") {
  VoxelSet a(GridSpec({0, 0, 0}, Rational(1, 4), {4, 4, 4}));
  a.set(CellIndex{1, 2, 3});
  a.set(CellIndex{0, 0, 3});
  a.set(CellIndex{2, 2, 0});
  const VoxelSet top = axis_slice(a, 2, Rational(7, 8));
  CHECK(top.dim() == 2);
  CHECK(top.count() == 2);
  CHECK(top.test(CellIndex{1, 2}));
  CHECK(axis_slice(a, 0, Rational(5, 8)).count() == 1);
  CHECK(axis_slice(a, 0, Rational(7, 8)).count() == 0);
  CHECK(axis_slice(a, 2, Rational(2)).empty());
}

TEST_CASE("svg merges row runs") {
  VoxelSet a(GridSpec({0, 0}, Rational(1, 2), {4, 2}));
  for (long i = 0; i < 3; ++i) a.set(CellIndex{i, 0});
  a.set(CellIndex{3, 1});
  const std::string svg = overlay_svg({{&a, "red", 0.5, "A"}}, {{Rational(0), Rational(0)}, {Rational(2), Rational(0)}, {Rational(0), Rational(1)}}, "demo");
  // Background, two runs, one legend swatch.
  CHECK(occurrences(svg, "<rect") == 4);
  CHECK(occurrences(svg, "<polygon") == 1);
  CHECK(svg.find("demo") != std::string::npos);
  CHECK_THROWS_AS(overlay_svg({{&a, "red", 0.5, "A"}, {nullptr, "blue", 0.5, "B"}}, {}, "x"), Error);
}
