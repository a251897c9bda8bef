#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bmlab/manifest.hpp"
#include "bmlab/rational.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::temp_directory_path() / "bmlab_cli_smoke";

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BMLAB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out(const std::string& name) { return (kScratch / name).string(); }
std::string scene(const std::string& name) { return std::string(BMLAB_SCENES) + "/" + name; }

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("report on shipped example scenes matches expectations") {
  for (const char* s : {"constant_n2.json", "exponent_n2.json"}) {
    CAPTURE(s);
    REQUIRE(run_cli("report --scene " + scene(s) + " --out " + out("report")) == 0);
    const auto j = read_json(kScratch / "report" / "report.json");
    CHECK(j["expected"]["pass"] == true);
    CHECK(fs::exists(kScratch / "report" / "report.svg"));
    CHECK(fs::exists(kScratch / "report" / "report.csv"));
    const auto m = bmlab::manifest_from_json(read_json(kScratch / "report" / "manifest.json"));
    CHECK(m.command == "report");
    CHECK(m.inputs.size() == 1);
    CHECK(m.outputs.size() == 3);
  }
}

TEST_CASE("three-dimensional scenes get a slice plot") {
  REQUIRE(run_cli("report --scene " + scene("constant_n3.json") + " --out " + out("report3")) == 0);
  CHECK(fs::exists(kScratch / "report3" / "report_slice.svg"));
  CHECK_FALSE(fs::exists(kScratch / "report3" / "report.svg"));
}

TEST_CASE("doubling the resolution shrinks the margin") {
  REQUIRE(run_cli("report --scene " + scene("corner_hole.json") + " --out " + out("res1")) == 0);
  REQUIRE(run_cli("report --scene " + scene("corner_hole.json") + " --resolution 2 --out " + out("res2")) == 0);
  const auto a = read_json(kScratch / "res1" / "report.json")["report"];
  const auto b = read_json(kScratch / "res2" / "report.json")["report"];
  const double m1 = bmlab::to_double(bmlab::parse_rational(a["margins"]["hull_deficit"].get<std::string>()));
  const double m2 = bmlab::to_double(bmlab::parse_rational(b["margins"]["hull_deficit"].get<std::string>()));
  CHECK(m2 < 0.6 * m1);
  CHECK(m2 > 0.4 * m1);
}

TEST_CASE("cover, fractal and explore runs") {
  REQUIRE(run_cli("cover --n 2 --t 1/2 --mode desk --i 5 --seed 7 --out " + out("cover")) == 0);
  CHECK(read_json(kScratch / "cover" / "certificate.json")["facts"]["covers_target"] == true);

  REQUIRE(run_cli("fractal --scene " + scene("corner_hole.json") + " --t 1/2 --i 1 --k 1 --out " + out("fractal")) == 0);
  CHECK(read_json(kScratch / "fractal" / "fractal.json")["violations"] == 0);

  REQUIRE(run_cli("explore --m 2 --eta 1/2 --out " + out("explore")) == 0);
  CHECK(fs::exists(kScratch / "explore" / "frontier.csv"));
  CHECK(fs::exists(kScratch / "explore" / "cover_eta_1_2.svg"));

  REQUIRE(run_cli("john --scene " + scene("holes_small.json") + " --b 1/2 --out " + out("john")) == 0);
  CHECK(fs::exists(kScratch / "john" / "john.json"));
}

TEST_CASE("exit codes") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("nonsense") == 2);
  CHECK(run_cli("cover --n two") == 2);
  // Floats are not rationals.
  CHECK(run_cli("cover --t 0.5 --out " + out("x")) == 3);
  CHECK(run_cli("cover --t 3/4 --out " + out("x")) == 3);
  CHECK(run_cli("explore --eta 1/2 --budget 5 --out " + out("x")) == 4);

  fs::create_directories(kScratch);
  std::ofstream(kScratch / "broken.json") << "{\"name\": \"b\",\n \"dim\": 2,,}\n";
  CHECK(run_cli("report --scene " + out("broken.json") + " --out " + out("x")) == 3);
  const std::string cmd =
      std::string(BMLAB_CLI) + " report --scene " + out("broken.json") + " --out " + out("x") + " 2>&1 >/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string err;
  char buf[256];
  while (fgets(buf, sizeof buf, p)) err += buf;
  pclose(p);
  CHECK(err.find("line 2") != std::string::npos);
}

TEST_CASE("same inputs give identical output hashes") {
  for (int run = 0; run < 2; ++run)
    REQUIRE(run_cli("example --name exponent --n 2 --step 1/64 --out " + out("det" + std::to_string(run))) == 0);
  for (const auto& f : fs::directory_iterator(kScratch / "det0")) {
    CAPTURE(f.path().filename().string());
    CHECK(bmlab::hash_file(f.path().string()).fnv1a64 ==
          bmlab::hash_file((kScratch / "det1" / f.path().filename()).string()).fnv1a64);
  }
}
