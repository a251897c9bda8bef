#include <CLI11.hpp>

#include <iostream>

#include "bmlab/rational.hpp"
#include "commands.hpp"

namespace {

enum Exit { kOk = 0, kFailedCheck = 1, kUsage = 2, kInput = 3, kCapacity = 4 };

}  // namespace

int main(int argc, char** argv) {
  using namespace bmlab::cli;
  CLI::App app{"bmlab: stability of the interpolated sumset on voxel grids"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bmlab 0.1.0");

  ReportOptions report;
  auto* r = app.add_subcommand("report", "Stability report for a scene file");
  r->add_option("--scene", report.scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
  r->add_option("--t", report.t, "t as p/q (default: the scene's t)");
  r->add_option("--tau", report.tau, "tau as p/q (default: t)");
  r->add_option("--threshold", report.threshold, "Regime threshold on delta(A;t)/|A|")->capture_default_str();
  r->add_option("--rel-tol", report.rel_tol, "Tolerance for the scene's expected values")->capture_default_str();
  r->add_option("--resolution", report.resolution, "Refine the scene grid by this factor")->capture_default_str();
  r->add_option("--out", report.out, "Output directory")->capture_default_str();

  CoverOptions cover;
  auto* c = app.add_subcommand("cover", "Boundary cover certificate of the reference simplex");
  c->add_option("--n", cover.n, "Dimension")->capture_default_str();
  c->add_option("--t", cover.t, "t as p/q")->capture_default_str();
  c->add_option("--mode", cover.mode, "desk or paper")->capture_default_str();
  c->add_option("--i", cover.i, "Generation index in desk mode")->capture_default_str();
  c->add_option("--seed", cover.seed, "Lattice shift seed")->capture_default_str();
  c->add_option("--tries", cover.tries, "Seeded shifts tried")->capture_default_str();
  c->add_option("--witness", cover.witness, "Witness grid cell size p/q (default: largest dyadic <= eta/8)");
  c->add_flag("--lift", cover.lift, "Also lift the cover into the averaged family");
  c->add_flag("!--no-verify", cover.verify, "Skip the coverage witness");
  c->add_option("--out", cover.out, "Output directory")->capture_default_str();

  FractalOptions fractal;
  auto* f = app.add_subcommand("fractal", "Fractal inequality over the averaged family");
  f->add_option("--scene", fractal.scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
  f->add_option("--t", fractal.t, "t as p/q (default: the scene's t)");
  f->add_option("--i", fractal.i, "Generation i")->capture_default_str();
  f->add_option("--k", fractal.k, "Averaging steps k")->capture_default_str();
  f->add_option("--cap", fractal.cap, "Member cap before sampling (0: default)")->capture_default_str();
  f->add_option("--seed", fractal.seed, "Sampling seed")->capture_default_str();
  f->add_option("--out", fractal.out, "Output directory")->capture_default_str();

  ExploreOptions explore;
  auto* e = app.add_subcommand("explore", "Search for small covers of a facet by translates");
  e->add_option("--m", explore.m, "Facet dimension (1, 2 or 3)")->capture_default_str();
  e->add_option("--eta", explore.etas, "eta0 values as p/q, comma separated")->delimiter(',')->capture_default_str();
  e->add_option("--budget", explore.budget, "Maximum number of translates")->capture_default_str();
  e->add_option("--q", explore.q, "Candidate lattice refinement")->capture_default_str();
  e->add_option("--lns-iterations", explore.lns_iterations, "Large-neighbourhood moves")->capture_default_str();
  e->add_option("--seed", explore.seed, "Search seed")->capture_default_str();
  e->add_option("--out", explore.out, "Output directory")->capture_default_str();

  JohnOptions john;
  auto* j = app.add_subcommand("john", "Check (1-b)P inside D(A;t)");
  j->add_option("--scene", john.scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
  j->add_option("--simplex", john.simplex, "Simplex P as JSON {\"vertices\": ...} (default: reference simplex)")
      ->check(CLI::ExistingFile);
  j->add_option("--t", john.t, "t as p/q (default: the scene's t)");
  j->add_option("--tau", john.tau, "tau as p/q (default: t)");
  j->add_option("--b", john.b, "b as p/q")->required();
  j->add_option("--out", john.out, "Output directory")->capture_default_str();

  ExampleOptions example;
  auto* x = app.add_subcommand("example", "Build, measure and export a sharpness example");
  x->add_option("--name", example.name, "constant or exponent")->capture_default_str();
  x->add_option("--n", example.n, "Dimension")->capture_default_str();
  x->add_option("--lambda,--R", example.param, "lambda (exponent) or R (constant) as p/q");
  x->add_option("--t", example.t, "t = tau for the exponent example")->capture_default_str();
  x->add_option("--step", example.h, "Grid step p/q");
  x->add_option("--rel-tol", example.rel_tol, "Relative tolerance");
  x->add_option("--out", example.out, "Output directory")->capture_default_str();

  SelftestOptions selftest;
  auto* s = app.add_subcommand("selftest", "Property suites, reproductions and determinism");
  s->add_flag("--quick", selftest.quick, "Coarser grids, shorter search");
  s->add_option("--seed", selftest.seed, "Seed")->capture_default_str();
  s->add_option("--out", selftest.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    nlohmann::json summary;
    if (*r) summary = cmd_report(report);
    else if (*c) summary = cmd_cover(cover);
    else if (*f) summary = cmd_fractal(fractal);
    else if (*e) summary = cmd_explore(explore);
    else if (*j) summary = cmd_john(john);
    else if (*x) summary = cmd_example(example);
    else summary = cmd_selftest(selftest);
    std::cout << summary.dump(2) << '\n';
    if (*s && !summary.value("pass", false)) return kFailedCheck;
    return kOk;
  } catch (const bmlab::Error& err) {
    std::cerr << "bmlab: " << err.what() << '\n';
    return err.kind() == bmlab::ErrorKind::Capacity ? kCapacity : kInput;
  } catch (const std::exception& err) {
    std::cerr << "bmlab: internal error: " << err.what() << '\n';
    return kFailedCheck;
  }
}
