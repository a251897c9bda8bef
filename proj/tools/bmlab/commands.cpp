#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bmlab/covers.hpp"
#include "bmlab/examples.hpp"
#include "bmlab/explorer.hpp"
#include "bmlab/families.hpp"
#include "bmlab/manifest.hpp"
#include "bmlab/metrics.hpp"
#include "bmlab/plot.hpp"
#include "bmlab/properties.hpp"
#include "bmlab/scene.hpp"

namespace bmlab::cli {

namespace {

Rational rational_arg(const std::string& name, const std::string& text) {
  if (text.empty()) fail_input("--" + name + " is required");
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    fail_input("--" + name + ": " + e.what());
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void finish(OutputDir& out, RunManifest m) {
  m.config["threads"] = thread_cap();
  m.outputs = out.records();
  out.write("manifest.json", dump(to_json(m)));
}

/// Scene t from the flag or the file.
Rational scene_t(const Scene& s, const std::string& flag) {
  if (!flag.empty()) return rational_arg("t", flag);
  if (s.t) return *s.t;
  fail_input("--t is required (the scene has no \"t\")");
}

std::string simplex_svg(const std::vector<std::pair<const std::vector<Simplex>*, std::string>>& groups,
                        const Simplex& frame, const std::string& title) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& v : frame.vertices()) {
    x0 = std::min(x0, to_double(v[0]));
    x1 = std::max(x1, to_double(v[0]));
    y0 = std::min(y0, to_double(v[1]));
    y1 = std::max(y1, to_double(v[1]));
  }
  const double pad = 30, scale = 600 / std::max(x1 - x0, y1 - y0);
  auto px = [&](const Rational& x) { return pad + (to_double(x) - x0) * scale; };
  auto py = [&](const Rational& y) { return pad + (y1 - to_double(y)) * scale; };
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * pad + (x1 - x0) * scale << "\" height=\""
     << 3 * pad + (y1 - y0) * scale << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  auto poly = [&](const Simplex& s, const std::string& style) {
    os << "<polygon points=\"";
    for (const auto& v : s.vertices()) os << px(v[0]) << ',' << py(v[1]) << ' ';
    os << "\" " << style << "/>\n";
  };
  for (const auto& [members, color] : groups)
    for (const auto& s : *members)
      poly(s, "fill=\"" + color + "\" fill-opacity=\"0.15\" stroke=\"" + color + "\" stroke-width=\"0.5\"");
  poly(frame, "fill=\"none\" stroke=\"black\" stroke-width=\"2\"");
  os << "<text x=\"" << pad << "\" y=\"" << 2 * pad + (y1 - y0) * scale
     << "\" font-family=\"monospace\" font-size=\"13\">" << title << "</text>\n</svg>\n";
  return os.str();
}

}  // namespace

nlohmann::json cmd_report(const ReportOptions& o) {
  if (o.resolution < 1) fail_input("--resolution must be at least 1");
  Scene scene = load_scene(o.scene);
  if (o.resolution > 1) scene = refined(scene, o.resolution);
  const Rational t = scene_t(scene, o.t);
  const Rational tau = o.tau.empty() ? t : rational_arg("tau", o.tau);
  const Rational threshold = rational_arg("threshold", o.threshold);
  const VoxelSet a = evaluate(scene);
  const std::size_t n = a.dim();
  const StabilityReport r = stability_report(a, t, tau, threshold);

  OutputDir out(o.out);
  nlohmann::json report = {{"scene", scene.name}, {"h", to_string(scene.grid.h)}, {"report", to_json(r)}};
  if (!scene.expected.empty())
    report["expected"] = to_json(verify_expected(scene.expected, r, rational_arg("rel-tol", o.rel_tol)));
  out.write("report.json", dump(report));
  out.write("report.csv", csv_header() + "\n" + csv_row(r) + "\n");

  if (n == 2 || n == 3) {
    const long q = to_long(t.get_den());
    const VoxelSet d = interpolated_sumset(a, a, t, SumsetMode::Exact);
    const VoxelSet d_only = set_difference(d, q == 1 ? a : refine(a, q));
    const VoxelSet hull_only = set_difference(convex_hull(a), a);
    const std::string title = scene.name + " t=" + to_string(t) + " verdict: " + r.verdict;
    if (n == 2) {
      out.write("report.svg", overlay_svg({{&a, "steelblue", 0.8, "A"},
                                           {&d_only, "darkorange", 0.6, "D(A;t) \\ A"},
                                           {&hull_only, "seagreen", 0.4, "co(A) \\ A"}},
                                          hull_polygon_2d(a), title));
    } else {
      // Slice through the middle of A's grid along the last axis.
      const GridSpec& g = a.grid();
      const Rational z = g.origin[2] + g.h * (Rational(2 * (g.extents[2] / 2) + 1, 2));
      const VoxelSet sa = axis_slice(a, 2, z), sd = axis_slice(d_only, 2, z), sh = axis_slice(hull_only, 2, z);
      out.write("report_slice.svg", overlay_svg({{&sa, "steelblue", 0.8, "A"},
                                                 {&sd, "darkorange", 0.6, "D(A;t) \\ A"},
                                                 {&sh, "seagreen", 0.4, "co(A) \\ A"}},
                                                {}, title + " slice z=" + to_string(z)));
    }
  }
  RunManifest m{"report",
                {{"scene", o.scene}, {"t", to_string(t)}, {"tau", to_string(tau)}, {"threshold", o.threshold},
                 {"rel_tol", o.rel_tol}, {"resolution", o.resolution}},
                0,
                {hash_file(o.scene)},
                {}};
  finish(out, m);
  nlohmann::json summary = {{"command", "report"},
                            {"scene", scene.name},
                            {"verdict", r.verdict},
                            {"delta_At", to_string(r.delta_at)},
                            {"hull_deficit", to_string(r.hull_deficit)},
                            {"margin_hull", to_string(r.margin_hull)}};
  if (report.contains("expected")) summary["expected_pass"] = report["expected"]["pass"];
  return summary;
}

nlohmann::json cmd_cover(const CoverOptions& o) {
  const Rational t = rational_arg("t", o.t);
  CoverMode mode;
  if (o.mode == "desk") mode = CoverMode::Desk;
  else if (o.mode == "paper") mode = CoverMode::Paper;
  else fail_input("--mode must be desk or paper");
  const CoverParams p = compute_cover_params(o.n, t, mode, o.i);
  const Simplex tri = make_reference_simplex(o.n);
  std::optional<Rational> witness;
  if (!o.witness.empty()) witness = rational_arg("witness", o.witness);

  OutputDir out(o.out);
  const auto audit = audit_cover_params(p);
  out.write("params.json", dump({{"params", to_json(p)}, {"audit", to_json(audit)}}));
  const CoverCertificate c = rogers_cover(tri, p, o.seed, o.tries, o.verify, witness);
  out.write("certificate.json", dump(to_json(c)));
  nlohmann::json summary = {{"command", "cover"},
                            {"i", p.i},
                            {"members", c.members.size()},
                            {"coverage_checked", c.facts.coverage_checked},
                            {"covers_target", c.facts.covers_target},
                            {"witness_resolution", to_string(c.facts.witness_resolution)}};
  std::optional<CoverCertificate> lifted;
  if (o.lift) {
    lifted = lift_cover(c, tri, p, o.verify, witness);
    out.write("lifted_certificate.json", dump(to_json(*lifted)));
    summary["lifted"] = {{"members", lifted->members.size()},
                         {"covers_target", lifted->facts.covers_target},
                         {"volume_ratio", to_string(lifted->facts.total_volume / c.facts.total_volume)},
                         {"k_max_used", lifted->k_max_used}};
  }
  if (o.n == 2) {
    std::vector<std::pair<const std::vector<Simplex>*, std::string>> groups = {{&c.members, "steelblue"}};
    if (lifted) groups.push_back({&lifted->members, "darkorange"});
    out.write("cover.svg", simplex_svg(groups, tri,
                                       "i=" + std::to_string(p.i) + " members=" + std::to_string(c.members.size()) +
                                           (lifted ? " lifted=" + std::to_string(lifted->members.size()) : "")));
  }
  std::size_t failed = 0;
  for (const auto& l : audit) failed += !l.holds;
  summary["audit_failures"] = failed;
  finish(out, {"cover",
               {{"n", o.n}, {"t", o.t}, {"mode", o.mode}, {"i", o.i}, {"tries", o.tries}, {"witness", o.witness},
                {"lift", o.lift}, {"verify", o.verify}},
               o.seed,
               {},
               {}});
  return summary;
}

nlohmann::json cmd_fractal(const FractalOptions& o) {
  const Scene scene = load_scene(o.scene);
  const Rational t = scene_t(scene, o.t);
  const VoxelSet a = evaluate(scene);
  const Simplex tri = make_reference_simplex(a.dim());
  const FractalReport r =
      check_fractal_inequality(a, tri, t, o.i, o.k, o.cap == 0 ? kDefaultFamilyCap : o.cap, o.seed);
  OutputDir out(o.out);
  out.write("fractal.json", dump(to_json(r)));
  std::ostringstream csv;
  csv << "member,volume,measure_in_A,lower_bound,margin,violation,translate_excess,translate_bound,translate_violation\n";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    csv << k << ',' << to_string(row.member_volume) << ',' << to_string(row.measure_in_a) << ','
        << to_string(row.lower_bound) << ',' << to_string(row.margin) << ',' << row.violation << ','
        << to_string(row.translate_excess) << ',' << to_string(row.translate_bound) << ','
        << row.translate_violation << '\n';
  }
  out.write("fractal.csv", csv.str());
  finish(out, {"fractal",
               {{"scene", o.scene}, {"t", to_string(t)}, {"i", o.i}, {"k", o.k}, {"cap", o.cap}},
               o.seed,
               {hash_file(o.scene)},
               {}});
  return {{"command", "fractal"},
          {"scene", scene.name},
          {"family_size", r.family_size},
          {"sampled", r.sampled},
          {"violations", r.violations},
          {"translate_violations", r.translate_violations},
          {"delta", to_string(r.delta)},
          {"delta_At", to_string(r.delta_at)}};
}

nlohmann::json cmd_explore(const ExploreOptions& o) {
  if (o.etas.empty()) fail_input("--eta needs at least one value");
  std::vector<FrontierRow> rows;
  for (const auto& e : o.etas) {
    CoverSearchProblem p;
    p.m = o.m;
    p.eta0 = rational_arg("eta", e);
    p.q = o.q;
    p.budget = o.budget;
    p.lns_iterations = o.lns_iterations;
    CoverSolution best = local_improve(greedy_cover(p), p, o.seed);
    FrontierRow r{p.eta0, best, 1 / p.eta0, {}, false};
    r.below_inverse = best.ratio < r.inverse;
    for (const Rational& eps : {Rational(1, 10), Rational(1, 4), Rational(1, 2)})
      r.below_eps.push_back(best.ratio < r.inverse * (1 - eps));
    rows.push_back(std::move(r));
  }
  OutputDir out(o.out);
  out.write("frontier.csv", frontier_csv(rows));
  out.write("frontier.json", dump(to_json(rows)));
  nlohmann::json summary = {{"command", "explore"}, {"m", o.m}, {"rows", nlohmann::json::array()}};
  for (const auto& r : rows) {
    if (o.m == 2) {
      std::string tag = to_string(r.eta0);
      std::replace(tag.begin(), tag.end(), '/', '_');
      out.write("cover_eta_" + tag + ".svg", cover_svg(r.best));
    }
    summary["rows"].push_back({{"eta0", to_string(r.eta0)},
                               {"count", r.best.translates.size()},
                               {"ratio", to_string(r.best.ratio)},
                               {"verified", r.best.verified},
                               {"verification", r.best.verification}});
  }
  finish(out, {"explore",
               {{"m", o.m}, {"eta", o.etas}, {"budget", o.budget}, {"q", o.q}, {"lns_iterations", o.lns_iterations}},
               o.seed,
               {},
               {}});
  return summary;
}

nlohmann::json cmd_john(const JohnOptions& o) {
  const Scene scene = load_scene(o.scene);
  const Rational t = scene_t(scene, o.t);
  const Rational tau = o.tau.empty() ? t : rational_arg("tau", o.tau);
  const Rational b = rational_arg("b", o.b);
  const VoxelSet a = evaluate(scene);
  std::vector<FileRecord> inputs = {hash_file(o.scene)};
  Simplex p = make_reference_simplex(a.dim());
  if (!o.simplex.empty()) {
    std::ifstream in(o.simplex);
    if (!in) fail_input("cannot open simplex file '" + o.simplex + "'");
    try {
      p = simplex_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      fail_input(o.simplex + ": " + e.what());
    }
    inputs.push_back(hash_file(o.simplex));
  }
  const JohnReport r = john_point_check({p, a, t, tau, b});
  OutputDir out(o.out);
  out.write("john.json", dump({{"scene", scene.name}, {"P", to_json(p)}, {"report", to_json(r)}}));
  finish(out, {"john",
               {{"scene", o.scene}, {"simplex", o.simplex}, {"t", to_string(t)}, {"tau", to_string(tau)},
                {"b", to_string(b)}},
               0,
               inputs,
               {}});
  return {{"command", "john"},
          {"inclusion", r.inclusion},
          {"missing", to_string(r.missing)},
          {"smallest_b", to_string(r.smallest_b)}};
}

nlohmann::json cmd_example(const ExampleOptions& o) {
  ExampleScene s;
  VoxelSet a;
  Rational tol;
  if (o.name == "constant") {
    const Rational r = o.param.empty() ? Rational(2) : rational_arg("R", o.param);
    const Rational h = o.h.empty() ? (o.n == 2 ? Rational(1, 128) : Rational(1, 64)) : rational_arg("h", o.h);
    std::tie(s, a) = build_constant_example(o.n, r, h);
    tol = o.n == 2 ? Rational(2, 100) : Rational(4, 100);
  } else if (o.name == "exponent") {
    const Rational lambda = o.param.empty() ? Rational(1, 16) : rational_arg("lambda", o.param);
    const Rational h = o.h.empty() ? Rational(1, 256) : rational_arg("h", o.h);
    std::tie(s, a) = build_exponent_example(o.n, lambda, rational_arg("t", o.t), h);
    tol = Rational(5, 100);
  } else {
    fail_input("--name must be constant or exponent");
  }
  if (!o.rel_tol.empty()) tol = rational_arg("rel-tol", o.rel_tol);
  const SceneVerification v = verify_scene(s, a, tol);
  OutputDir out(o.out);
  const std::string file = s.name + "_n" + std::to_string(s.n) + ".json";
  out.write(file, dump(to_json(to_scene(s))));
  out.write("verification.json", dump(to_json(v)));
  finish(out, {"example",
               {{"name", o.name}, {"n", o.n}, {"param", to_string(s.param)}, {"t", to_string(s.t)},
                {"h", to_string(s.h)}, {"rel_tol", to_string(tol)}},
               0,
               {},
               {}});
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : v.checks)
    checks.push_back({{"quantity", c.quantity}, {"measured", to_double(c.measured)}, {"expected", to_string(c.expected)},
                      {"rel_error", c.rel_error}, {"strict", c.strict}});
  return {{"command", "example"}, {"scene_file", file}, {"strict", v.strict}, {"pass", v.pass}, {"checks", checks}};
}

nlohmann::json cmd_selftest(const SelftestOptions& o) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  nlohmann::json checks = nlohmann::json::array();
  bool all = true;
  auto add = [&](const std::string& name, bool pass, nlohmann::json detail, clock::time_point since) {
    all = all && pass;
    checks.push_back({{"name", name},
                      {"pass", pass},
                      {"detail", std::move(detail)},
                      {"seconds", std::chrono::duration<double>(clock::now() - since).count()}});
  };

  for (const auto& r : run_property_suites(o.seed)) {
    all = all && r.failures == 0;
    checks.push_back({{"name", r.name}, {"pass", r.failures == 0}, {"detail", to_json(r)}, {"seconds", r.seconds}});
  }

  {
    auto t0 = clock::now();
    auto [s, a] = build_constant_example(2, 2, o.quick ? Rational(1, 64) : Rational(1, 128));
    auto v = verify_scene(s, a, o.quick ? Rational(4, 100) : Rational(2, 100));
    add("constant example n=2", v.strict, to_json(v)["checks"], t0);
  }
  if (!o.quick) {
    auto t0 = clock::now();
    auto [s, a] = build_constant_example(3, 2, Rational(1, 64));
    auto v = verify_scene(s, a, Rational(4, 100));
    add("constant example n=3", v.strict, to_json(v)["checks"], t0);
  }
  {
    auto t0 = clock::now();
    auto [s, a] = build_exponent_example(2, Rational(1, 16), Rational(1, 4), Rational(1, 256));
    auto v = verify_scene(s, a, Rational(5, 100));
    auto slope = exponent_slope(2, {Rational(1, 8), Rational(1, 16), Rational(1, 32), Rational(1, 64)}, Rational(1, 4));
    add("exponent example", v.strict && std::abs(slope.slope - 1) <= 0.05,
        {{"checks", to_json(v)["checks"]}, {"slope", slope.slope}}, t0);
  }
  {
    auto t0 = clock::now();
    nlohmann::json lines = nlohmann::json::array();
    bool ok = true;
    for (std::size_t n = 2; n <= 10; ++n)
      for (const Rational& t : {Rational(1, 2), Rational(1, 3)}) {
        AuditLine l = constant_audit(n, t, t);
        ok = ok && l.holds;
        lines.push_back({{"n", n}, {"t", to_string(t)}, {"holds", l.holds}});
      }
    add("constant audit n=2..10", ok, lines, t0);
  }
  {
    auto t0 = clock::now();
    const Simplex tri = make_reference_simplex(2);
    const CoverParams p = compute_cover_params(2, Rational(1, 2), CoverMode::Desk, 5);
    const CoverCertificate c = rogers_cover(tri, p, 7);
    const CoverCertificate l = lift_cover(c, tri, p);
    const bool ok = c.facts.covers_target && l.facts.covers_target && l.facts.total_volume == 2 * c.facts.total_volume;
    add("desk cover and lift", ok, {{"members", c.members.size()}, {"lifted", l.members.size()}}, t0);
  }
  {
    auto t0 = clock::now();
    bool ok = true;
    for (const Rational& e : {Rational(1, 2), Rational(1, 3), Rational(2, 5), Rational(3, 10)}) {
      CoverSearchProblem p;
      p.m = 1;
      p.eta0 = e;
      ok = ok && local_improve(greedy_cover(p), p, o.seed).ratio == e * ceil(1 / e);
    }
    CoverSearchProblem p;
    p.lns_iterations = o.quick ? 40 : 200;
    CoverSolution s = local_improve(greedy_cover(p), p, o.seed);
    ok = ok && s.verified && s.verification == "exact" && s.ratio < 2;
    add("facet cover explorer", ok, {{"m2_ratio", to_string(s.ratio)}}, t0);
  }
  {
    // Two identical runs must produce byte-identical outputs.
    auto t0 = clock::now();
    const std::string base = (std::filesystem::path(o.out) / "determinism").string();
    ExploreOptions e;
    e.lns_iterations = 40;
    ExampleOptions x;
    x.h = "1/32";
    std::vector<std::string> hashes[2];
    for (int run = 0; run < 2; ++run) {
      e.out = base + "/run" + std::to_string(run) + "/explore";
      x.out = base + "/run" + std::to_string(run) + "/example";
      cmd_explore(e);
      cmd_example(x);
      for (const std::string& dir : {e.out, x.out})
        for (const char* f : {"frontier.csv", "frontier.json", "cover_eta_1_2.svg", "constant_lower_bound_n2.json",
                              "verification.json", "manifest.json"}) {
          const std::string path = dir + "/" + f;
          if (std::filesystem::exists(path)) hashes[run].push_back(hash_file(path).fnv1a64);
        }
    }
    add("determinism", hashes[0] == hashes[1] && !hashes[0].empty(), {{"files", hashes[0].size()}}, t0);
  }

  const double total = std::chrono::duration<double>(clock::now() - start).count();
  OutputDir out(o.out);
  out.write("selftest.json", dump({{"pass", all}, {"seconds", total}, {"checks", checks}}));
  finish(out, {"selftest", {{"quick", o.quick}}, o.seed, {}, {}});
  nlohmann::json summary = {{"command", "selftest"}, {"pass", all}, {"seconds", total}, {"checks", nlohmann::json::array()}};
  for (const auto& c : checks) summary["checks"].push_back({{"name", c["name"]}, {"pass", c["pass"]}});
  return summary;
}

}  // namespace bmlab::cli
