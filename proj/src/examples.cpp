#include "bmlab/examples.hpp"

#include <cmath>
#include <limits>

namespace bmlab {

namespace {

long cells_in(const Rational& length, const Rational& h, const char* what) {
  Rational k = length / h;
  if (k.get_den() != 1) fail_input(std::string("grid step must divide ") + what);
  return to_long(k.get_num());
}

}  // namespace

std::pair<ExampleScene, VoxelSet> build_exponent_example(std::size_t n, const Rational& lambda, const Rational& t,
                                                         const Rational& h) {
  if (n < 2) fail_input("exponent example needs n >= 2");
  if (lambda <= 0 || lambda > Rational(1, 8)) fail_input("exponent example needs 0 < lambda <= 1/8");
  if (t <= 0 || t > Rational(1, 2)) fail_input("exponent example needs t in (0, 1/2]");
  if (h <= 0) fail_input("grid step must be positive");
  ExampleScene s{"exponent_sharpness", n, lambda, t, h, {}};
  s.expected["hull_deficit"] = lambda / 2;
  s.expected["delta_At"] = t * lambda * (2 - 3 * t);
  return {s, realize(s)};
}

std::pair<ExampleScene, VoxelSet> build_constant_example(std::size_t n, const Rational& r, const Rational& h) {
  if (n < 2 || n > 4) fail_input("constant example needs n in {2, 3, 4}");
  if (r < 2) fail_input("constant example needs R >= 2");
  if (h <= 0) fail_input("grid step must be positive");
  ExampleScene s{"constant_lower_bound", n, r, Rational(1, 2), h, {}};
  s.expected["delta_At"] = 1;
  s.expected["hull_deficit"] = pow(Rational(2), n) / Rational(static_cast<long>(n));
  return {s, realize(s)};
}

VoxelSet realize(const ExampleScene& s) {
  const std::size_t n = s.n;
  const Rational& h = s.h;
  if (s.name == "exponent_sharpness") {
    const long lam = cells_in(s.param, h, "lambda");
    const long unit = cells_in(1, h, "1");
    std::vector<long> ext(n, unit);
    ext[0] = unit + lam;
    GridSpec g(RationalVector(n, Rational(0)), h, ext);
    RationalVector lo(n, Rational(0)), hi(n, Rational(1));
    lo[0] = s.param;
    hi[0] = 1 + s.param;
    VoxelSet a = rasterize_box(lo, hi, g);
    RationalVector plo(n, Rational(0)), phi(n, Rational(1));
    phi[0] = h;
    phi[1] = h;
    return set_union(a, rasterize_box(plo, phi, g));
  }
  if (s.name == "constant_lower_bound") {
    const long two = cells_in(2, h, "2");
    const long depth = cells_in(s.param, h, "R");
    std::vector<long> ext(n, two);
    ext[n - 1] = depth + two + 1;
    RationalVector origin(n, Rational(0));
    origin[n - 1] = -s.param;
    GridSpec g(origin, h, ext);
    RationalVector lo(n, Rational(0)), hi(n, Rational(2));
    lo[n - 1] = -s.param;
    hi[n - 1] = 0;
    VoxelSet a = rasterize_box(lo, hi, g);
    CellIndex apex(n, 0);
    apex[n - 1] = depth + two;
    a.set(apex);
    return a;
  }
  fail_input("unknown example scene '" + s.name + "'");
}

Scene to_scene(const ExampleScene& s) {
  const std::size_t n = s.n;
  const GridSpec g = realize(s).grid();
  auto box = [](const RationalVector& lo, const RationalVector& hi) {
    return nlohmann::json{{"op", "box"}, {"lo", to_json(lo)}, {"hi", to_json(hi)}};
  };
  Scene out;
  out.name = s.name;
  out.grid = g;
  out.t = s.t;
  out.expected = s.expected;
  if (s.name == "exponent_sharpness") {
    RationalVector lo(n, Rational(0)), hi(n, Rational(1)), plo(n, Rational(0)), phi(n, Rational(1));
    lo[0] = s.param;
    hi[0] = 1 + s.param;
    phi[0] = phi[1] = s.h;
    out.set = {{"op", "union"}, {"args", {box(lo, hi), box(plo, phi)}}};
  } else {
    RationalVector lo(n, Rational(0)), hi(n, Rational(2)), apex(n, Rational(0));
    lo[n - 1] = -s.param;
    hi[n - 1] = 0;
    apex[n - 1] = 2;
    out.set = {{"op", "union"}, {"args", {box(lo, hi), {{"op", "point"}, {"at", to_json(apex)}}}}};
  }
  return out;
}

nlohmann::json to_json(const ExampleScene& s) {
  nlohmann::json expected = nlohmann::json::object();
  for (const auto& [k, v] : s.expected) expected[k] = to_string(v);
  nlohmann::json params = {{"t", to_string(s.t)}};
  params[s.name == "exponent_sharpness" ? "lambda" : "R"] = to_string(s.param);
  return {{"kind", "example"}, {"name", s.name}, {"n", s.n}, {"params", params}, {"h", to_string(s.h)},
          {"expected", expected}};
}

ExampleScene scene_from_json(const nlohmann::json& j) {
  try {
    const std::string name = j.at("name").get<std::string>();
    const std::size_t n = j.at("n").get<std::size_t>();
    const auto& p = j.at("params");
    const Rational h = parse_rational(j.at("h").get<std::string>());
    if (name == "exponent_sharpness")
      return build_exponent_example(n, parse_rational(p.at("lambda").get<std::string>()),
                                    parse_rational(p.at("t").get<std::string>()), h)
          .first;
    if (name == "constant_lower_bound")
      return build_constant_example(n, parse_rational(p.at("R").get<std::string>()), h).first;
    fail_input("unknown example scene '" + name + "'");
  } catch (const nlohmann::json::exception& e) {
    fail_input(std::string("malformed example scene: ") + e.what());
  }
}

SceneVerification verify_expected(const std::map<std::string, Rational>& expected, const StabilityReport& report,
                                  const Rational& rel_tol) {
  SceneVerification v;
  v.report = report;
  v.pass = v.strict = true;
  for (const auto& [name, value] : expected) {
    QuantityCheck c;
    c.quantity = name;
    c.expected = value;
    if (name == "hull_deficit") {
      c.measured = v.report.hull_deficit;
      c.margin = v.report.margin_hull;
    } else if (name == "delta_At") {
      c.measured = v.report.delta_at;
      c.margin = v.report.margin_delta;
    } else {
      fail_input("unknown expected quantity '" + name + "'");
    }
    const Rational err = abs(c.measured - c.expected);
    c.rel_error = to_double(err / c.expected);
    c.strict = err <= rel_tol * c.expected;
    c.pass = err <= rel_tol * c.expected + c.margin;
    v.pass = v.pass && c.pass;
    v.strict = v.strict && c.strict;
    v.checks.push_back(c);
  }
  return v;
}

SceneVerification verify_scene(const ExampleScene& s, const VoxelSet& a, const Rational& rel_tol) {
  return verify_expected(s.expected, stability_report(a, s.t, s.t), rel_tol);
}

nlohmann::json to_json(const SceneVerification& v) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : v.checks)
    checks.push_back({{"quantity", c.quantity},
                      {"measured", to_string(c.measured)},
                      {"measured_approx", to_double(c.measured)},
                      {"expected", to_string(c.expected)},
                      {"margin", to_string(c.margin)},
                      {"rel_error", c.rel_error},
                      {"strict", c.strict},
                      {"pass", c.pass}});
  return {{"report", to_json(v.report)}, {"checks", checks}, {"pass", v.pass}, {"strict", v.strict}};
}

ConstantComparison compare_constants(std::size_t n) {
  const long nn = static_cast<long>(n);
  ConstantComparison c;
  c.implied_lower = pow(Rational(2), n - 1) / Rational(nn);
  c.implemented = Rational(pow(Integer(4 * nn), 5 * n));
  c.consistent = c.implied_lower <= c.implemented;
  return c;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail_input("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] <= 0 || y[k] <= 0) fail_domain("slope fit needs positive values");
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

SlopeReport exponent_slope(std::size_t n, const std::vector<Rational>& lambdas, const Rational& t,
                           long cells_per_lambda) {
  SlopeReport r;
  std::vector<double> xs, ys;
  for (const auto& lambda : lambdas) {
    const Rational h = lambda / Rational(cells_per_lambda);
    auto [scene, a] = build_exponent_example(n, lambda, t, h);
    StabilityReport rep = stability_report(a, t, t);
    r.points.push_back({lambda, h, rep.hull_deficit, rep.delta_at});
    xs.push_back(to_double(rep.delta_at));
    ys.push_back(to_double(rep.hull_deficit));
  }
  r.slope = loglog_slope(xs, ys);
  return r;
}

ConvergenceReport convergence_study(const ExampleScene& s, unsigned levels) {
  ConvergenceReport r;
  std::vector<double> hx, he, dx, de;
  ExampleScene cur = s;
  for (unsigned k = 0; k < levels; ++k) {
    VoxelSet a = realize(cur);
    StabilityReport rep = stability_report(a, cur.t, cur.t);
    const double eh = std::fabs(to_double(rep.hull_deficit - cur.expected.at("hull_deficit")));
    const double ed = std::fabs(to_double(rep.delta_at - cur.expected.at("delta_At")));
    r.hs.push_back(cur.h);
    r.hull_error.push_back(eh);
    r.delta_error.push_back(ed);
    if (eh > 0) {
      hx.push_back(to_double(cur.h));
      he.push_back(eh);
    }
    if (ed > 0) {
      dx.push_back(to_double(cur.h));
      de.push_back(ed);
    }
    cur.h /= 2;
  }
  const double inf = std::numeric_limits<double>::infinity();
  r.hull_rate = hx.size() >= 2 ? loglog_slope(hx, he) : inf;
  r.delta_rate = dx.size() >= 2 ? loglog_slope(dx, de) : inf;
  return r;
}

nlohmann::json to_json(const SlopeReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points)
    pts.push_back({{"lambda", to_string(p.lambda)},
                   {"h", to_string(p.h)},
                   {"hull_deficit", to_string(p.hull_deficit)},
                   {"delta_At", to_string(p.delta_at)}});
  return {{"points", pts}, {"slope", r.slope}};
}

nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json hs = nlohmann::json::array();
  for (const auto& h : r.hs) hs.push_back(to_string(h));
  auto rate = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json("exact"); };
  return {{"h", hs},
          {"hull_error", r.hull_error},
          {"delta_error", r.delta_error},
          {"hull_rate", rate(r.hull_rate)},
          {"delta_rate", rate(r.delta_rate)}};
}

}  // namespace bmlab
