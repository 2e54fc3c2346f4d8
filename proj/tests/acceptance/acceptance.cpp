// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// Usage: dgeo_acceptance <path to the dgeo binary>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "dgeo/cli.hpp"

using namespace dgeo;
using namespace dgeo::cli;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

using Key = std::array<int, 3>;

// Compares every Γ^k_ij with the table (1-based keys, both index orders
// listed): symbolic difference must simplify to zero and the numeric gap
// stays within 1e-12 at 50 seeded points.
Outcome christoffel_table(const std::vector<std::string>& coords, const std::vector<std::string>& diag,
                          const std::map<Key, std::string>& table, double limit_s) {
  auto t0 = std::chrono::steady_clock::now();
  auto chart = std::make_shared<Chart>("C", coords);
  const int n = chart->dim();
  ExprMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = parse(diag[static_cast<std::size_t>(i)], chart->scope());
  Metric g(chart, m);
  const TensorField& gam = g.christoffel();
  auto pts = sample_points(*chart, 50, 1);
  int symbolic_bad = 0;
  double gap = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto it = table.find({k + 1, i + 1, j + 1});
        Expr want = it == table.end() ? Expr(0.0) : parse(it->second, chart->scope());
        const Expr& got = gam.at({k, i, j});
        if (!simplify(got - want).is_zero()) ++symbolic_bad;
        for (const auto& p : pts) gap = std::max(gap, std::abs(evaluate(got, p) - evaluate(want, p)));
      }
  double t = seconds_since(t0);
  bool ok = symbolic_bad == 0 && gap <= 1e-12 && t <= limit_s;
  return {ok, std::to_string(symbolic_bad) + " symbolic mismatches, max gap " + sci(gap) + ", " + sci(t) + " s"};
}

// ∇_{e_a} e_b against Σ c e_c from the table; unlisted pairs must vanish.
using Table = std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, std::string>>>;

double connection_table(const Config& cfg, const std::string& frame, const Table& table) {
  const FrameSpec& f = cfg.frames.at(frame);
  const Metric& g = *cfg.manifold(f.manifold).metric;
  auto pts = sample_points(g.chart(), 50, 1);
  double worst = 0.0;
  for (const auto& a : f.labels)
    for (const auto& b : f.labels) {
      VectorField d = covariant_derivative(g, f.frame[*f.index(a)], f.frame[*f.index(b)]);
      auto it = table.find({a, b});
      for (const auto& p : pts) {
        Eigen::VectorXd want = Eigen::VectorXd::Zero(g.dim());
        if (it != table.end())
          for (const auto& [c, label] : it->second) want += c * f.frame[*f.index(label)].eval(p);
        worst = std::max(worst, (d.eval(p) - want).cwiseAbs().maxCoeff());
      }
    }
  return worst;
}

CheckResult only(const Report& r) { return r.checks.at(0); }

Report run_one(const Config& cfg, const std::string& id, std::size_t points, double tol) {
  RunOptions opt;
  opt.suite = std::vector<std::string>{id};
  opt.points = points;
  opt.tol = tol;
  return run_suite(cfg, opt);
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  status = pclose(pipe);
  return out;
}

Outcome c1() {
  const std::string w = "exp(-2*x4)";
  return christoffel_table({"x1", "x2", "x3", "x4", "x5", "x6"}, {w, w, w, "1", "1", "1"},
                           {{{1, 1, 4}, "-1"}, {{1, 4, 1}, "-1"}, {{2, 2, 4}, "-1"}, {{2, 4, 2}, "-1"},
                            {{3, 3, 4}, "-1"}, {{3, 4, 3}, "-1"}, {{4, 1, 1}, w}, {{4, 2, 2}, w}, {{4, 3, 3}, w}},
                           1.0);
}

Outcome c2() {
  const std::string w = "exp(2*y5)";
  return christoffel_table({"y1", "y2", "y3", "y4", "y5", "y6"}, {"1", "1", w, "1", "1", w},
                           {{{3, 3, 5}, "1"}, {{3, 5, 3}, "1"}, {{6, 5, 6}, "1"}, {{6, 6, 5}, "1"},
                            {{5, 3, 3}, "-" + w}, {{5, 6, 6}, "-" + w}},
                           1.0);
}

Outcome c3() {
  Config a = catalog_config("paper-3.1");
  double r31 = connection_table(a, "EM", {{{"U1", "U1"}, {{1, "X2"}}},
                                          {{"U1", "X2"}, {{-1, "U1"}}},
                                          {{"X1", "X1"}, {{1, "X2"}}},
                                          {{"U2", "U2"}, {{1, "X2"}}},
                                          {{"X1", "X2"}, {{-1, "X1"}}},
                                          {{"U2", "X2"}, {{-1, "U2"}}}});
  Config b = catalog_config("paper-4.1");
  double r41 = connection_table(b, "EN", {{{"e3'", "e5'"}, {{1, "e3'"}}},
                                          {{"e6'", "e5'"}, {{1, "e6'"}}},
                                          {{"e3'", "e3'"}, {{-1, "e5'"}}},
                                          {{"e6'", "e6'"}, {{-1, "e5'"}}}});
  return {r31 <= 1e-10 && r41 <= 1e-10, "paper-3.1 max " + sci(r31) + ", paper-4.1 max " + sci(r41)};
}

Outcome c4() {
  Config a = catalog_config("paper-3.1");
  Config b = catalog_config("paper-4.1");
  double v[4] = {only(run_one(a, "riemannian_map", 100, 1e-10)).max_residual,
                 only(run_one(a, "anti_invariant", 100, 1e-10)).max_residual,
                 only(run_one(b, "riemannian_map", 100, 1e-10)).max_residual,
                 only(run_one(b, "anti_invariant_target", 100, 1e-10)).max_residual};
  bool ok = true;
  for (double x : v) ok = ok && x <= 1e-10;
  return {ok, "isometry " + sci(v[0]) + "/" + sci(v[2]) + ", anti-invariance " + sci(v[1]) + "/" + sci(v[3])};
}

Outcome c5() {
  Config a = catalog_config("paper-3.1");
  const auto& ctx = *a.map->ctx;
  auto pts = sample_points(*ctx.map().source(), 20, 1);
  const Chart& c = *ctx.map().source();
  double good = check_clairaut_source(ctx, parse("-x4", c.scope()), pts, 1e-10).max_residual;
  double bad = check_clairaut_source(ctx, parse("x5", c.scope()), pts, 1e-10).max_residual;
  return {good <= 1e-10 && bad >= 0.9, "f = -x4: " + sci(good) + ", f = x5: " + sci(bad)};
}

Outcome c6() {
  const CheckResult r = only(run_one(catalog_config("paper-4.1"), "clairaut_target", 20, 1e-8));
  return {r.verdict == Verdict::Pass && r.max_residual <= 1e-8, "residual " + sci(r.max_residual)};
}

Outcome c7() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int metrics = 0;
  bool all_ok = true;
  for (const auto& name : catalog_names()) {
    const CheckResult r = only(run_one(catalog_config(name), "ricci_oracle", 20, 1e-8));
    all_ok = all_ok && r.verdict == Verdict::Pass && r.tolerance == 1e-5;
    worst = std::max(worst, r.max_residual);
    metrics += static_cast<int>(catalog_config(name).manifolds.size());
  }
  Config s = catalog_config("sphere-2");
  const Metric& g = *s.primary().metric;
  Expr scal = scalar_curvature(g);
  double sphere = 0.0;
  for (const auto& p : sample_points(g.chart(), 20, 1)) {
    std::vector<double> ric = g.ricci().eval(p);
    Eigen::MatrixXd gm = g.at(p);
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) sphere = std::max(sphere, std::abs(ric[static_cast<std::size_t>(j * 2 + k)] - gm(j, k)));
    sphere = std::max(sphere, std::abs(evaluate(scal, p) - 2.0));
  }
  double t = seconds_since(t0);
  bool ok = all_ok && worst <= 1e-5 && sphere <= 1e-8 && t <= 30.0;
  return {ok, std::to_string(metrics) + " metrics, max relative " + sci(worst) + ", sphere " + sci(sphere) + ", " +
                  sci(t) + " s"};
}

Outcome c8() {
  const std::string text = catalog_text("gaussian-soliton");
  const std::string key = "const c = 0.5";
  bool ok = true;
  std::string detail;
  for (double c : {0.25, 0.5, 1.0}) {
    std::string t = text;
    std::ostringstream v;
    v << "const c = " << c;
    t.replace(t.find(key), key.size(), v.str());
    Config cfg = parse_spec(t, "gaussian");
    const SolitonSpec& s = cfg.solitons.at(0);
    LambdaFit fit = solve_lambda(s.config, {}, sample_points(*cfg.primary().chart, 20, 1));
    ok = ok && std::abs(fit.lambda + c) <= 1e-9 && fit.spread <= 1e-9;
    detail += (detail.empty() ? "" : ", ") + std::string("c=") + sci(c) + " lambda=" + sci(fit.lambda) +
              " spread=" + sci(fit.spread);
  }
  return {ok, detail};
}

Outcome c9() {
  Config cfg = catalog_config("revolution-surface");
  bool shape = cfg.geodesic && cfg.geodesic->t == 10.0 && cfg.geodesic->dt == 1e-3 && cfg.geodesic->monitor_clairaut;
  RunOptions opt;
  opt.suite = std::vector<std::string>{"geodesic_clairaut", "geodesic_energy"};
  Report r = run_suite(cfg, opt);
  double cl = r.checks[0].max_residual, en = r.checks[1].max_residual;
  bool ok = shape && r.checks[0].verdict == Verdict::Pass && cl <= 1e-6 && en <= 1e-8;
  return {ok, "Clairaut drift " + sci(cl) + ", energy drift " + sci(en)};
}

Outcome c10() {
  Config cfg = catalog_config("flat-lagrangian");
  RunOptions opt;
  opt.suite = std::vector<std::string>{"lag_ric_uv", "lag_ric_ux", "lag_ric_xy", "lag_ric_fxfy", "lag_ric_fxe",
                                       "lag_ric_de"};
  opt.tol = 1e-10;
  opt.points = 20;
  Report r = run_suite(cfg, opt);
  bool ok = true;
  double worst = 0.0;
  for (const auto& c : r.checks) {
    ok = ok && c.verdict == Verdict::Pass && c.max_residual <= 1e-10;
    worst = std::max(worst, c.max_residual);
  }
  return {ok, std::to_string(r.checks.size()) + " identities, max residual " + sci(worst)};
}

Outcome c11() {
  bool ok = true;
  std::string detail;
  for (const auto& name : catalog_names()) {
    Config cfg = catalog_config(name);
    if (!cfg.map) continue;
    const CheckResult r = only(run_one(cfg, "oneill", 100, 1e-8));
    ok = ok && r.verdict == Verdict::Pass && r.max_residual <= 1e-8;
    detail += (detail.empty() ? "" : ", ") + name + " " + sci(r.max_residual) + " " + verdict_name(r.verdict);
  }
  return {ok, detail};
}

Outcome c12() {
  Report r = run_suite(catalog_config("paper-3.1"), {});
  auto has = [&](const std::string& id, const std::string& value) {
    for (const auto& e : r.ledger)
      if (e.id == id)
        for (const auto& [k, v] : e.values)
          if (k == value && std::isfinite(v)) return true;
    return false;
  };
  bool kahler = has("kahler J", "residual");
  bool u11 = has("ricci(U1,U1)", "computed");
  bool u12 = has("ricci(U1,U2)", "computed");
  int status = exit_status(r);
  return {kahler && u11 && u12 && status == 0, std::to_string(r.ledger.size()) + " ledger entries, exit " +
                                                   std::to_string(status)};
}

Outcome c13(const std::string& binary) {
  if (binary.empty()) return {false, "no dgeo binary given"};
  const std::string cmd = "'" + binary + "' catalog run paper-3.1 --machine --seed 7";
  int s1 = 0, s2 = 0;
  std::string a = capture(cmd, s1), b = capture(cmd, s2);
  bool ok = s1 == 0 && s2 == 0 && !a.empty() && a == b;
  return {ok, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Christoffel table, first example", c1},
      {"Christoffel table, second example", c2},
      {"covariant-derivative tables", c3},
      {"Riemannian map and anti-invariance", c4},
      {"Clairaut source condition", c5},
      {"Clairaut target condition", c6},
      {"Ricci oracle equivalence", c7},
      {"Gaussian soliton lambda", c8},
      {"geodesic Clairaut invariant", c9},
      {"Lagrangian identities", c10},
      {"O'Neill structure properties", c11},
      {"discrepancy ledger", c12},
      {"determinism", [&] { return c13(binary); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %-36s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed ? 1 : 0;
}
