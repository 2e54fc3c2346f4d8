#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>

#include "dgeo/cli.hpp"

namespace dgeo::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::string>& base_checks() {
  static const std::vector<std::string> ids = {
      "riemannian_map", "anti_invariant", "anti_invariant_target", "hermitian", "hermitian_target",
      "kahler", "kahler_target", "clairaut_source", "clairaut_target", "umbilical", "oneill",
      "ricci_oracle", "einstein", "soliton", "solve_lambda", "geodesic_clairaut", "geodesic_energy",
      "vertical_ricci_decomposition", "j_invariance", "j_invariance_target"};
  return ids;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

class Session {
 public:
  Session(const Config& cfg, std::size_t n, std::uint64_t seed, double tol)
      : cfg_(cfg), n_(n), seed_(seed), tol_(tol) {}

  double tol_for(const std::string& id) const {
    if (auto it = cfg_.check_tol.find(id); it != cfg_.check_tol.end()) return it->second;
    if (id == "ricci_oracle") return 1e-5;
    if (id == "geodesic_clairaut") return 1e-6;
    return tol_;
  }

  CheckResult run(const std::string& id) {
    CheckResult r;
    try {
      r = dispatch(id);
    } catch (const std::exception& e) {
      r = CheckResult{};
      r.id = id;
      r.tolerance = tol_for(id);
      r.verdict = Verdict::Fail;
      r.max_residual = kInf;
      r.notes.push_back(std::string("error: ") + e.what());
    }
    r.id = id;
    return r;
  }

  void claims(std::vector<LedgerEntry>& ledger) {
    for (const auto& c : cfg_.claims) {
      try {
        switch (c.kind) {
          case Claim::Kind::Kahler:
            kahler_claim(c, ledger);
            break;
          case Claim::Kind::Ricci:
            ricci_claim(c, ledger);
            break;
          case Claim::Kind::Christoffel:
            christoffel_claim(c, ledger);
            break;
        }
      } catch (const std::exception& e) {
        ledger.push_back({"claim", c.text, std::string("could not be evaluated: ") + e.what(), {}});
      }
    }
  }

 private:
  const MapSpec& need_map() const {
    if (!cfg_.map) throw GeometryError("this check needs a [map] block");
    return *cfg_.map;
  }

  const StructureSpec& need(const StructureSpec* s, const char* what) const {
    if (!s) throw GeometryError(std::string("this check needs ") + what);
    return *s;
  }

  // Target points are images of the source samples so map checks line up.
  const std::vector<Point>& points_on(const std::string& manifold) {
    if (auto it = points_.find(manifold); it != points_.end()) return it->second;
    std::vector<Point> pts;
    if (cfg_.map && manifold == cfg_.map->target) {
      for (const auto& p : points_on(cfg_.map->source)) pts.push_back(cfg_.map->map->image(p));
    } else {
      pts = sample_points(*cfg_.manifold(manifold).chart, n_, seed_);
    }
    return points_.emplace(manifold, std::move(pts)).first->second;
  }

  PropositionRunner& runner() {
    if (!runner_) {
      PropositionCase c = cfg_.proposition_case();
      c.tol = tol_;
      c.gate_tol = tol_;
      runner_ = std::make_unique<PropositionRunner>(std::move(c), points_on(need_map().source));
    }
    return *runner_;
  }

  CheckResult dispatch(const std::string& id) {
    const double tol = tol_for(id);
    const auto& ids = identity_ids();
    if (std::find(ids.begin(), ids.end(), id) != ids.end() || is_theorem(id)) {
      CheckResult r = runner().run(id);
      if (cfg_.check_tol.count(id)) {
        r.tolerance = tol;
        finalize(r);
      }
      return r;
    }
    if (id == "riemannian_map") {
      const auto& m = need_map();
      return check_riemannian_map(*m.ctx, points_on(m.source), tol);
    }
    if (id == "anti_invariant") return anti_invariant(false, tol);
    if (id == "anti_invariant_target") return anti_invariant(true, tol);
    if (id == "hermitian" || id == "hermitian_target" || id == "kahler" || id == "kahler_target") {
      bool target = id.ends_with("_target");
      const auto& s = target ? need(cfg_.target_structure(), "a structure on the map target")
                             : need(cfg_.source_structure(), "a structure");
      const Metric& g = *cfg_.manifold(s.manifold).metric;
      return id.starts_with("kahler") ? check_kahler(g, s.j, points_on(s.manifold), tol)
                                      : check_hermitian(g, s.j, points_on(s.manifold), tol);
    }
    if (id == "clairaut_source") {
      const auto& m = need_map();
      return check_clairaut_source(*m.ctx, function("f", m.source), points_on(m.source), tol);
    }
    if (id == "clairaut_target") {
      const auto& m = need_map();
      return check_clairaut_target(*m.ctx, function("g", m.target), points_on(m.source), tol);
    }
    if (id == "umbilical") return umbilical(tol);
    if (id == "oneill") return oneill(tol);
    if (id == "ricci_oracle") return ricci_oracle(tol);
    if (id == "einstein") {
      const auto& m = cfg_.primary();
      std::vector<int> all(static_cast<std::size_t>(m.chart->dim()));
      for (int i = 0; i < m.chart->dim(); ++i) all[static_cast<std::size_t>(i)] = i;
      return check_einstein(RestrictedGeometry(m.metric, all), points_on(m.name), tol);
    }
    if (id == "soliton") return soliton(tol);
    if (id == "solve_lambda") return fit_lambda(tol);
    if (id == "geodesic_clairaut" || id == "geodesic_energy") return geodesic(id, tol);
    if (id == "vertical_ricci_decomposition") return retol(runner().vertical_ricci_decomposition(), id);
    if (id == "j_invariance") {
      if (!cfg_.map) return j_invariance_plain(tol);
      return retol(runner().j_invariance(false), id);
    }
    if (id == "j_invariance_target") return retol(runner().j_invariance(true), id);
    throw SpecError(cfg_.origin, 0, "", "unknown check '" + id + "'");
  }

  // Ric(JX, JY) - Ric(X, Y) over the residual basis, without a map.
  CheckResult j_invariance_plain(double tol) {
    const auto& s = need(cfg_.source_structure(), "a structure");
    const Metric& g = *cfg_.manifold(s.manifold).metric;
    const auto& pts = points_on(s.manifold);
    const int n = g.dim();
    CheckResult r;
    r.id = "j_invariance";
    r.tolerance = tol;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::vector<double> rv = g.ricci().eval(pts[i]);
      Eigen::MatrixXd ric = Eigen::Map<const Eigen::MatrixXd>(rv.data(), n, n).transpose();
      Eigen::MatrixXd jm = s.j.matrix_at(pts[i]);
      double worst = 0.0;
      for (const auto& a : residual_basis(g, s.j, pts[i]))
        for (const auto& b : residual_basis(g, s.j, pts[i]))
          worst = std::max(worst, std::abs((jm * a).dot(ric * (jm * b)) - a.dot(ric * b)));
      r.observe(worst, i, g.chart().coords_of(pts[i]));
    }
    r.terms.push_back({"Ric(JX,JY) - Ric(X,Y)", r.max_residual, true, ""});
    finalize(r);
    return r;
  }

  static bool is_theorem(const std::string& id) {
    const auto& t = theorem_ids();
    return std::find(t.begin(), t.end(), id) != t.end();
  }

  CheckResult retol(CheckResult r, const std::string& id) {
    if (cfg_.check_tol.count(id)) {
      r.tolerance = tol_for(id);
      finalize(r);
    }
    return r;
  }

  Expr function(const char* name, const std::string& manifold) const {
    auto it = cfg_.functions.find(name);
    if (it == cfg_.functions.end() || it->second.first != manifold)
      throw GeometryError(std::string("this check needs [function ") + name + " on " + manifold + "]");
    return it->second.second;
  }

  CheckResult anti_invariant(bool target, double tol) {
    const auto& m = need_map();
    const auto& s = target ? need(cfg_.target_structure(), "a structure on the map target")
                           : need(cfg_.source_structure(), "a structure on the map source");
    if (s.manifold != (target ? m.target : m.source))
      throw GeometryError("structure '" + s.name + "' does not live on the map " + (target ? "target" : "source"));
    const auto& src = points_on(m.source);
    std::vector<std::vector<Eigen::VectorXd>> sub(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
      FramesAt fr = compute_splittings(*m.ctx, src[i]);
      sub[i] = target ? fr.range : fr.vertical;
    }
    const Metric& g = *cfg_.manifold(s.manifold).metric;
    CheckResult r = check_anti_invariant(g, s.j, points_on(s.manifold), sub, tol);
    r.id = target ? "anti_invariant_target" : "anti_invariant";
    return r;
  }

  CheckResult umbilical(double tol) {
    const auto& m = need_map();
    auto it = cfg_.functions.find("g");
    if (it != cfg_.functions.end() && it->second.first == m.target) {
      VectorField grad = gradient(m.ctx->target_metric(), it->second.second);
      auto expected = [grad](const Point& q) { return (-grad.eval(q)).eval(); };
      return check_umbilical(*m.ctx, points_on(m.source), tol, expected);
    }
    return check_umbilical(*m.ctx, points_on(m.source), tol);
  }

  // Skew-symmetry of T and A, their reassembly of the Levi-Civita connection
  // and the duality g(S_D F*X, F*Y) = g(D, (∇F*)(X, Y)).
  CheckResult oneill(double tol) {
    const auto& m = need_map();
    const MapContext& ctx = *m.ctx;
    const Metric& gm = ctx.source_metric();
    const Metric& gn = ctx.target_metric();
    const DeclaredFrames& df = ctx.frames();
    CheckResult r;
    r.id = "oneill";
    r.tolerance = tol;

    enum Kind { VV, VH, HV, HH };
    struct Pair {
      Kind kind;
      VectorField a, b, nab;
    };
    std::vector<Pair> pairs;
    if (df.source) {
      auto add = [&](Kind k, const std::vector<VectorField>& as, const std::vector<VectorField>& bs) {
        for (const auto& a : as)
          for (const auto& b : bs) pairs.push_back({k, a, b, covariant_derivative(gm, a, b)});
      };
      add(VV, df.vertical, df.vertical);
      add(VH, df.vertical, df.horizontal);
      add(HV, df.horizontal, df.vertical);
      add(HH, df.horizontal, df.horizontal);
    }
    std::vector<AlongMap> normals;
    if (df.target) {
      for (const auto& d : df.normal) normals.push_back(ctx.map().compose(d));
    }

    const auto& pts = points_on(m.source);
    std::mt19937_64 rng(seed_ ^ 0x6f6e65696c6cULL);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto random_vec = [&](int n) {
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v(i) = unit(rng);
      return v;
    };

    double skew_t = 0.0, skew_a = 0.0, reassembly = 0.0, duality = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point& p = pts[i];
      const int n = gm.dim();
      DistributionAt d = ctx.vertical_at(p);
      double worst = 0.0;
      for (int trial = 0; trial < 3; ++trial) {
        Eigen::VectorXd e = random_vec(n), a = random_vec(n), b = random_vec(n);
        double st = std::abs(d.inner(d.T(e, a), b) + d.inner(a, d.T(e, b)));
        double sa = std::abs(d.inner(d.A(e, a), b) + d.inner(a, d.A(e, b)));
        skew_t = std::max(skew_t, st);
        skew_a = std::max(skew_a, sa);
        worst = std::max({worst, st, sa});
      }
      Eigen::MatrixXd P = d.P, Q = d.Q();
      for (const auto& pr : pairs) {
        Eigen::VectorXd a = pr.a.eval(p), b = pr.b.eval(p), full = pr.nab.eval(p);
        Eigen::VectorXd gap;
        switch (pr.kind) {
          case VV: gap = Q * full - d.T(a, b); break;
          case VH: gap = P * full - d.T(a, b); break;
          case HV: gap = Q * full - d.A(a, b); break;
          case HH: gap = P * full - d.A(a, b); break;
        }
        double v = d.norm(gap);
        reassembly = std::max(reassembly, v);
        worst = std::max(worst, v);
      }
      if (df.target && !normals.empty()) {
        FramesAt fr = compute_splittings(ctx, p);
        Eigen::MatrixXd h = gn.at(fr.q);
        Eigen::MatrixXd jac = ctx.map().jacobian_at(p);
        for (std::size_t k = 0; k < normals.size(); ++k) {
          Eigen::VectorXd dn = normals[k].eval(p);
          for (const auto& x : fr.horizontal) {
            Eigen::VectorXd s = shape_operator(ctx, fr, normals[k], x).s;
            for (const auto& y : fr.horizontal) {
              double lhs = s.dot(h * (jac * y));
              double rhs = dn.dot(h * ctx.second_fundamental_form_at(p, x, y));
              double v = std::abs(lhs - rhs);
              duality = std::max(duality, v);
              worst = std::max(worst, v);
            }
          }
        }
      }
      r.observe(worst, i, gm.chart().coords_of(p));
    }
    r.set_value("skew_T", skew_t);
    r.set_value("skew_A", skew_a);
    r.terms.push_back({"g(T_E F, G) + g(F, T_E G)", skew_t, true, ""});
    r.terms.push_back({"g(A_E F, G) + g(F, A_E G)", skew_a, true, ""});
    if (df.source) {
      r.set_value("reassembly", reassembly);
      r.terms.push_back({"nabla = T/A + projected nabla", reassembly, true, ""});
    } else {
      r.terms.push_back({"nabla = T/A + projected nabla", 0.0, false, "needs declared source frames"});
    }
    if (df.target) {
      r.set_value("shape_duality", duality);
      r.terms.push_back({"g(S_D F*X, F*Y) - g(D, (nablaF*)(X,Y))", duality, true, ""});
    } else {
      r.terms.push_back({"g(S_D F*X, F*Y) - g(D, (nablaF*)(X,Y))", 0.0, false, "needs declared target frames"});
    }
    finalize(r);
    return r;
  }

  // Symbolic Ricci against Ricci from differenced metric values, relative
  // to max(1, |Ric|).
  CheckResult ricci_oracle(double tol) {
    CheckResult r;
    r.id = "ricci_oracle";
    r.tolerance = tol;
    std::size_t offset = 0;
    for (const auto& name : cfg_.manifold_order) {
      const auto& m = cfg_.manifold(name);
      const Metric& g = *m.metric;
      const auto& pts = points_on(name);
      if (!g.has_symbolic_inverse()) {
        r.terms.push_back({"Ric on " + name, 0.0, false, "no symbolic inverse"});
        offset += pts.size();
        continue;
      }
      const TensorField& ric = g.ricci();
      const int n = g.dim();
      std::vector<double> rel(pts.size(), 0.0);
      parallel_for(pts.size(), [&](std::size_t i) {
        std::vector<double> s = ric.eval(pts[i]);
        Eigen::MatrixXd fd = fd_ricci(g, pts[i]);
        double scale = 1.0, diff = 0.0;
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            double v = s[static_cast<std::size_t>(j * n + k)];
            scale = std::max(scale, std::abs(v));
            diff = std::max(diff, std::abs(v - fd(j, k)));
          }
        }
        rel[i] = diff / scale;
      });
      double worst = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        worst = std::max(worst, rel[i]);
        r.observe(rel[i], offset + i, m.chart->coords_of(pts[i]));
      }
      r.set_value("max_rel_" + name, worst);
      r.terms.push_back({"Ric on " + name, worst, true, ""});
      offset += pts.size();
    }
    finalize(r);
    return r;
  }

  const SolitonSpec& soliton_spec() const {
    if (const auto* s = cfg_.soliton_on(cfg_.primary().name)) return *s;
    if (cfg_.solitons.empty()) throw GeometryError("this check needs a [soliton] block");
    return cfg_.solitons.front();
  }

  CheckResult soliton(double tol) {
    const auto& s = soliton_spec();
    SolitonConfig c = s.config;
    const auto& pts = points_on(s.manifold);
    double fitted = 0.0;
    bool solved = !c.lambda;
    if (solved) {
      fitted = solve_lambda(c, {}, pts).lambda;
      c.lambda = fitted;
    }
    CheckResult r = soliton_residual(c, {}, pts, tol);
    r.id = "soliton";
    r.set_value("lambda", *c.lambda);
    if (solved) r.notes.push_back("lambda solved by least squares");
    return r;
  }

  CheckResult fit_lambda(double tol) {
    const auto& s = soliton_spec();
    const auto& pts = points_on(s.manifold);
    LambdaFit fit = solve_lambda(s.config, {}, pts);
    CheckResult r;
    r.id = "solve_lambda";
    r.tolerance = tol;
    r.max_residual = std::max(fit.spread, fit.residual);
    r.set_value("lambda", fit.lambda);
    r.set_value("spread", fit.spread);
    r.set_value("fit_residual", fit.residual);
    r.set_value("samples", static_cast<double>(fit.samples));
    if (s.config.lambda) {
      double gap = std::abs(fit.lambda - *s.config.lambda);
      r.set_value("stated_lambda", *s.config.lambda);
      r.max_residual = std::max(r.max_residual, gap);
    }
    r.terms.push_back({"lambda spread", fit.spread, true, ""});
    r.terms.push_back({"K + lambda g", fit.residual, true, ""});
    finalize(r);
    return r;
  }

  CheckResult geodesic(const std::string& id, double tol) {
    if (!cfg_.geodesic) throw GeometryError("this check needs a [geodesic] block");
    const auto& gs = *cfg_.geodesic;
    const auto& m = cfg_.manifold(gs.manifold);
    if (!geo_) {
      GeodesicOptions opts;
      if (gs.monitor_clairaut) opts.clairaut_coord = -1;
      geo_ = geodesic_integrate(*m.metric, m.chart->point(gs.from), as_vector(gs.dir), gs.t, gs.dt, opts);
    }
    CheckResult r;
    r.id = id;
    r.tolerance = tol;
    r.set_value("steps", static_cast<double>(geo_->trajectory.size()));
    r.set_value("halvings", static_cast<double>(geo_->halvings));
    if (id == "geodesic_energy") {
      r.max_residual = geo_->max_energy_drift;
      r.terms.push_back({"g(x',x') - E0", geo_->max_energy_drift, true, ""});
    } else if (!gs.monitor_clairaut || !geo_->clairaut_coord) {
      r.terms.push_back({"Clairaut drift", 0.0, false, "no monitored coordinate"});
    } else {
      r.max_residual = geo_->max_clairaut_drift;
      r.set_value("coordinate", static_cast<double>(*geo_->clairaut_coord));
      r.terms.push_back({"Clairaut drift", geo_->max_clairaut_drift, true, ""});
    }
    finalize(r);
    return r;
  }

  const std::vector<Point>& structure_points(const StructureSpec& s) { return points_on(s.manifold); }

  void kahler_claim(const Claim& c, std::vector<LedgerEntry>& ledger) {
    const StructureSpec* s = nullptr;
    for (const auto& st : cfg_.structures)
      if (st.name == c.target) s = &st;
    const Metric& g = *cfg_.manifold(s->manifold).metric;
    CheckResult r = check_kahler(g, s->j, structure_points(*s), tol_);
    if (r.verdict == Verdict::Pass) return;
    LedgerEntry e{"claim", "kahler " + c.target,
                  "stated Kaehler, but nabla " + c.target + " does not vanish (" + verdict_name(r.verdict) + ")",
                  {{"residual", r.max_residual}}};
    if (auto v = r.value("max_entry")) e.values.push_back({"max_entry", *v});
    ledger.push_back(std::move(e));
  }

  void ricci_claim(const Claim& c, std::vector<LedgerEntry>& ledger) {
    const FrameSpec& f = cfg_.frames.at(c.target);
    const auto& m = cfg_.manifold(f.manifold);
    const VectorField& a = f.frame[*f.index(c.args[0])];
    const VectorField& b = f.frame[*f.index(c.args[1])];
    const TensorField& ric = m.metric->ricci();
    const int n = m.metric->dim();
    const auto& pts = points_on(f.manifold);
    double worst = -1.0, claimed = 0.0, computed = 0.0;
    for (const auto& p : pts) {
      std::vector<double> rv = ric.eval(p);
      Eigen::MatrixXd rm = Eigen::Map<const Eigen::MatrixXd>(rv.data(), n, n).transpose();
      double val = a.eval(p).dot(rm * b.eval(p));
      double want = evaluate(*c.value, p);
      double gap = std::abs(val - want);
      if (gap > worst) {
        worst = gap;
        claimed = want;
        computed = val;
      }
    }
    if (worst <= tol_) return;
    std::string id = "ricci(" + c.args[0] + "," + c.args[1] + ")";
    ledger.push_back({"claim", id, "stated " + fmt(claimed) + ", computed " + fmt(computed),
                      {{"claimed", claimed}, {"computed", computed}, {"difference", computed - claimed}}});
  }

  void christoffel_claim(const Claim& c, std::vector<LedgerEntry>& ledger) {
    const auto& m = cfg_.manifold(c.target);
    int k = std::stoi(c.args[0]) - 1, i = std::stoi(c.args[1]) - 1, j = std::stoi(c.args[2]) - 1;
    const Expr& gamma = m.metric->christoffel().at({k, i, j});
    double worst = -1.0, claimed = 0.0, computed = 0.0;
    for (const auto& p : points_on(c.target)) {
      double val = evaluate(gamma, p), want = evaluate(*c.value, p);
      if (std::abs(val - want) > worst) {
        worst = std::abs(val - want);
        claimed = want;
        computed = val;
      }
    }
    if (worst <= tol_) return;
    std::string id = "christoffel(" + c.args[0] + "," + c.args[1] + "," + c.args[2] + ")";
    ledger.push_back({"claim", id, "stated " + fmt(claimed) + ", computed " + fmt(computed),
                      {{"claimed", claimed}, {"computed", computed}, {"difference", computed - claimed}}});
  }

  const Config& cfg_;
  std::size_t n_;
  std::uint64_t seed_;
  double tol_;
  std::map<std::string, std::vector<Point>> points_;
  std::unique_ptr<PropositionRunner> runner_;
  std::optional<GeodesicResult> geo_;
};

LedgerEntry audit_entry(const CheckResult& r) {
  LedgerEntry e;
  e.kind = "audit";
  e.id = r.id;
  std::string d = verdict_name(r.verdict);
  std::vector<std::string> failed;
  for (const auto& g : r.gates)
    if (!g.holds) failed.push_back(g.name);
  if (!failed.empty()) {
    d += "; gates failing:";
    for (const auto& g : failed) d += " " + g;
  }
  for (const auto& n : r.notes)
    if (n.starts_with("error:")) d += "; " + n;
  e.detail = d;
  e.values.push_back({"max_residual", r.max_residual});
  if (auto v = r.value("lhs")) e.values.push_back({"lhs", *v});
  if (auto v = r.value("rhs")) e.values.push_back({"rhs", *v});
  return e;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> v = base_checks();
    for (const auto& id : identity_ids()) v.push_back(id);
    for (const auto& id : theorem_ids()) v.push_back(id);
    return v;
  }();
  return all;
}

std::uint64_t effective_seed(const Config& cfg, const RunOptions& opt) {
  if (opt.seed) return *opt.seed;
  if (const char* env = std::getenv("DGEO_SEED"); env && *env) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw SpecError("DGEO_SEED", 0, "", "not an unsigned integer: '" + std::string(env) + "'");
  }
  return cfg.seed;
}

Report run_suite(const Config& cfg, const RunOptions& opt) {
  const auto& known = known_checks();
  std::vector<std::string> suite = opt.suite ? *opt.suite : cfg.suite;
  for (const auto& id : suite) {
    if (std::find(known.begin(), known.end(), id) == known.end())
      throw SpecError(cfg.origin, 0, "", "unknown check '" + id + "'");
  }
  Report rep;
  rep.spec = cfg.name;
  rep.seed = effective_seed(cfg, opt);
  rep.points = opt.points ? *opt.points : cfg.points;
  if (rep.points == 0) throw SpecError(cfg.origin, 0, "", "points must be positive");
  rep.tolerance = opt.tol ? *opt.tol : cfg.tol;
  rep.convention = kCurvatureConvention;

  Session s(cfg, rep.points, rep.seed, rep.tolerance);
  for (const auto& id : suite) rep.checks.push_back(s.run(id));
  if (!opt.suite) {
    for (const auto& id : cfg.audit) {
      CheckResult r = s.run(id);
      if (r.verdict != Verdict::Pass) rep.ledger.push_back(audit_entry(r));
      rep.audit.push_back(std::move(r));
    }
  }
  std::vector<LedgerEntry> claims;
  s.claims(claims);
  rep.ledger.insert(rep.ledger.begin(), claims.begin(), claims.end());
  return rep;
}

int exit_status(const Report& r) {
  for (const auto& c : r.checks)
    if (c.verdict == Verdict::Fail) return 1;
  return 0;
}

}  // namespace dgeo::cli
