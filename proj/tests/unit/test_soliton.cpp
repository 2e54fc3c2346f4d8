#include <cmath>

#include "doctest.h"
#include "dgeo/restricted.hpp"
#include "dgeo/soliton.hpp"
#include "maps.hpp"

using namespace dgeo;
using namespace testsupport;

namespace {

ChartPtr e3_chart() {
  auto c = std::make_shared<Chart>("E3", std::vector<std::string>{"x", "y", "z"});
  for (int i = 0; i < 3; ++i) c->set_box(i, -1.0, 1.0);
  return c;
}

// S^2 x R with the sphere factor in (th, ph).
ChartPtr sxr_chart() {
  auto c = std::make_shared<Chart>("SxR", std::vector<std::string>{"th", "ph", "t"});
  c->add_constraint({parse("sin(th)", c->scope()), Constraint::Kind::Positive, "sin(th) > 0"});
  c->set_box(0, 0.3, 2.8);
  c->set_box(1, 0.0, 6.0);
  return c;
}

}  // namespace

TEST_CASE("soliton residual: steady flat space") {
  auto c = e3_chart();
  SolitonConfig cfg{metric(c, {"1", "1", "1"}), VectorField::zero(c), std::nullopt, 1.0, 0.0};
  auto r = soliton_residual(cfg, {}, sample_points(*c, 10, 1));
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.max_residual == 0.0);
}

TEST_CASE("gaussian soliton: lambda = -c") {
  auto c = e3_chart();
  auto g = metric(c, {"1", "1", "1"});
  auto pts = sample_points(*c, 20, 2);
  for (double k : {0.25, 0.5, 1.0}) {
    Expr phi = Expr(k / 2) * parse("x^2+y^2+z^2", c->scope());
    SolitonConfig field{g, gradient(*g, phi), std::nullopt, 1.0, std::nullopt};
    auto fit = solve_lambda(field, {}, pts);
    CHECK(fit.lambda == doctest::Approx(-k).epsilon(1e-12));
    CHECK(fit.spread <= 1e-10);
    SolitonConfig grad{g, std::nullopt, phi, 1.0, std::nullopt};
    CHECK(solve_lambda(grad, {}, pts).lambda == doctest::Approx(-k).epsilon(1e-12));
    field.lambda = -k;
    CHECK(soliton_residual(field, {}, pts).max_residual <= 1e-12);
    field.lambda = -k + 0.1;
    CHECK(soliton_residual(field, {}, pts).max_residual == doctest::Approx(0.1).epsilon(1e-9));
  }
}

TEST_CASE("solve_lambda: flat and spherical Einstein cases") {
  auto c = e3_chart();
  SolitonConfig flat{metric(c, {"1", "1", "1"}), VectorField::zero(c), std::nullopt, 1.0, std::nullopt};
  auto f = solve_lambda(flat, {}, sample_points(*c, 10, 3));
  CHECK(std::abs(f.lambda) <= 1e-12);
  CHECK(f.spread <= 1e-12);

  auto s = sphere_chart();
  SolitonConfig sph{metric(s, {"1", "sin(th)^2"}), VectorField::zero(s), std::nullopt, 1.0, std::nullopt};
  auto fs = solve_lambda(sph, {}, sample_points(*s, 20, 4));
  CHECK(fs.lambda == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(fs.spread <= 1e-8);

  // A non-Einstein product has a large spread.
  auto p = sxr_chart();
  SolitonConfig prod{metric(p, {"1", "sin(th)^2", "1"}), VectorField::zero(p), std::nullopt, 1.0, std::nullopt};
  CHECK(solve_lambda(prod, {}, sample_points(*p, 10, 5)).spread >= 0.5);

  SolitonConfig bad{sph.metric, std::nullopt, std::nullopt, 1.0, 0.0};
  CHECK_THROWS_AS(validate(bad), GeometryError);
}

TEST_CASE("property: the Lie term is linear in the potential field") {
  auto c = e3_chart();
  auto g = metric(c, {"1", "1", "exp(2*x)"});
  VectorField xi = field(c, {"y*z", "sin(x)", "x^2"});
  auto pts = sample_points(*c, 10, 6);
  SolitonConfig one{g, xi, std::nullopt, 1.0, 0.0};
  SolitonConfig two{g, Expr(2.0) * xi, std::nullopt, 1.0, 0.0};
  for (const auto& p : pts) {
    Eigen::MatrixXd a = soliton_operator_at(one, p) - soliton_operator_at(SolitonConfig{g, VectorField::zero(c), std::nullopt, 1.0, 0.0}, p);
    Eigen::MatrixXd b = soliton_operator_at(two, p) - soliton_operator_at(SolitonConfig{g, VectorField::zero(c), std::nullopt, 1.0, 0.0}, p);
    CHECK((b - 2.0 * a).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("restricted geometry") {
  // the warped-source case fibres: e^{-2 x4}(dx1^2 + dx3^2) with x4 frozen is flat.
  auto m = wsrc_chart();
  auto g = wsrc(m);
  RestrictedGeometry fib(g, {0, 2});
  for (const auto& p : sample_points(*m, 5, 7)) {
    CHECK(fib.ricci_at(p).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(std::abs(fib.scalar_at(p)) <= 1e-14);
  }
  auto f = wsrc_frame(m);
  Point p0 = sample_points(*m, 1, 8)[0];
  CHECK(RestrictedGeometry::from_fields(g, {f[0], f[2]}, p0).coords() == std::vector<int>{0, 2});
  CHECK_THROWS_AS(RestrictedGeometry::from_fields(g, {f[0] + f[1]}, p0), UnsupportedConfiguration);
  CHECK_THROWS_AS(RestrictedGeometry::from_vectors(g, {Eigen::VectorXd::Ones(6)}), UnsupportedConfiguration);

  // Sphere factor of S^2 x R: Ric = g, s = 2.
  auto c = sxr_chart();
  auto gp = metric(c, {"1", "sin(th)^2", "1"});
  RestrictedGeometry sph(gp, {0, 1});
  for (const auto& p : sample_points(*c, 5, 9)) {
    Eigen::MatrixXd diff = sph.ricci_at(p) - sph.induced()->at(p);
    CHECK(diff.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sph.scalar_at(p) == doctest::Approx(2.0).epsilon(1e-12));
    Eigen::VectorXd v(3);
    v << 0.3, 0.4, 0.0;
    CHECK(sph.ricci(p, v, v) == doctest::Approx(0.09 + 0.16 * std::pow(std::sin(p.at(intern("th"))), 2)).epsilon(1e-12));
    v[2] = 1.0;
    CHECK_THROWS_AS(sph.ricci(p, v, v), GeometryError);
  }

  // Frozen parameters also reach the finite-difference route.
  Point p1 = sample_points(*m, 1, 10)[0];
  CHECK((fd_ricci(*fib.induced(), p1)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("einstein check") {
  auto c = sxr_chart();
  auto g = metric(c, {"1", "sin(th)^2", "1"});
  auto pts = sample_points(*c, 10, 11);
  auto flat = check_einstein(RestrictedGeometry(g, {2}), pts);
  CHECK(flat.verdict == Verdict::Pass);
  CHECK(std::abs(*flat.value("lambda")) <= 1e-14);
  auto sph = check_einstein(RestrictedGeometry(g, {0, 1}), pts);
  CHECK(sph.verdict == Verdict::Pass);
  CHECK(*sph.value("lambda") == doctest::Approx(-1.0).epsilon(1e-12));
  auto whole = check_einstein(RestrictedGeometry(g, {0, 1, 2}), pts);
  CHECK(whole.verdict == Verdict::Fail);
  CHECK(whole.max_residual >= 0.5);
}

TEST_CASE("conformal check") {
  auto c = e3_chart();
  auto g = metric(c, {"1", "1", "1"});
  auto pts = sample_points(*c, 10, 12);
  auto killing = check_conformal(*g, field(c, {"-y", "x", "0"}), {}, pts);
  CHECK(killing.verdict == Verdict::Pass);
  CHECK(std::abs(*killing.value("phi_max")) <= 1e-14);
  CHECK(std::abs(*killing.value("phi_min")) <= 1e-14);
  auto euler = check_conformal(*g, field(c, {"x", "y", "z"}), {}, pts);
  CHECK(euler.max_residual <= 1e-14);
  CHECK(*euler.value("phi_min") == doctest::Approx(2.0));
  CHECK(*euler.value("phi_max") == doctest::Approx(2.0));
  auto generic = check_conformal(*g, field(c, {"y^2", "0", "0"}), {}, pts);
  CHECK(generic.verdict == Verdict::Fail);
  CHECK(generic.max_residual >= 0.01);

  // Claim form with mu' = 2 lambda / r: the Euler field has 1/2 L g = g.
  auto claim = check_conformal(*g, field(c, {"x", "y", "z"}), {}, pts, 1e-8, ConformalClaim{-1.0, 2.0});
  CHECK(*claim.value("claim_residual") <= 1e-14);

  // Restricted span and negation.
  auto s = e3_chart();
  auto gw = metric(s, {"1", "exp(2*x)", "1"});
  VectorField x = field(s, {"y*z", "x", "sin(y)"});
  std::vector<VectorField> span = {VectorField::coordinate(s, 0), VectorField::coordinate(s, 1)};
  auto a = check_conformal(*gw, x, span, pts);
  auto b = check_conformal(*gw, -x, span, pts);
  CHECK(std::abs(*a.value("phi_first") + *b.value("phi_first")) <= 1e-12);
  CHECK(std::abs(*a.value("phi_max") + *b.value("phi_min")) <= 1e-12);
}

TEST_CASE("clairaut source condition") {
  auto a = wsrc_map();
  auto pts = sample_points(*a.m, 100, 13);
  for (const MapContext* ctx : {a.ctx.get(), a.numeric.get()}) {
    auto ok = check_clairaut_source(*ctx, parse("-x4", a.m->scope()), pts);
    CHECK(ok.verdict == Verdict::Pass);
    CHECK(ok.max_residual <= (ctx == a.ctx.get() ? 1e-10 : 1e-7));
    // Zero residual implies H = -grad f.
    CHECK(*ok.value("mean_curvature_gap") <= 1e-7);
    CHECK(*ok.value("umbilicity") <= 1e-7);
  }
  auto bad = check_clairaut_source(*a.ctx, parse("x5", a.m->scope()), pts);
  CHECK(bad.verdict == Verdict::Fail);
  CHECK(bad.max_residual == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

  // Totally geodesic fibres with a constant function.
  auto c = e3_chart();
  auto d = chart("E2", {"s", "t"});
  MapContext flat(metric(c, {"1", "1", "1"}), metric(d, {"1", "1"}), smooth_map(c, d, {"x", "y"}));
  CHECK(check_clairaut_source(flat, Expr(3.0), sample_points(*c, 5, 14)).max_residual <= 1e-12);

  auto id = smooth_map(d, d, {"s", "t"});
  auto gd = metric(d, {"1", "1"});
  MapContext ident(gd, gd, id);
  CHECK_THROWS_AS(check_clairaut_source(ident, Expr(0.0), sample_points(*d, 2, 1)), GeometryError);
}

TEST_CASE("clairaut target condition") {
  auto b = wtgt_map();
  auto pts = sample_points(*b.m, 30, 15);
  // eta = 0 forces the constructed g to vanish.
  auto ok = check_clairaut_target(*b.ctx, Expr(0.0), pts);
  CHECK(ok.verdict == Verdict::Pass);
  CHECK(ok.max_residual <= 1e-8);
  CHECK(check_clairaut_target(*b.numeric, Expr(0.0), pts).verdict == Verdict::Pass);
  auto bad = check_clairaut_target(*b.ctx, parse("y2", b.n->scope()), pts);
  CHECK(bad.verdict == Verdict::Fail);
  CHECK(bad.max_residual >= 0.5);

  // Round sphere of radius 2: umbilical with H' = -(1/2) n and g = |y| / 2.
  auto s = sphere_chart();
  auto e = chart("E3", {"a", "b", "c"});
  MapContext sph(metric(s, {"4", "4*sin(th)^2"}), metric(e, {"1", "1", "1"}),
                 smooth_map(s, e, {"2*sin(th)*cos(ph)", "2*sin(th)*sin(ph)", "2*cos(th)"}));
  auto ps = sample_points(*s, 20, 16);
  auto round = check_clairaut_target(sph, parse("sqrt(a^2+b^2+c^2)/2", e->scope()), ps);
  CHECK(round.verdict == Verdict::Pass);
  CHECK(round.max_residual <= 1e-10);
  auto off = check_clairaut_target(sph, parse("sqrt(a^2+b^2+c^2)", e->scope()), ps);
  CHECK(off.max_residual >= 0.4);

  auto c3 = e3_chart();
  MapContext id(metric(c3, {"1", "1", "1"}), metric(c3, {"1", "1", "1"}), smooth_map(c3, c3, {"x", "y", "z"}));
  CHECK(check_clairaut_target(id, Expr(1.0), sample_points(*c3, 5, 17)).max_residual == 0.0);
}

TEST_CASE("scalar relations") {
  // S^2 x R projected onto the line: fibres are unit spheres, s = 2.
  auto c = sxr_chart();
  auto line = chart("L", {"s"});
  MapContext ctx(metric(c, {"1", "sin(th)^2", "1"}), metric(line, {"1"}), smooth_map(c, line, {"t"}));
  auto pts = sample_points(*c, 10, 18);
  ScalarRelationInput in{ScalarRelation::Kernel, &ctx, -1.0, std::nullopt, {}};
  auto k = check_scalar_relation(in, pts);
  CHECK(k.verdict == Verdict::Pass);
  CHECK(*k.value("lhs") == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(*k.value("rhs") == doctest::Approx(2.0).epsilon(1e-12));
  in.lambda = 0.0;
  CHECK(check_scalar_relation(in, pts).verdict == Verdict::Fail);

  // One-dimensional range: scalar curvature 0.
  ScalarRelationInput rs{ScalarRelation::RangeSource, &ctx, 0.0, std::nullopt, {}};
  CHECK(check_scalar_relation(rs, pts).verdict == Verdict::Pass);

  // A failing hypothesis gate gives NOT-APPLICABLE.
  ScalarRelationInput gated{ScalarRelation::RangeTarget, &ctx, 3.0, std::nullopt, {{"lagrangian", false, 1.0, ""}}};
  CHECK(check_scalar_relation(gated, pts).verdict == Verdict::NotApplicable);

  // Normal bundle of the warped-target case: coordinates y1, y3, y4, y6 with y5 frozen
  // is flat; with g = 0 and lambda = 0 both sides vanish.
  auto b = wtgt_map();
  ScalarRelationInput nt{ScalarRelation::NormalTarget, b.ctx.get(), 0.0, Expr(0.0), {}};
  auto r = check_scalar_relation(nt, sample_points(*b.m, 5, 19));
  CHECK(r.verdict == Verdict::Pass);
}
