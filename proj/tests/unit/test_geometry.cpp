#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles/ricci_oracle.hpp"
#include "support.hpp"

using namespace dgeo;
using namespace testsupport;

namespace {

ChartPtr s3_chart() {
  auto c = std::make_shared<Chart>("S3", std::vector<std::string>{"ch", "th", "ph"});
  c->add_constraint({parse("sin(ch)", c->scope()), Constraint::Kind::Positive, ""});
  c->add_constraint({parse("sin(th)", c->scope()), Constraint::Kind::Positive, ""});
  c->set_box(0, 0.3, 2.8);
  c->set_box(1, 0.3, 2.8);
  return c;
}

Eigen::MatrixXd eval_ricci(const Metric& g, const Point& p) {
  auto v = g.ricci().eval(p);
  return Eigen::Map<Eigen::MatrixXd>(v.data(), g.dim(), g.dim()).transpose();
}

oracle::MetricFn metric_fn(const Metric& g) {
  return [&g](const Eigen::VectorXd& x) {
    std::vector<double> xs(x.data(), x.data() + x.size());
    return g.matrix().eval(g.chart().point(xs));
  };
}

// Metrics used for the property and oracle sweeps.
std::vector<std::shared_ptr<Metric>> sweep_metrics() {
  std::vector<std::shared_ptr<Metric>> out;
  out.push_back(metric(chart("E3", {"x", "y", "z"}), {"1", "1", "1"}));
  out.push_back(metric(sphere_chart(), {"1", "sin(th)^2"}));
  out.push_back(metric(chart("H2", {"x", "t"}), {"exp(-2*t)", "1"}));
  out.push_back(wsrc(wsrc_chart()));
  out.push_back(wtgt(wtgt_chart()));
  out.push_back(metric(s3_chart(), {"1", "sin(ch)^2", "sin(ch)^2*sin(th)^2"}));
  out.push_back(metric(chart("G", {"x", "y"}), {"1 + x^2", "2*x*y", "2*x*y", "1 + 4*y^2"}));
  out.push_back(metric(chart("W", {"u", "v", "w"}), {"1 + u^2", "u*v", "0", "u*v", "2 + v^2", "w", "0", "w", "3"}));
  return out;
}

VectorField random_poly_field(const ChartPtr& c, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Expr> comps;
  for (int i = 0; i < c->dim(); ++i) {
    Expr e(u(rng));
    for (int j = 0; j < c->dim(); ++j) e += Expr(u(rng)) * c->var(j) * c->var((i + j) % c->dim());
    comps.push_back(e);
  }
  return VectorField(c, comps);
}

}  // namespace

TEST_CASE("christoffel: euclidean vanishes") {
  auto g = metric(chart("E3", {"x", "y", "z"}), {"1", "1", "1"});
  const auto& gam = christoffel(*g);
  for (std::size_t k = 0; k < gam.size(); ++k) CHECK(gam.flat(k).is_zero());
}

TEST_CASE("christoffel: the warped-source case table") {
  auto c = wsrc_chart();
  auto g = wsrc(c);
  const auto& gam = christoffel(*g);
  Expr w = parse("exp(-2*x4)", c->scope());
  auto idx = [](int k, int i, int j) { return std::array<int, 3>{k - 1, i - 1, j - 1}; };
  std::map<std::array<int, 3>, Expr> expected = {
      {idx(1, 1, 4), Expr(-1.0)}, {idx(1, 4, 1), Expr(-1.0)}, {idx(2, 2, 4), Expr(-1.0)},
      {idx(2, 4, 2), Expr(-1.0)}, {idx(3, 3, 4), Expr(-1.0)}, {idx(3, 4, 3), Expr(-1.0)},
      {idx(4, 1, 1), w},          {idx(4, 2, 2), w},          {idx(4, 3, 3), w}};
  for (int k = 0; k < 6; ++k)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const Expr& e = gam.at({k, i, j});
        auto it = expected.find({k, i, j});
        if (it == expected.end()) {
          CHECK(e.is_zero());
        } else {
          CHECK_MESSAGE(same_tree(e, it->second), e.str());
        }
      }
}

TEST_CASE("christoffel: the warped-target case table") {
  auto c = wtgt_chart();
  auto g = wtgt(c);
  const auto& gam = christoffel(*g);
  Expr w = parse("-exp(2*y5)", c->scope());
  int nonzero = 0;
  for (std::size_t k = 0; k < gam.size(); ++k) nonzero += !gam.flat(k).is_zero();
  CHECK(nonzero == 6);
  CHECK(gam.at({2, 2, 4}).is_one());
  CHECK(gam.at({2, 4, 2}).is_one());
  CHECK(gam.at({5, 4, 5}).is_one());
  CHECK(same_tree(gam.at({4, 2, 2}), simplify(w)));
  CHECK(same_tree(gam.at({4, 5, 5}), simplify(w)));
}

TEST_CASE("covariant derivative examples") {
  auto c = wsrc_chart();
  auto g = wsrc(c);
  auto U1 = field(c, {"exp(x4)", "0", "0", "0", "0", "0"});
  auto d = covariant_derivative(*g, U1, U1);
  CHECK(d[3].is_one());
  for (int i : {0, 1, 2, 4, 5}) CHECK(d[i].is_zero());

  auto flat = chart("E2", {"a", "b"});
  auto ge = metric(flat, {"1", "1"});
  auto d2 = covariant_derivative(*ge, VectorField::coordinate(flat, 0), VectorField::coordinate(flat, 1));
  CHECK(d2[0].is_zero());
  CHECK(d2[1].is_zero());

  auto n = wtgt_chart();
  auto gn = wtgt(n);
  auto e3 = field(n, {"0", "0", "exp(-y5)", "0", "0", "0"});
  auto d3 = covariant_derivative(*gn, e3, e3);
  CHECK(evaluate(d3[4], point(n, {0.2, 0.3, 0.4, 0.5, 0.6, 0.7})) == doctest::Approx(-1.0));
  for (int i : {0, 1, 2, 3, 5}) CHECK(d3[i].is_zero());
}

TEST_CASE("riemann: euclidean zero, sphere +1, hyperbolic -1") {
  auto e = metric(chart("E3", {"x", "y", "z"}), {"1", "1", "1"});
  for (std::size_t k = 0; k < riemann(*e).size(); ++k) CHECK(riemann(*e).flat(k).is_zero());

  auto sc = sphere_chart();
  auto s = metric(sc, {"1", "sin(th)^2"});
  auto e1 = field(sc, {"1", "0"});
  auto e2 = field(sc, {"0", "1/sin(th)"});
  Expr k = s->inner(riemann_apply(*s, e1, e2, e2), e1);
  for (const auto& p : sample_points(*sc, 20, 3)) CHECK(evaluate(k, p) == doctest::Approx(1.0).epsilon(1e-12));

  auto hc = chart("H2", {"x", "t"});
  auto h = metric(hc, {"exp(-2*t)", "1"});
  auto f1 = field(hc, {"exp(t)", "0"});
  auto f2 = field(hc, {"0", "1"});
  Expr kh = h->inner(riemann_apply(*h, f1, f2, f2), f1);
  for (const auto& p : sample_points(*hc, 20, 4)) CHECK(evaluate(kh, p) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("ricci and scalar curvature on constant-curvature spaces") {
  auto sc = sphere_chart();
  auto s = metric(sc, {"1", "sin(th)^2"});
  for (const auto& p : sample_points(*sc, 20, 5)) {
    Eigen::MatrixXd r = eval_ricci(*s, p);
    CHECK((r - s->at(p)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(evaluate(scalar_curvature(*s), p) == doctest::Approx(2.0).epsilon(1e-12));
  }
  auto c3 = s3_chart();
  auto s3 = metric(c3, {"1", "sin(ch)^2", "sin(ch)^2*sin(th)^2"});
  Expr sc3 = scalar_curvature(*s3);
  for (const auto& p : sample_points(*c3, 10, 6)) {
    CHECK(evaluate(sc3, p) == doctest::Approx(6.0).epsilon(1e-10));
    CHECK((eval_ricci(*s3, p) - 2 * s3->at(p)).cwiseAbs().maxCoeff() <= 1e-8);
  }
  auto e = metric(chart("E3", {"x", "y", "z"}), {"1", "1", "1"});
  CHECK(scalar_curvature(*e).is_zero());
}

TEST_CASE("ricci on the warped-source case frame, with the oracle") {
  auto c = wsrc_chart();
  auto g = wsrc(c);
  std::vector<VectorField> e = {
      field(c, {"exp(x4)", "0", "0", "0", "0", "0"}), field(c, {"0", "exp(x4)", "0", "0", "0", "0"}),
      field(c, {"0", "0", "exp(x4)", "0", "0", "0"}), field(c, {"0", "0", "0", "1", "0", "0"}),
      field(c, {"0", "0", "0", "0", "1", "0"}),       field(c, {"0", "0", "0", "0", "0", "1"})};
  // U1 = e1, U2 = e3, X1 = e2, X2 = e4: the x1..x4 block is hyperbolic.
  Point p = point(c, {0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
  CHECK(evaluate(ricci_apply(*g, e[0], e[0]), p) == doctest::Approx(-3.0));
  CHECK(evaluate(ricci_apply(*g, e[2], e[2]), p) == doctest::Approx(-3.0));
  CHECK(evaluate(ricci_apply(*g, e[0], e[2]), p) == doctest::Approx(0.0));
  CHECK(evaluate(ricci_apply(*g, e[1], e[1]), p) == doctest::Approx(-3.0));
  CHECK(evaluate(ricci_apply(*g, e[3], e[3]), p) == doctest::Approx(-3.0));
  CHECK(evaluate(ricci_apply(*g, e[4], e[4]), p) == doctest::Approx(0.0));
  Eigen::MatrixXd orc = oracle::ricci(metric_fn(*g), c->coords_of(p));
  CHECK((orc - eval_ricci(*g, p)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("gradient examples") {
  auto e = chart("E2", {"x1", "x2"});
  auto ge = metric(e, {"1", "1"});
  auto g1 = gradient(*ge, parse("x1", e->scope()));
  CHECK(g1[0].is_one());
  CHECK(g1[1].is_zero());
  auto gc = gradient(*ge, Expr(4.0));
  CHECK(gc[0].is_zero());
  CHECK(gc[1].is_zero());

  auto n = wtgt_chart();
  auto gn = wtgt(n);
  auto gy = gradient(*gn, parse("y3", n->scope()));
  CHECK(same_tree(gy[2], parse("exp(-2*y5)", n->scope())));
}

TEST_CASE("hessian examples") {
  auto e = chart("E3", {"x1", "x2", "x3"});
  auto ge = metric(e, {"1", "1", "1"});
  auto h = hessian(*ge, parse("(x1^2 + x2^2)/2", e->scope()));
  CHECK(h.at({0, 0}).is_one());
  CHECK(h.at({1, 1}).is_one());
  CHECK(h.at({2, 2}).is_zero());
  CHECK(h.at({0, 1}).is_zero());
  auto hl = hessian(*ge, parse("3*x1 - x2 + 2", e->scope()));
  for (std::size_t k = 0; k < hl.size(); ++k) CHECK(hl.flat(k).is_zero());

  auto sc = sphere_chart();
  auto s = metric(sc, {"1", "sin(th)^2"});
  Expr f = parse("cos(th)", sc->scope());
  auto hs = hessian(*s, f);
  for (const auto& p : sample_points(*sc, 20, 8)) {
    double cf = evaluate(f, p);
    Eigen::MatrixXd gm = s->at(p);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(evaluate(hs.at({i, j}), p) == doctest::Approx(-cf * gm(i, j)).epsilon(1e-12));
  }
  // Frame form agrees with the component form.
  auto x = field(sc, {"1", "0.5"});
  auto y = field(sc, {"cos(ph)", "1"});
  Expr ha = hessian_apply(*s, f, x, y);
  for (const auto& p : sample_points(*sc, 10, 9)) {
    double comp = 0;
    Eigen::VectorXd xv = x.eval(p), yv = y.eval(p);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) comp += evaluate(hs.at({i, j}), p) * xv[i] * yv[j];
    CHECK(evaluate(ha, p) == doctest::Approx(comp).epsilon(1e-10));
  }
}

TEST_CASE("divergence examples") {
  auto e = chart("E2", {"x1", "x2"});
  auto ge = metric(e, {"1", "1"});
  CHECK(divergence(*ge, field(e, {"x1", "0"})).is_one());
  CHECK(divergence(*ge, field(e, {"3", "-1"})).is_zero());
  auto c = wsrc_chart();
  auto g = wsrc(c);
  Expr d = divergence(*g, VectorField::coordinate(c, 3));
  CHECK(d.is_constant());
  CHECK(d.value() == doctest::Approx(-3.0));
}

TEST_CASE("lie derivative of the metric") {
  auto e = chart("E2", {"x1", "x2"});
  auto ge = metric(e, {"1", "1"});
  auto rot = lie_derivative_metric(*ge, field(e, {"-x2", "x1"}));
  for (std::size_t k = 0; k < rot.size(); ++k) CHECK(rot.flat(k).is_zero());
  auto e3 = chart("E3", {"x1", "x2", "x3"});
  auto g3 = metric(e3, {"1", "1", "1"});
  auto l = lie_derivative_metric(*g3, gradient(*g3, parse("(x1^2 + x2^2 + x3^2)/2", e3->scope())));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(evaluate(l.at({i, j}), Point{}) == (i == j ? 2.0 : 0.0));
}

TEST_CASE("lie derivative on the warped-source case frame combinations") {
  auto c = wsrc_chart();
  auto g = wsrc(c);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  const char* frame[6][6] = {{"exp(x4)", "0", "0", "0", "0", "0"}, {"0", "0", "exp(x4)", "0", "0", "0"},
                             {"0", "exp(x4)", "0", "0", "0", "0"}, {"0", "0", "0", "1", "0", "0"},
                             {"0", "0", "0", "0", "1", "0"},       {"0", "0", "0", "0", "0", "1"}};
  // Order: U1, U2, X1, X2, X3, X4 with coefficients a, b, c, d, l, h.
  std::vector<VectorField> base;
  for (auto& f : frame) base.push_back(field(c, {f[0], f[1], f[2], f[3], f[4], f[5]}));
  for (int trial = 0; trial < 5; ++trial) {
    double k[3][6];
    std::vector<VectorField> z;
    for (int i = 0; i < 3; ++i) {
      VectorField s = VectorField::zero(c);
      for (int j = 0; j < 6; ++j) {
        k[i][j] = u(rng);
        s = s + Expr(k[i][j]) * base[static_cast<std::size_t>(j)];
      }
      z.push_back(s);
    }
    auto [a1, b1, c1, d1, l1, h1] = std::tuple(k[0][0], k[0][1], k[0][2], k[0][3], k[0][4], k[0][5]);
    auto [a2, b2, c2, d2, l2, h2] = std::tuple(k[1][0], k[1][1], k[1][2], k[1][3], k[1][4], k[1][5]);
    auto [a3, b3, c3, d3, l3, h3] = std::tuple(k[2][0], k[2][1], k[2][2], k[2][3], k[2][4], k[2][5]);
    (void)l1, (void)h1, (void)l2, (void)h2, (void)l3, (void)h3;
    // Oracle from the covariant-derivative table: ∇_{U}U = X2, ∇_{U}X2 = -U,
    // ∇_{X1}X1 = X2, ∇_{X1}X2 = -X1 (U = U1, U2), expanded by bilinearity.
    double table = (a1 * a2 * d3 + a1 * a3 * d2 + b1 * b2 * d3 + b1 * b3 * d2 + c1 * c2 * d3 + c1 * c3 * d2) -
                   2 * (a2 * a3 + b2 * b3 + c2 * c3) * d1;
    double stated = 0.5 * (a1 * a2 * d3 + a1 * a3 * d2 + c3 * c1 * d2 + b3 * b1 * d2 + c2 * c1 * d3 + b2 * b1 * d3) -
                   a2 * a3 * d1 - c3 * c2 * d1 - b2 * b3 * d1;
    Expr l = lie_derivative_apply(*g, z[0], z[1], z[2]);
    double engine = evaluate(l, point(c, {0.2, 0.3, 0.4, 0.5, 0.6, 0.7}));
    CHECK(engine == doctest::Approx(table).epsilon(1e-12));
    // The printed expression is half of the bilinear expansion.
    CHECK(engine == doctest::Approx(2 * stated).epsilon(1e-12));
  }
}

TEST_CASE("geodesics") {
  auto e = chart("E2", {"x", "y"});
  auto ge = metric(e, {"1", "1"});
  Eigen::Vector2d v(0.3, -0.4);
  auto r = geodesic_integrate(*ge, point(e, {0.5, 0.5}), v, 1.0, 1e-2);
  CHECK(r.max_energy_drift <= 1e-10);
  CHECK((r.trajectory.back().x - Eigen::Vector2d(0.8, 0.1)).norm() <= 1e-10);

  // Great circle through the equator closes after 2π, with φ advanced by 2π.
  auto sc = sphere_chart();
  auto s = metric(sc, {"1", "sin(th)^2"});
  double a = 0.4;
  Eigen::Vector2d v0(std::sin(a), std::cos(a));
  auto rs = geodesic_integrate(*s, point(sc, {M_PI / 2, 1.0}), v0, 2 * M_PI, 1e-3);
  CHECK((rs.trajectory.back().x - Eigen::Vector2d(M_PI / 2, 1.0 + 2 * M_PI)).norm() <= 1e-5);

  // Surface of revolution: Clairaut quantity is conserved.
  auto rc = chart("R", {"u", "v"});
  auto rg = metric(rc, {"1", "(2 + cos(u))^2"});
  GeodesicOptions opts;
  opts.clairaut_coord = -1;
  auto rr = geodesic_integrate(*rg, point(rc, {0.3, 0.2}), Eigen::Vector2d(0.6, 0.25), 10.0, 1e-3, opts);
  CHECK(rr.clairaut_coord.value() == 1);
  CHECK(rr.max_clairaut_drift <= 1e-6);
  CHECK(rr.max_energy_drift <= 1e-8);

  CHECK_THROWS_AS(geodesic_integrate(*ge, point(e, {0.5, 0.5}), Eigen::Vector2d(0, 0), 1.0, 0.1), GeometryError);
  auto pc = std::make_shared<Chart>("P", std::vector<std::string>{"x", "y"});
  pc->add_constraint({parse("x", pc->scope()), Constraint::Kind::Positive, "x > 0"});
  auto gp = metric(pc, {"1", "1"});
  CHECK_THROWS_AS(geodesic_integrate(*gp, point(pc, {0.5, 0.5}), Eigen::Vector2d(-1, 0), 2.0, 1e-2),
                  GeodesicError);
}

TEST_CASE("orthonormalize") {
  auto e = chart("E2", {"x1", "x2"});
  auto ge = metric(e, {"1", "1"});
  Point p = point(e, {0.3, 0.4});
  auto on = orthonormalize(*ge, {field(e, {"1", "0"}), field(e, {"1", "1"})}, p);
  CHECK((on[0] - Eigen::Vector2d(1, 0)).norm() <= 1e-14);
  CHECK((on[1] - Eigen::Vector2d(0, 1)).norm() <= 1e-14);
  auto same = orthonormalize(*ge, {field(e, {"1", "0"}), field(e, {"0", "1"})}, p);
  CHECK((same[1] - Eigen::Vector2d(0, 1)).norm() == 0.0);
  CHECK_THROWS_AS(orthonormalize(*ge, {field(e, {"1", "1"}), field(e, {"2", "2"})}, p), RankDeficient);

  auto c = wsrc_chart();
  auto g = wsrc(c);
  Point q = point(c, {0.2, 0.3, 0.4, 0.5, 0.6, 0.7});
  std::vector<VectorField> coords;
  for (int i = 0; i < 6; ++i) coords.push_back(VectorField::coordinate(c, i));
  auto f = orthonormalize(*g, coords, q);
  CHECK(f[0][0] == doctest::Approx(std::exp(0.5)));
  CHECK(f[2][2] == doctest::Approx(std::exp(0.5)));
  CHECK(f[3][3] == doctest::Approx(1.0));
}

TEST_CASE("metric validation") {
  auto c = chart("A", {"x", "y"});
  CHECK_THROWS_AS(metric(c, {"1", "x", "0", "1"}), GeometryError);
  ExprMatrix bad(3, 3);
  CHECK_THROWS_AS(Metric(c, bad), GeometryError);
  CHECK_THROWS_AS(chart("B", {"x", "x"}), GeometryError);
}

TEST_CASE("large blocks fall back to numeric inverse") {
  std::vector<std::string> coords;
  for (int i = 0; i < 7; ++i) coords.push_back("q" + std::to_string(i));
  auto c = chart("Big", coords);
  std::vector<std::string> m;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) m.push_back(i == j ? "2" : (std::abs(i - j) == 1 ? "0.5" : "0"));
  auto g = metric(c, m);
  CHECK_FALSE(g->has_symbolic_inverse());
  CHECK_THROWS_AS(christoffel(*g), UnsupportedConfiguration);
  auto cv = christoffel_at(*g, sample_points(*c, 1, 1)[0]);
  CHECK(cv.numeric_inverse);
  for (double x : cv.gamma) CHECK(x == 0.0);
}

TEST_CASE("sampling is seeded and respects constraints") {
  auto c = std::make_shared<Chart>("C", std::vector<std::string>{"x", "y"});
  c->add_constraint({parse("x - 0.5", c->scope()), Constraint::Kind::Positive, "x > 0.5"});
  auto a = sample_points(*c, 30, 42);
  auto b = sample_points(*c, 30, 42);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].at(intern("x")) > 0.5);
    CHECK(a[i].at(intern("x")) == b[i].at(intern("x")));
    CHECK(a[i].at(intern("y")) >= 0.1);
    CHECK(a[i].at(intern("y")) < 1.0);
  }
  c->add_constraint({parse("x - 2", c->scope()), Constraint::Kind::Positive, "x > 2"});
  CHECK_THROWS_AS(sample_points(*c, 5, 1), GeometryError);
}

// ---------------------------------------------------------------------------
// properties

TEST_CASE("property: metric compatibility and torsion-freeness") {
  std::mt19937 rng(1234);
  for (const auto& g : sweep_metrics()) {
    auto c = g->chart_ptr();
    auto pts = sample_points(*c, 100, 77);
    std::uniform_int_distribution<int> pick(0, c->dim() - 1);
    for (int trial = 0; trial < 3; ++trial) {
      auto X = VectorField::coordinate(c, pick(rng));
      auto Y = VectorField::coordinate(c, pick(rng));
      auto Z = VectorField::coordinate(c, pick(rng));
      Expr lhs = X.apply(g->inner(Y, Z));
      Expr rhs = g->inner(covariant_derivative(*g, X, Y), Z) + g->inner(Y, covariant_derivative(*g, X, Z));
      auto T = covariant_derivative(*g, X, Y) - covariant_derivative(*g, Y, X);
      for (const auto& p : pts) {
        CHECK(std::abs(evaluate(lhs, p) - evaluate(rhs, p)) <= 1e-9);
        CHECK(max_abs(T.eval(p)) <= 1e-9);
      }
    }
    auto A = random_poly_field(c, rng);
    auto B = random_poly_field(c, rng);
    auto tor = covariant_derivative(*g, A, B) - covariant_derivative(*g, B, A) - lie_bracket(A, B);
    for (std::size_t i = 0; i < 100; i += 5) CHECK(max_abs(tor.eval(pts[i])) <= 1e-9);
  }
}

TEST_CASE("property: first Bianchi identity and Ricci symmetry") {
  std::mt19937 rng(99);
  for (const auto& g : sweep_metrics()) {
    auto c = g->chart_ptr();
    auto pts = sample_points(*c, 10, 5);
    const auto& r = riemann(*g);
    const int n = g->dim();
    for (const auto& p : pts) {
      auto v = r.eval(p);
      auto R = [&](int l, int i, int j, int k) { return v[static_cast<std::size_t>(((l * n + i) * n + j) * n + k)]; };
      double worst = 0;
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(R(l, i, j, k) + R(l, j, k, i) + R(l, k, i, j)));
      CHECK(worst <= 1e-8);
      Eigen::MatrixXd ric = eval_ricci(*g, p);
      CHECK((ric - ric.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("property: symbolic ricci matches both finite-difference routes") {
  for (const auto& g : sweep_metrics()) {
    auto c = g->chart_ptr();
    for (const auto& p : sample_points(*c, 20, 11)) {
      Eigen::MatrixXd sym = eval_ricci(*g, p);
      double scale = 1.0 + sym.cwiseAbs().maxCoeff();
      Eigen::MatrixXd fd = fd_ricci(*g, p);
      Eigen::MatrixXd orc = oracle::ricci(metric_fn(*g), c->coords_of(p));
      CHECK_MESSAGE((sym - fd).cwiseAbs().maxCoeff() / scale <= 1e-5, c->name());
      CHECK_MESSAGE((sym - orc).cwiseAbs().maxCoeff() / scale <= 1e-5, c->name());
    }
  }
}

TEST_CASE("property: frame-trace divergence equals coordinate divergence") {
  std::mt19937 rng(3);
  auto c = wsrc_chart();
  auto g = wsrc(c);
  Frame f{c,
          {field(c, {"exp(x4)", "0", "0", "0", "0", "0"}), field(c, {"0", "exp(x4)", "0", "0", "0", "0"}),
           field(c, {"0", "0", "exp(x4)", "0", "0", "0"}), field(c, {"0", "0", "0", "1", "0", "0"}),
           field(c, {"0", "0", "0", "0", "1", "0"}), field(c, {"0", "0", "0", "0", "0", "1"})},
          true};
  CHECK(frame_orthonormality_residual(*g, f, sample_points(*c, 20, 1)) <= 1e-10);
  for (int trial = 0; trial < 3; ++trial) {
    auto X = random_poly_field(c, rng);
    Expr a = divergence(*g, X);
    Expr b = divergence_frame(*g, X, f);
    for (const auto& p : sample_points(*c, 20, 2)) CHECK(std::abs(evaluate(a, p) - evaluate(b, p)) <= 1e-9);
  }
  auto sc = sphere_chart();
  auto s = metric(sc, {"1", "sin(th)^2"});
  Frame fs{sc, {field(sc, {"1", "0"}), field(sc, {"0", "1/sin(th)"})}, true};
  auto X = field(sc, {"cos(ph)*th", "th^2"});
  Expr a = divergence(*s, X);
  Expr b = divergence_frame(*s, X, fs);
  for (const auto& p : sample_points(*sc, 20, 2)) CHECK(std::abs(evaluate(a, p) - evaluate(b, p)) <= 1e-9);
}

TEST_CASE("covariant derivative of tensors: metric is parallel") {
  for (const auto& g : sweep_metrics()) {
    auto c = g->chart_ptr();
    TensorField t(c, 0, 2);
    for (int i = 0; i < g->dim(); ++i)
      for (int j = 0; j < g->dim(); ++j) t.at({i, j}) = g->g(i, j);
    auto d = covariant_derivative(*g, t);
    for (const auto& p : sample_points(*c, 5, 8))
      for (double x : d.eval(p)) CHECK(std::abs(x) <= 1e-9);
  }
}
