#include <cmath>

#include "doctest.h"
#include "dgeo/propcheck.hpp"
#include "maps.hpp"

using namespace dgeo;
using namespace testsupport;

namespace {

ChartPtr r4(const char* name, const char* x) {
  std::vector<std::string> v;
  for (int i = 1; i <= 4; ++i) v.push_back(std::string(x) + std::to_string(i));
  return chart(name, v);
}

std::vector<VectorField> coord_fields(const ChartPtr& c, std::initializer_list<int> idx) {
  std::vector<VectorField> out;
  for (int i : idx) {
    std::vector<std::string> comps(static_cast<std::size_t>(c->dim()), "0");
    comps[static_cast<std::size_t>(i)] = "1";
    out.push_back(field(c, comps));
  }
  return out;
}

// J d1 = d3, J d2 = d4 on coordinates.
AlmostComplexStructure pair13(const ChartPtr& c) {
  return AlmostComplexStructure::on_coordinates(c, frame_action(4, {{0, 2, 1.0}, {1, 3, 1.0}, {2, 0, -1.0}, {3, 1, -1.0}}));
}

// R^4 -> R^4, (x3, x4, 0, 0): kernel d1, d2, range dy1, dy2, all flat.
PropositionCase flat_lagrangian() {
  auto m = r4("M", "x");
  auto n = r4("N", "y");
  auto gm = metric(m, {"1", "1", "1", "1"});
  auto gn = metric(n, {"1", "1", "1", "1"});
  DeclaredFrames d;
  d.source = d.target = true;
  d.vertical = coord_fields(m, {0, 1});
  d.horizontal = coord_fields(m, {2, 3});
  d.range = coord_fields(n, {0, 1});
  d.normal = coord_fields(n, {2, 3});
  PropositionCase c;
  c.name = "flat-lagrangian";
  c.ctx = std::make_shared<MapContext>(gm, gn, smooth_map(m, n, {"x3", "x4", "0", "0"}), d);
  c.j = pair13(m);
  c.jprime = pair13(n);
  c.f = parse("0", m->scope());
  c.g = parse("0", n->scope());
  return c;
}

// Warped product R^2 x_{e^{x1}} R^2 onto the base.
PropositionCase warped_clairaut() {
  auto m = r4("M", "x");
  auto n = chart("N", {"y1", "y2"});
  auto gm = metric(m, {"1", "1", "exp(2*x1)", "exp(2*x1)"});
  auto gn = metric(n, {"1", "1"});
  DeclaredFrames d;
  d.source = true;
  d.vertical = {field(m, {"0", "0", "exp(-x1)", "0"}), field(m, {"0", "0", "0", "exp(-x1)"})};
  d.horizontal = coord_fields(m, {0, 1});
  PropositionCase c;
  c.name = "warped-clairaut";
  c.ctx = std::make_shared<MapContext>(gm, gn, smooth_map(m, n, {"x1", "x2"}), d);
  Frame fr{m, {d.horizontal[0], d.horizontal[1], d.vertical[0], d.vertical[1]}, true};
  // e3 -> e1, e4 -> e2 on the adapted frame
  c.j = AlmostComplexStructure::on_frame(*gm, fr, frame_action(4, {{2, 0, 1.0}, {3, 1, 1.0}, {0, 2, -1.0}, {1, 3, -1.0}}));
  c.f = parse("x1", m->scope());
  return c;
}

std::vector<Point> pts(const PropositionCase& c, std::size_t n, std::uint64_t seed) {
  return sample_points(*c.ctx->map().source(), n, seed);
}

const GateResult& find_gate(const CheckResult& r, const std::string& name) {
  for (const auto& g : r.gates) {
    if (g.name == name) return g;
  }
  FAIL("missing gate " << name);
  return r.gates.front();
}

}  // namespace

TEST_CASE("gate lists per id") {
  auto g = gates_for("lag_ric_uv");
  CHECK(std::find(g.begin(), g.end(), "lagrangian_source") != g.end());
  g = gates_for("cor_ric_xy");
  CHECK(std::find(g.begin(), g.end(), "totally_geodesic_map") != g.end());
  g = gates_for("ric_de");
  CHECK(std::find(g.begin(), g.end(), "normal_totally_geodesic") != g.end());
  CHECK(identity_ids().size() == 21);
  CHECK(theorem_ids().size() == 6);
  CHECK_THROWS_AS(gates_for("ric_zz"), GeometryError);
}

TEST_CASE("flat lagrangian: every identity reduces to 0 = 0") {
  PropositionRunner run(flat_lagrangian(), pts(flat_lagrangian(), 4, 1));
  for (const auto& id : identity_ids()) {
    CAPTURE(id);
    auto r = run.identity(id);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.max_residual <= 1e-10);
    CHECK(r.gates_hold());
    REQUIRE(r.value("lhs"));
    CHECK(std::abs(*r.value("lhs")) <= 1e-12);
  }
  CHECK(run.gate("lagrangian_source").holds);
  CHECK(run.gate("lagrangian_target").holds);
  CHECK(run.gate("normal_totally_geodesic").holds);
}

TEST_CASE("flat lagrangian: interpreted target terms are labelled") {
  PropositionRunner run(flat_lagrangian(), pts(flat_lagrangian(), 2, 2));
  auto r = run.identity("ric_fxe");
  int interpreted = 0;
  for (const auto& t : r.terms) interpreted += t.note == "INTERPRETED";
  CHECK(interpreted == 3);
}

TEST_CASE("a disabled gate makes the identity not applicable but keeps the audit") {
  auto c = flat_lagrangian();
  c.assume["kahler_source"] = false;
  PropositionRunner run(c, pts(c, 3, 3));
  auto r = run.identity("ric_uv");
  CHECK(r.verdict == Verdict::NotApplicable);
  CHECK_FALSE(find_gate(r, "kahler_source").holds);
  CHECK(r.max_residual <= 1e-10);
  CHECK(r.terms.size() >= 3);
  // A true entry never forces a failing gate on.
  auto w = warped_clairaut();
  w.assume["kahler_source"] = true;
  PropositionRunner run2(w, pts(w, 2, 3));
  CHECK_FALSE(run2.gate("kahler_source").holds);
}

TEST_CASE("first worked example: ric_uv is evaluated but not applicable") {
  auto ex = wsrc_map();
  PropositionCase c;
  c.ctx = ex.ctx;
  c.j = AlmostComplexStructure::on_frame(*ex.gm, ex.fm,
                                         frame_action(6, {{0, 1, 1.0}, {1, 0, -1.0}, {2, 3, 1.0}, {3, 2, -1.0},
                                                          {4, 5, 1.0}, {5, 4, -1.0}}));
  c.f = parse("-x4", ex.m->scope());
  PropositionRunner run(c, sample_points(*ex.m, 3, 5));
  auto r = run.identity("ric_uv");
  CHECK(r.verdict == Verdict::NotApplicable);
  CHECK_FALSE(find_gate(r, "kahler_source").holds);
  CHECK(find_gate(r, "clairaut_source").holds);
  CHECK(r.value("lhs"));
  CHECK(r.value("rhs"));
  CHECK(std::isfinite(r.max_residual));
}

TEST_CASE("trivial kernel: dimension gate fails") {
  auto m = r4("M", "x");
  auto n = r4("N", "y");
  auto g = metric(m, {"1", "1", "1", "1"});
  auto h = metric(n, {"1", "1", "1", "1"});
  PropositionCase c;
  c.ctx = std::make_shared<MapContext>(g, h, smooth_map(m, n, {"x1", "x2", "x3", "x4"}));
  c.j = pair13(m);
  c.f = parse("0", m->scope());
  PropositionRunner run(c, sample_points(*m, 2, 6));
  auto r = run.identity("ric_uv");
  CHECK(r.verdict == Verdict::NotApplicable);
  CHECK(find_gate(r, "dim_kernel").residual == 0.0);
}

TEST_CASE("vertical Ricci decomposition matches the ambient tensor") {
  SUBCASE("warped product") {
    auto w = warped_clairaut();
    PropositionRunner run(w, pts(w, 5, 7));
    auto r = run.vertical_ricci_decomposition();
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.max_residual <= 1e-8);
  }
  SUBCASE("first worked example") {
    auto ex = wsrc_map();
    PropositionCase c;
    c.ctx = ex.ctx;
    PropositionRunner run(c, sample_points(*ex.m, 4, 8));
    auto r = run.vertical_ricci_decomposition();
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.max_residual <= 1e-8);
  }
}

TEST_CASE("warped product: the fiber Ricci is -2 from the warping function alone") {
  // Ric(U,U) = -(φ''/φ + |∇φ|^2/φ^2) per unit vertical U with φ = e^{x1}, flat fibers.
  auto w = warped_clairaut();
  Point p = point(w.ctx->map().source(), {0.3, -0.2, 0.5, 0.1});
  auto ric = w.ctx->source_metric().ricci().eval(p);
  // Ric(U,U) = e^{-2 x1} Ric_33
  CHECK(std::exp(-0.6) * ric[2 * 4 + 2] == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("J-invariance of Ricci") {
  auto cm = std::make_shared<Chart>("M", std::vector<std::string>{"th", "ph", "u", "v"});
  cm->add_constraint({parse("sin(th)", cm->scope()), Constraint::Kind::Positive, "sin(th) > 0"});
  cm->set_box(0, 0.3, 2.8);
  auto g = metric(cm, {"1", "sin(th)^2", "1", "1"});
  Frame fr{cm, {field(cm, {"1", "0", "0", "0"}), field(cm, {"0", "1/sin(th)", "0", "0"}),
                field(cm, {"0", "0", "1", "0"}), field(cm, {"0", "0", "0", "1"})}, true};
  auto line = chart("L", {"y"});
  auto ctx = std::make_shared<MapContext>(g, metric(line, {"1"}), smooth_map(cm, line, {"u"}));
  auto pts_m = sample_points(*cm, 4, 9);
  SUBCASE("Kähler product: Ric(JX,JY) = Ric(X,Y)") {
    PropositionCase c;
    c.ctx = ctx;
    c.j = AlmostComplexStructure::on_frame(*g, fr, frame_action(4, {{0, 1, 1.0}, {1, 0, -1.0}, {2, 3, 1.0}, {3, 2, -1.0}}));
    PropositionRunner run(c, pts_m);
    CHECK(run.j_invariance(false).max_residual <= 1e-10);
  }
  SUBCASE("mixing the factors breaks it by the sphere curvature") {
    PropositionCase c;
    c.ctx = ctx;
    c.j = AlmostComplexStructure::on_frame(*g, fr, frame_action(4, {{0, 2, 1.0}, {2, 0, -1.0}, {1, 3, 1.0}, {3, 1, -1.0}}));
    PropositionRunner run(c, pts_m);
    auto r = run.j_invariance(false);
    CHECK(r.max_residual == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.verdict == Verdict::Fail);
  }
}

TEST_CASE("ric_lie_relation is vacuous when mu vanishes") {
  auto c = flat_lagrangian();
  SolitonConfig s;
  s.metric = std::shared_ptr<const Metric>(&c.ctx->source_metric(), [](const Metric*) {});
  s.potential = parse("0", c.ctx->map().source()->scope());
  s.lambda = 0.0;
  c.source_soliton = s;
  PropositionRunner run(c, pts(c, 3, 10));
  auto r = run.ric_lie_relation();
  CHECK(r.gates_hold());
  CHECK(r.vacuous);
  CHECK(r.verdict == Verdict::Vacuous);
  auto a = run.alpha_soliton_range();
  CHECK(a.verdict == Verdict::Pass);
}

TEST_CASE("warped product: soliton-on-range diagnostics without Kähler gate") {
  auto w = warped_clairaut();
  PropositionRunner run(w, pts(w, 4, 11));
  CHECK(run.gate("clairaut_source").holds);
  CHECK(run.gate("anti_invariant_source").holds);
  CHECK_FALSE(run.gate("kahler_source").holds);
  auto r = run.alpha_soliton_range();
  CHECK(r.verdict == Verdict::NotApplicable);
  // F*∇f = ∂y1 is parallel on the flat target and Hess x1 vanishes on the base.
  REQUIRE(r.value("hess_gap"));
  CHECK(*r.value("hess_gap") <= 1e-10);
  CHECK(r.max_residual <= 1e-10);
}

TEST_CASE("scalar relations run through the gates") {
  auto c = flat_lagrangian();
  SolitonConfig s;
  s.metric = std::shared_ptr<const Metric>(&c.ctx->source_metric(), [](const Metric*) {});
  s.potential = parse("0", c.ctx->map().source()->scope());
  s.lambda = 0.0;
  c.source_soliton = s;
  SolitonConfig t;
  t.metric = std::shared_ptr<const Metric>(&c.ctx->target_metric(), [](const Metric*) {});
  t.potential = parse("0", c.ctx->map().target()->scope());
  t.lambda = 0.0;
  c.target_soliton = t;
  PropositionRunner run(c, pts(c, 3, 12));
  for (const auto& id : {"scalar_range_source", "scalar_kernel", "scalar_normal_target", "scalar_range_target"}) {
    CAPTURE(id);
    auto r = run.run(id);
    CHECK(r.verdict == Verdict::Pass);
  }
}
