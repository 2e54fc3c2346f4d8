#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <string>

#include "doctest.h"
#include "dgeo/cli.hpp"

using namespace dgeo;
using namespace dgeo::cli;

namespace {

const char* kSurface = R"(dgeo-spec 1
name tiny
# comment line
[manifold S]
coords th ph
metric diag 1, sin(th)^2
constraint sin(th) > 0
box th 0.3 2.8

[check]
suite einstein, ricci_oracle
points 5
seed 3
)";

std::string error_of(const std::string& text) {
  try {
    parse_spec(text, "t");
  } catch (const SpecError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

const CheckResult* find(const std::vector<CheckResult>& v, const std::string& id) {
  for (const auto& c : v)
    if (c.id == id) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("spec: a small surface parses") {
  Config c = parse_spec(kSurface, "t");
  CHECK(c.name == "tiny");
  REQUIRE(c.manifolds.count("S"));
  CHECK(c.manifold("S").chart->dim() == 2);
  CHECK(c.manifold("S").chart->box(0).first == doctest::Approx(0.3));
  CHECK(c.manifold("S").chart->constraints().size() == 1);
  CHECK(c.suite == std::vector<std::string>{"einstein", "ricci_oracle"});
  CHECK(c.points == 5);
  CHECK(c.seed == 3);
  CHECK(&c.primary() == &c.manifold("S"));
}

TEST_CASE("spec: errors carry line and block") {
  CHECK(contains(error_of("name x\n"), "dgeo-spec"));
  CHECK(contains(error_of("dgeo-spec 2\n"), "unsupported spec version"));

  std::string dim = error_of("dgeo-spec 1\n[manifold M]\ncoords a b c\nmetric diag 1, 1\n");
  CHECK(contains(dim, "[manifold M]"));
  CHECK(contains(dim, "t:4"));

  std::string frame = error_of("dgeo-spec 1\n[manifold M]\ncoords a b\nmetric diag 1, 1\n[frame E on M]\nE1 = 1, 0, 0\n");
  CHECK(contains(frame, "[frame E on M]"));
  CHECK(contains(frame, "dimension mismatch"));

  CHECK(contains(error_of("dgeo-spec 1\n[nonsense]\n"), "unknown block"));
  CHECK(contains(error_of("dgeo-spec 1\n[manifold M]\ncoords a\nmetric diag 1\n[check]\nsuite bogus\n"),
                 "unknown check"));
  CHECK(contains(error_of("dgeo-spec 1\n[manifold M]\ncoords a\nmetric diag 1 +\n"), "[manifold M]"));
  CHECK(contains(error_of("dgeo-spec 1\n[manifold M]\ncoords a\nmetric diag 1\n[soliton on Q]\npotential 0\n"),
                 "Q"));
}

TEST_CASE("spec: unknown catalog name") { CHECK_THROWS_AS(catalog_config("nope"), SpecError); }

TEST_CASE("catalog: every entry parses and its suite passes") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    Config c = catalog_config(name);
    CHECK(c.name == name);
    CHECK(catalog_description(name) == c.description);
    RunOptions opt;
    opt.points = 4;
    Report r = run_suite(c, opt);
    CHECK(r.checks.size() == c.suite.size());
    for (const auto& ch : r.checks) {
      CAPTURE(ch.id);
      CHECK(ch.verdict != Verdict::Fail);
    }
    CHECK(exit_status(r) == 0);
  }
}

TEST_CASE("catalog: every identity and theorem id appears in some suite or audit") {
  std::set<std::string> seen;
  for (const auto& name : catalog_names()) {
    Config c = catalog_config(name);
    seen.insert(c.suite.begin(), c.suite.end());
    seen.insert(c.audit.begin(), c.audit.end());
  }
  for (const auto& id : identity_ids()) CHECK_MESSAGE(seen.count(id), id);
  for (const auto& id : theorem_ids()) CHECK_MESSAGE(seen.count(id), id);
}

TEST_CASE("paper-3.1: structure of the loaded case") {
  Config c = catalog_config("paper-3.1");
  REQUIRE(c.map);
  CHECK(c.map->source == "M");
  CHECK(c.map->target == "N");
  CHECK(c.map->ctx->frames().vertical.size() == 2);
  CHECK(c.map->ctx->frames().normal.size() == 2);
  REQUIRE(c.source_structure());
  CHECK(c.source_structure()->name == "J");
  CHECK(c.target_structure() == nullptr);
  PropositionCase pc = c.proposition_case();
  CHECK(pc.j.has_value());
  CHECK(pc.f.has_value());
  CHECK_FALSE(pc.g.has_value());
  CHECK(c.claims.size() == 12);
}

TEST_CASE("paper-3.1: ledger holds the claims, suite exits 0") {
  Report r = run_suite(catalog_config("paper-3.1"), {});
  CHECK(exit_status(r) == 0);
  auto entry = [&](const std::string& id) -> const LedgerEntry* {
    for (const auto& e : r.ledger)
      if (e.id == id) return &e;
    return nullptr;
  };
  const LedgerEntry* k = entry("kahler J");
  REQUIRE(k);
  CHECK(k->kind == "claim");
  const LedgerEntry* u11 = entry("ricci(U1,U1)");
  REQUIRE(u11);
  CHECK(u11->values.at(0).second == doctest::Approx(3.0));
  CHECK(u11->values.at(1).second == doctest::Approx(-3.0));
  const LedgerEntry* u12 = entry("ricci(U1,U2)");
  REQUIRE(u12);
  CHECK(u12->values.at(1).second == doctest::Approx(0.0));
  // Christoffel claims agree, so they leave no trace.
  for (const auto& e : r.ledger) CHECK_FALSE(e.id.starts_with("christoffel"));
  // Audit failures are ledger entries too.
  CHECK(entry("kahler"));
  REQUIRE(find(r.audit, "ric_uv"));
  CHECK(find(r.audit, "ric_uv")->verdict == Verdict::NotApplicable);
}

TEST_CASE("suite override: audit skipped, failures propagate") {
  Config c = catalog_config("paper-3.1");
  RunOptions opt;
  opt.suite = std::vector<std::string>{"kahler"};
  opt.points = 3;
  Report r = run_suite(c, opt);
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].verdict == Verdict::Fail);
  CHECK(r.audit.empty());
  CHECK(exit_status(r) == 1);

  opt.suite = std::vector<std::string>{"no_such_check"};
  CHECK_THROWS_AS(run_suite(c, opt), SpecError);
}

TEST_CASE("suite: an empty selection still yields a header") {
  Config c = parse_spec(kSurface, "t");
  RunOptions opt;
  opt.suite = std::vector<std::string>{};
  Report r = run_suite(c, opt);
  CHECK(r.checks.empty());
  std::string h = emit_human(r);
  CHECK(contains(h, "spec=tiny"));
  CHECK(contains(h, "no checks selected"));
  CHECK(exit_status(r) == 0);
}

TEST_CASE("suite: a check that cannot run is a failure with a note") {
  Config c = parse_spec(kSurface, "t");
  RunOptions opt;
  opt.suite = std::vector<std::string>{"riemannian_map"};
  Report r = run_suite(c, opt);
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].verdict == Verdict::Fail);
  CHECK(std::isinf(r.checks[0].max_residual));
  REQUIRE_FALSE(r.checks[0].notes.empty());
  CHECK(contains(r.checks[0].notes[0], "map"));
}

TEST_CASE("seed precedence") {
  Config c = parse_spec(kSurface, "t");
  unsetenv("DGEO_SEED");
  CHECK(effective_seed(c, {}) == 3);
  setenv("DGEO_SEED", "11", 1);
  CHECK(effective_seed(c, {}) == 11);
  RunOptions opt;
  opt.seed = 5;
  CHECK(effective_seed(c, opt) == 5);
  setenv("DGEO_SEED", "x", 1);
  CHECK_THROWS_AS(effective_seed(c, {}), SpecError);
  unsetenv("DGEO_SEED");
}

TEST_CASE("machine report round-trips, including non-finite values") {
  Report r = run_suite(catalog_config("paper-3.1"), {});
  CheckResult odd;
  odd.id = "odd";
  odd.verdict = Verdict::Partial;
  odd.max_residual = std::numeric_limits<double>::infinity();
  odd.worst_coords = {0.1, -0.25};
  odd.terms.push_back({"t", 1.0 / 3.0, false, "needs frames"});
  odd.gates.push_back({"g", false, 2.5, "detail"});
  odd.values.push_back({"neg", -std::numeric_limits<double>::infinity()});
  r.checks.push_back(odd);
  std::string text = emit_machine(r);
  Report back = parse_machine(text);
  CHECK(back == r);
  CHECK(emit_machine(back) == text);
  CHECK(contains(text, "\"schema_version\": 1"));
  CHECK_THROWS_AS(parse_machine("{"), SpecError);
  CHECK_THROWS_AS(parse_machine("{\"schema_version\": 9}"), SpecError);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  Config c = catalog_config("paper-3.1");
  RunOptions opt;
  opt.seed = 7;
  opt.points = 8;
  std::string a = emit_machine(run_suite(c, opt));
  std::string b = emit_machine(run_suite(c, opt));
  CHECK(a == b);
  opt.seed = 8;
  CHECK(emit_machine(run_suite(c, opt)) != a);
}

TEST_CASE("per-check tolerance overrides") {
  std::string text = std::string(kSurface) + "tol ricci_oracle 1e-30\n";
  Report r = run_suite(parse_spec(text, "t"), {});
  const CheckResult* o = find(r.checks, "ricci_oracle");
  REQUIRE(o);
  CHECK(o->tolerance == 1e-30);
  CHECK(o->verdict == Verdict::Fail);
}
