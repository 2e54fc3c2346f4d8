#pragma once

// Spec files, the built-in catalog, suite orchestration and reports.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgeo/propcheck.hpp"

namespace dgeo::cli {

inline constexpr int kSpecVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

// Any problem with a spec file; exit status 2 in the command line tool.
class SpecError : public GeometryError {
 public:
  SpecError(const std::string& origin, int line, const std::string& block, const std::string& msg);
  int line() const { return line_; }
  const std::string& block() const { return block_; }

 private:
  int line_;
  std::string block_;
};

struct ManifoldSpec {
  std::string name;
  ChartPtr chart;
  std::shared_ptr<const Metric> metric;
};

struct FrameSpec {
  std::string name;
  std::string manifold;
  std::vector<std::string> labels;
  Frame frame;
  std::optional<std::size_t> index(const std::string& label) const;
};

struct MapSpec {
  std::string name, source, target;
  std::shared_ptr<const SmoothMap> map;
  std::shared_ptr<const MapContext> ctx;
};

struct StructureSpec {
  std::string name, manifold;
  AlmostComplexStructure j;
};

struct SolitonSpec {
  std::string manifold;
  SolitonConfig config;
};

struct GeodesicSpec {
  std::string manifold;
  std::vector<double> from, dir;
  double t = 1.0;
  double dt = 1e-3;
  bool monitor_clairaut = false;
};

// A value stated by the source being audited; mismatches become ledger
// entries, never failures.
struct Claim {
  enum class Kind { Ricci, Kahler, Christoffel };
  Kind kind = Kind::Ricci;
  int line = 0;
  std::string text;
  std::string target;  // frame, structure or manifold name
  std::vector<std::string> args;
  std::optional<Expr> value;
};

struct Config {
  std::string origin;
  std::string name;
  std::string description;
  std::vector<std::string> manifold_order;
  std::map<std::string, ManifoldSpec> manifolds;
  std::map<std::string, FrameSpec> frames;
  std::optional<MapSpec> map;
  std::vector<StructureSpec> structures;
  std::map<std::string, std::pair<std::string, Expr>> functions;  // name -> (manifold, expr)
  std::vector<SolitonSpec> solitons;
  std::optional<GeodesicSpec> geodesic;
  std::vector<Claim> claims;

  std::vector<std::string> suite, audit;
  double tol = 1e-8;
  std::map<std::string, double> check_tol;
  std::size_t points = 20;
  std::uint64_t seed = 1;
  std::map<std::string, bool> assume;

  const ManifoldSpec& manifold(const std::string& name) const;
  // The map source, else the first declared manifold.
  const ManifoldSpec& primary() const;
  // J on the map source (or the primary manifold) and J' on the map target.
  const StructureSpec* source_structure() const;
  const StructureSpec* target_structure() const;
  const SolitonSpec* soliton_on(const std::string& manifold) const;
  PropositionCase proposition_case() const;
};

Config parse_spec(const std::string& text, const std::string& origin = "<spec>");
Config load_spec(const std::string& path);

// Built-in catalog, in listing order.
const std::vector<std::string>& catalog_names();
const std::string& catalog_description(const std::string& name);
// Throws SpecError for an unknown name.
const std::string& catalog_text(const std::string& name);
Config catalog_config(const std::string& name);

struct LedgerEntry {
  std::string kind;  // "claim" or "audit"
  std::string id;
  std::string detail;
  std::vector<std::pair<std::string, double>> values;
  bool operator==(const LedgerEntry&) const = default;
};

struct Report {
  int schema_version = kReportSchemaVersion;
  std::string spec;
  std::uint64_t seed = 0;
  std::size_t points = 0;
  double tolerance = 0.0;
  std::string convention;
  std::vector<CheckResult> checks;
  std::vector<CheckResult> audit;
  std::vector<LedgerEntry> ledger;
  bool operator==(const Report&) const = default;
};

struct RunOptions {
  std::optional<std::vector<std::string>> suite;  // replaces the spec suite; audit is skipped
  std::optional<std::size_t> points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

// Seed precedence: options, then DGEO_SEED, then the spec.
std::uint64_t effective_seed(const Config& cfg, const RunOptions& opt);

// Every check id run_suite understands.
const std::vector<std::string>& known_checks();

// Unknown ids throw SpecError; failures inside a check are captured as
// FAIL with an error note.
Report run_suite(const Config& cfg, const RunOptions& opt = {});

// 0 when no suite check failed, 1 otherwise.
int exit_status(const Report& r);

std::string emit_machine(const Report& r);
std::string emit_human(const Report& r);
// Inverse of emit_machine; throws SpecError on malformed input.
Report parse_machine(const std::string& text);

}  // namespace dgeo::cli
