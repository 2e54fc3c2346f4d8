#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "dgeo/cli.hpp"
#include "json.hpp"

namespace dgeo::cli {

namespace {

using json = nlohmann::ordered_json;

// JSON has no infinities; non-finite values travel as strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double unnum(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw SpecError("report", 0, "", "expected a number, got " + j.dump());
}

json values_json(const std::vector<std::pair<std::string, double>>& vs) {
  json out = json::array();
  for (const auto& [k, v] : vs) out.push_back({{"name", k}, {"value", num(v)}});
  return out;
}

std::vector<std::pair<std::string, double>> values_from(const json& j) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& e : j) out.emplace_back(e.at("name").get<std::string>(), unnum(e.at("value")));
  return out;
}

json check_json(const CheckResult& c) {
  json j;
  j["id"] = c.id;
  j["verdict"] = verdict_name(c.verdict);
  j["tolerance"] = num(c.tolerance);
  j["max_residual"] = num(c.max_residual);
  j["worst_point"] = c.worst_point ? json(*c.worst_point) : json(nullptr);
  json coords = json::array();
  for (double x : c.worst_coords) coords.push_back(num(x));
  j["worst_coords"] = coords;
  json terms = json::array();
  for (const auto& t : c.terms)
    terms.push_back({{"name", t.name}, {"value", num(t.value)}, {"available", t.available}, {"note", t.note}});
  j["terms"] = terms;
  json gates = json::array();
  for (const auto& g : c.gates)
    gates.push_back({{"name", g.name}, {"holds", g.holds}, {"residual", num(g.residual)}, {"detail", g.detail}});
  j["gates"] = gates;
  j["values"] = values_json(c.values);
  j["notes"] = c.notes;
  j["vacuous"] = c.vacuous;
  return j;
}

CheckResult check_from(const json& j) {
  CheckResult c;
  c.id = j.at("id").get<std::string>();
  auto v = parse_verdict(j.at("verdict").get<std::string>());
  if (!v) throw SpecError("report", 0, "", "unknown verdict in check '" + c.id + "'");
  c.verdict = *v;
  c.tolerance = unnum(j.at("tolerance"));
  c.max_residual = unnum(j.at("max_residual"));
  if (!j.at("worst_point").is_null()) c.worst_point = j.at("worst_point").get<std::size_t>();
  for (const auto& x : j.at("worst_coords")) c.worst_coords.push_back(unnum(x));
  for (const auto& t : j.at("terms"))
    c.terms.push_back({t.at("name").get<std::string>(), unnum(t.at("value")), t.at("available").get<bool>(),
                       t.at("note").get<std::string>()});
  for (const auto& g : j.at("gates"))
    c.gates.push_back({g.at("name").get<std::string>(), g.at("holds").get<bool>(), unnum(g.at("residual")),
                       g.at("detail").get<std::string>()});
  c.values = values_from(j.at("values"));
  c.notes = j.at("notes").get<std::vector<std::string>>();
  c.vacuous = j.at("vacuous").get<bool>();
  return c;
}

const char* glyph(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "ok ";
    case Verdict::Fail:
      return "XX ";
    case Verdict::NotApplicable:
      return "-- ";
    case Verdict::Partial:
      return "~~ ";
    case Verdict::Vacuous:
      return "() ";
  }
  return "?  ";
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void table(std::ostringstream& os, const std::vector<CheckResult>& rows) {
  for (const auto& c : rows) {
    char line[256];
    std::snprintf(line, sizeof line, "  %s%-15s %-30s max %-10s tol %s", glyph(c.verdict), verdict_name(c.verdict),
                  c.id.c_str(), sci(c.max_residual).c_str(), sci(c.tolerance).c_str());
    os << line << "\n";
    for (const auto& g : c.gates)
      if (!g.holds) os << "      gate " << g.name << " fails (" << sci(g.residual) << ")\n";
    for (const auto& t : c.terms)
      if (!t.available) os << "      term " << t.name << " unavailable: " << t.note << "\n";
    for (const auto& n : c.notes) os << "      note " << n << "\n";
  }
}

}  // namespace

std::string emit_machine(const Report& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["spec"] = r.spec;
  j["seed"] = r.seed;
  j["points"] = r.points;
  j["tolerance"] = num(r.tolerance);
  j["convention"] = r.convention;
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c));
  j["checks"] = checks;
  json audit = json::array();
  for (const auto& c : r.audit) audit.push_back(check_json(c));
  j["audit"] = audit;
  json ledger = json::array();
  for (const auto& e : r.ledger)
    ledger.push_back({{"kind", e.kind}, {"id", e.id}, {"detail", e.detail}, {"values", values_json(e.values)}});
  j["ledger"] = ledger;
  return j.dump(2) + "\n";
}

Report parse_machine(const std::string& text) {
  try {
    json j = json::parse(text);
    Report r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
      throw SpecError("report", 0, "", "unsupported schema_version " + std::to_string(r.schema_version));
    r.spec = j.at("spec").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.points = j.at("points").get<std::size_t>();
    r.tolerance = unnum(j.at("tolerance"));
    r.convention = j.at("convention").get<std::string>();
    for (const auto& c : j.at("checks")) r.checks.push_back(check_from(c));
    for (const auto& c : j.at("audit")) r.audit.push_back(check_from(c));
    for (const auto& e : j.at("ledger"))
      r.ledger.push_back({e.at("kind").get<std::string>(), e.at("id").get<std::string>(),
                          e.at("detail").get<std::string>(), values_from(e.at("values"))});
    return r;
  } catch (const json::exception& e) {
    throw SpecError("report", 0, "", std::string("malformed report: ") + e.what());
  }
}

std::string emit_human(const Report& r) {
  std::ostringstream os;
  os << "dgeo report  spec=" << r.spec << "  seed=" << r.seed << "  points=" << r.points
     << "  tol=" << sci(r.tolerance) << "\n";
  os << "convention: " << r.convention << "\n";
  if (r.checks.empty()) {
    os << "suite: (no checks selected)\n";
  } else {
    os << "suite:\n";
    table(os, r.checks);
  }
  if (!r.audit.empty()) {
    os << "audit:\n";
    table(os, r.audit);
  }
  os << "ledger (" << r.ledger.size() << "):\n";
  for (const auto& e : r.ledger) {
    os << "  - [" << e.kind << "] " << e.id << ": " << e.detail;
    if (!e.values.empty()) {
      os << " {";
      for (std::size_t i = 0; i < e.values.size(); ++i)
        os << (i ? ", " : "") << e.values[i].first << "=" << sci(e.values[i].second);
      os << "}";
    }
    os << "\n";
  }
  std::size_t counts[5] = {0, 0, 0, 0, 0};
  for (const auto& c : r.checks) ++counts[static_cast<int>(c.verdict)];
  os << "summary: " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2] << " not-applicable, "
     << counts[3] << " partial, " << counts[4] << " vacuous\n";
  return os.str();
}

}  // namespace dgeo::cli
