#include "dgeo/report.hpp"

#include <cmath>
#include <limits>

namespace dgeo {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::NotApplicable:
      return "NOT-APPLICABLE";
    case Verdict::Partial:
      return "PARTIAL";
    case Verdict::Vacuous:
      return "VACUOUS";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(const std::string& s) {
  for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::NotApplicable, Verdict::Partial, Verdict::Vacuous}) {
    if (s == verdict_name(v)) return v;
  }
  return std::nullopt;
}

bool CheckResult::observe(double residual, std::size_t point_index, const Eigen::VectorXd& coords) {
  if (!std::isfinite(residual)) residual = std::numeric_limits<double>::infinity();
  if (worst_point && !(residual > max_residual)) return false;
  max_residual = residual;
  worst_point = point_index;
  worst_coords.assign(coords.data(), coords.data() + coords.size());
  return true;
}

void CheckResult::set_value(const std::string& name, double v) {
  for (auto& [k, x] : values) {
    if (k == name) {
      x = v;
      return;
    }
  }
  values.emplace_back(name, v);
}

std::optional<double> CheckResult::value(const std::string& name) const {
  for (const auto& [k, x] : values) {
    if (k == name) return x;
  }
  return std::nullopt;
}

bool CheckResult::gates_hold() const {
  for (const auto& g : gates) {
    if (!g.holds) return false;
  }
  return true;
}

void finalize(CheckResult& r) {
  if (!r.gates_hold()) {
    r.verdict = Verdict::NotApplicable;
    return;
  }
  for (const auto& t : r.terms) {
    if (!t.available) {
      r.verdict = Verdict::Partial;
      return;
    }
  }
  if (r.vacuous) {
    r.verdict = Verdict::Vacuous;
    return;
  }
  r.verdict = (std::isfinite(r.max_residual) && r.max_residual <= r.tolerance) ? Verdict::Pass : Verdict::Fail;
}

}  // namespace dgeo
