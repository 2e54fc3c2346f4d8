#pragma once

// Per-check results shared by every verification routine.

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dgeo {

enum class Verdict { Pass, Fail, NotApplicable, Partial, Vacuous };

const char* verdict_name(Verdict v);
std::optional<Verdict> parse_verdict(const std::string& s);

struct TermValue {
  std::string name;
  double value = 0.0;
  bool available = true;
  // e.g. "INTERPRETED" or the reason a term is unavailable
  std::string note;
  bool operator==(const TermValue&) const = default;
};

struct GateResult {
  std::string name;
  bool holds = true;
  double residual = 0.0;
  std::string detail;
  bool operator==(const GateResult&) const = default;
};

struct CheckResult {
  std::string id;
  Verdict verdict = Verdict::Pass;
  double tolerance = 1e-8;
  double max_residual = 0.0;
  std::optional<std::size_t> worst_point;
  std::vector<double> worst_coords;
  std::vector<TermValue> terms;  // breakdown at the worst sample
  std::vector<GateResult> gates;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::string> notes;
  bool vacuous = false;

  // Records a residual sample; non-finite residuals count as infinite.
  // Returns true when this sample became the worst one.
  bool observe(double residual, std::size_t point_index, const Eigen::VectorXd& coords);
  void set_value(const std::string& name, double v);
  std::optional<double> value(const std::string& name) const;
  bool gates_hold() const;
  bool operator==(const CheckResult&) const = default;
};

// Verdict from gates, availability, vacuity and the residual, in that order.
void finalize(CheckResult& r);

}  // namespace dgeo
