#pragma once

#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "dgeo/geometry.hpp"

namespace testsupport {

inline dgeo::ChartPtr chart(const std::string& name, std::vector<std::string> coords) {
  return std::make_shared<dgeo::Chart>(name, std::move(coords));
}

// Entries are either n*n row-major or n diagonal expression strings.
inline std::shared_ptr<dgeo::Metric> metric(const dgeo::ChartPtr& c, const std::vector<std::string>& entries) {
  const int n = c->dim();
  dgeo::ExprMatrix m(n, n);
  auto scope = c->scope();
  if (static_cast<int>(entries.size()) == n) {
    for (int i = 0; i < n; ++i) m(i, i) = dgeo::parse(entries[static_cast<std::size_t>(i)], scope);
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = dgeo::parse(entries[static_cast<std::size_t>(i * n + j)], scope);
    }
  }
  return std::make_shared<dgeo::Metric>(c, m);
}

inline dgeo::VectorField field(const dgeo::ChartPtr& c, const std::vector<std::string>& comps) {
  std::vector<dgeo::Expr> e;
  for (const auto& s : comps) e.push_back(dgeo::parse(s, c->scope()));
  return dgeo::VectorField(c, std::move(e));
}

inline dgeo::Point point(const dgeo::ChartPtr& c, std::vector<double> x) { return c->point(x); }

inline double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

inline dgeo::ChartPtr wsrc_chart() { return chart("M", {"x1", "x2", "x3", "x4", "x5", "x6"}); }
inline std::shared_ptr<dgeo::Metric> wsrc(const dgeo::ChartPtr& c) {
  return metric(c, {"exp(-2*x4)", "exp(-2*x4)", "exp(-2*x4)", "1", "1", "1"});
}
// e1..e3 = e^{x4} d1..d3, e4..e6 = d4..d6
inline dgeo::Frame wsrc_frame(const dgeo::ChartPtr& c) {
  dgeo::Frame f{c, {}, true};
  for (int a = 0; a < 6; ++a) {
    std::vector<std::string> comps(6, "0");
    comps[static_cast<std::size_t>(a)] = a < 3 ? "exp(x4)" : "1";
    f.fields.push_back(field(c, comps));
  }
  return f;
}

inline dgeo::ChartPtr wtgt_chart() { return chart("N", {"y1", "y2", "y3", "y4", "y5", "y6"}); }
inline std::shared_ptr<dgeo::Metric> wtgt(const dgeo::ChartPtr& c) {
  return metric(c, {"1", "1", "exp(2*y5)", "1", "1", "exp(2*y5)"});
}
// e3' = e^{-y5} d3, e6' = e^{-y5} d6, the rest coordinate vectors
inline dgeo::Frame wtgt_frame(const dgeo::ChartPtr& c) {
  dgeo::Frame f{c, {}, true};
  for (int a = 0; a < 6; ++a) {
    std::vector<std::string> comps(6, "0");
    comps[static_cast<std::size_t>(a)] = (a == 2 || a == 5) ? "exp(-y5)" : "1";
    f.fields.push_back(field(c, comps));
  }
  return f;
}

inline dgeo::ChartPtr sphere_chart() {
  auto c = std::make_shared<dgeo::Chart>("S2", std::vector<std::string>{"th", "ph"});
  c->add_constraint({dgeo::parse("sin(th)", c->scope()), dgeo::Constraint::Kind::Positive, "sin(th) > 0"});
  c->set_box(0, 0.3, 2.8);
  c->set_box(1, 0.0, 6.0);
  return c;
}

// Matrix of a structure on a frame from pairs J e_from = sign * e_to.
inline dgeo::ExprMatrix frame_action(int n, const std::vector<std::tuple<int, int, double>>& entries) {
  dgeo::ExprMatrix m(n, n);
  for (const auto& [from, to, sign] : entries) m(to, from) = dgeo::Expr(sign);
  return m;
}

}  // namespace testsupport
