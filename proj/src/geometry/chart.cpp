#include <cmath>
#include <random>
#include <set>

#include "dgeo/fields.hpp"

namespace dgeo {

Chart::Chart(std::string name, std::vector<std::string> coords)
    : name_(std::move(name)), coords_(std::move(coords)) {
  if (coords_.empty()) throw GeometryError("chart '" + name_ + "' has no coordinates");
  std::set<std::string> seen;
  for (const auto& c : coords_) {
    if (!seen.insert(c).second) {
      throw GeometryError("chart '" + name_ + "': duplicate coordinate '" + c + "'");
    }
    syms_.push_back(intern(c));
  }
  box_.assign(coords_.size(), {0.1, 1.0});
}

std::optional<int> Chart::index_of(std::string_view coord) const {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == coord) return static_cast<int>(i);
  }
  return std::nullopt;
}

void Chart::add_constraint(Constraint c) { constraints_.push_back(std::move(c)); }

void Chart::set_box(int i, double lo, double hi) {
  if (!(lo < hi)) throw GeometryError("chart '" + name_ + "': empty sampling interval");
  box_.at(static_cast<std::size_t>(i)) = {lo, hi};
}

Point Chart::point(std::span<const double> values) const {
  if (values.size() != syms_.size()) {
    throw ChartMismatch("chart '" + name_ + "' expects " + std::to_string(dim()) + " coordinates");
  }
  return Point(syms_, values);
}

Eigen::VectorXd Chart::coords_of(const Point& p) const {
  Eigen::VectorXd x(dim());
  for (int i = 0; i < dim(); ++i) x[i] = p.at(symbol(i));
  return x;
}

bool Chart::admissible(const Point& p) const {
  for (const auto& c : constraints_) {
    double v;
    try {
      v = evaluate(c.expr, p);
    } catch (const DomainError&) {
      return false;
    }
    if (!std::isfinite(v)) return false;
    if (c.kind == Constraint::Kind::Positive ? !(v > 0.0) : !(std::abs(v) > 1e-12)) return false;
  }
  return true;
}

Assumptions Chart::assumptions() const {
  Assumptions a;
  for (const auto& c : constraints_) a.add_nonzero(c.expr);
  return a;
}

ParseScope Chart::scope() const { return ParseScope(coords_); }

std::vector<Point> sample_points(const Chart& chart, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Point> out;
  std::vector<double> x(static_cast<std::size_t>(chart.dim()));
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * (count + 1)) {
      throw GeometryError("chart '" + chart.name() +
                          "': sampling box has no admissible points under its constraints");
    }
    for (int i = 0; i < chart.dim(); ++i) {
      auto [lo, hi] = chart.box(i);
      x[static_cast<std::size_t>(i)] = lo + (hi - lo) * unit();
    }
    Point p = chart.point(x);
    if (chart.admissible(p)) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace dgeo
