#pragma once

// Charts, sample points and expression-valued fields over a chart.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgeo/expr.hpp"

namespace dgeo {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChartMismatch : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// A configuration the engine deliberately does not handle.
class UnsupportedConfiguration : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Raised when a derivative of a frame-built tensor is requested but only
// per-point frames are available.
class FramesRequired : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class RankDeficient : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

struct Constraint {
  enum class Kind { Nonzero, Positive };
  Expr expr;
  Kind kind = Kind::Nonzero;
  std::string text;
};

class Chart {
 public:
  Chart(std::string name, std::vector<std::string> coords);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  Symbol symbol(int i) const { return syms_[static_cast<std::size_t>(i)]; }
  Expr var(int i) const { return Expr::var(symbol(i)); }
  std::optional<int> index_of(std::string_view coord) const;

  void add_constraint(Constraint c);
  const std::vector<Constraint>& constraints() const { return constraints_; }

  // Sampling box, one interval per coordinate. Defaults to [0.1, 1].
  void set_box(int i, double lo, double hi);
  std::pair<double, double> box(int i) const { return box_[static_cast<std::size_t>(i)]; }

  Point point(std::span<const double> values) const;
  Eigen::VectorXd coords_of(const Point& p) const;
  // True when every constraint holds and evaluates without domain error.
  bool admissible(const Point& p) const;
  // Nonzero facts implied by the constraints.
  Assumptions assumptions() const;
  ParseScope scope() const;

 private:
  std::string name_;
  std::vector<std::string> coords_;
  std::vector<Symbol> syms_;
  std::vector<Constraint> constraints_;
  std::vector<std::pair<double, double>> box_;
};

using ChartPtr = std::shared_ptr<const Chart>;

// Seeded uniform points in the chart box that satisfy its constraints.
// Uses mt19937_64 with the top 53 bits mapped to [0, 1).
std::vector<Point> sample_points(const Chart& chart, std::size_t count, std::uint64_t seed);

// Dense matrix of expressions.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  ExprMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols)) {}
  static ExprMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Expr& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Expr& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

  Eigen::MatrixXd eval(const Point& p) const;
  ExprMatrix simplified(const Assumptions& a = {}) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Expr> a_;
};

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b);

class VectorField {
 public:
  VectorField() = default;
  VectorField(ChartPtr chart, std::vector<Expr> comps);
  static VectorField zero(ChartPtr chart);
  static VectorField coordinate(ChartPtr chart, int i);

  const ChartPtr& chart() const { return chart_; }
  int dim() const { return static_cast<int>(c_.size()); }
  const Expr& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<Expr>& comps() const { return c_; }

  Eigen::VectorXd eval(const Point& p) const;
  VectorField simplified(const Assumptions& a = {}) const;
  // Directional derivative X(f).
  Expr apply(const Expr& f) const;

 private:
  ChartPtr chart_;
  std::vector<Expr> c_;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& f, const VectorField& a);
VectorField operator-(const VectorField& a);
// Matrix (1,1) action on components.
VectorField apply(const ExprMatrix& m, const VectorField& v);

// Components with p contravariant then q covariant indices, row-major.
class TensorField {
 public:
  TensorField() = default;
  TensorField(ChartPtr chart, int p, int q);

  const ChartPtr& chart() const { return chart_; }
  int up() const { return p_; }
  int down() const { return q_; }
  int dim() const { return chart_->dim(); }
  std::size_t size() const { return c_.size(); }

  Expr& at(std::initializer_list<int> idx);
  const Expr& at(std::initializer_list<int> idx) const;
  Expr& flat(std::size_t k) { return c_[k]; }
  const Expr& flat(std::size_t k) const { return c_[k]; }
  std::size_t offset(std::span<const int> idx) const;

  TensorField simplified(const Assumptions& a = {}) const;
  std::vector<double> eval(const Point& p) const;

 private:
  ChartPtr chart_;
  int p_ = 0;
  int q_ = 0;
  std::vector<Expr> c_;
};

struct Frame {
  ChartPtr chart;
  std::vector<VectorField> fields;
  bool orthonormal = false;

  std::size_t size() const { return fields.size(); }
  const VectorField& operator[](std::size_t i) const { return fields[i]; }
};

// Runs fn(i) for i in [0, n) on a small worker pool; each index is handled
// exactly once, so callers writing to slot i stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace dgeo
