#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "dgeo/fields.hpp"

namespace dgeo {

// ---------------------------------------------------------------------------
// ExprMatrix

ExprMatrix ExprMatrix::identity(int n) {
  ExprMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Expr(1.0);
  return m;
}

Eigen::MatrixXd ExprMatrix::eval(const Point& p) const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = evaluate((*this)(i, j), p);
  }
  return m;
}

ExprMatrix ExprMatrix::simplified(const Assumptions& a) const {
  ExprMatrix m(rows_, cols_);
  for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = simplify(a_[k], a);
  return m;
}

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.cols() != b.rows()) throw GeometryError("matrix product: shape mismatch");
  ExprMatrix m(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      Expr s;
      for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      m(i, j) = s;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(ChartPtr chart, std::vector<Expr> comps)
    : chart_(std::move(chart)), c_(std::move(comps)) {
  if (static_cast<int>(c_.size()) != chart_->dim()) {
    throw ChartMismatch("vector field has " + std::to_string(c_.size()) +
                        " components on chart '" + chart_->name() + "'");
  }
}

VectorField VectorField::zero(ChartPtr chart) {
  std::vector<Expr> c(static_cast<std::size_t>(chart->dim()));
  return VectorField(std::move(chart), std::move(c));
}

VectorField VectorField::coordinate(ChartPtr chart, int i) {
  std::vector<Expr> c(static_cast<std::size_t>(chart->dim()));
  c.at(static_cast<std::size_t>(i)) = Expr(1.0);
  return VectorField(std::move(chart), std::move(c));
}

Eigen::VectorXd VectorField::eval(const Point& p) const {
  Eigen::VectorXd v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = evaluate(c_[static_cast<std::size_t>(i)], p);
  return v;
}

VectorField VectorField::simplified(const Assumptions& a) const {
  std::vector<Expr> c;
  c.reserve(c_.size());
  for (const auto& e : c_) c.push_back(simplify(e, a));
  return VectorField(chart_, std::move(c));
}

Expr VectorField::apply(const Expr& f) const {
  Expr s;
  for (int i = 0; i < dim(); ++i) {
    const Expr& ci = c_[static_cast<std::size_t>(i)];
    if (ci.is_zero()) continue;
    Expr d = differentiate(f, chart_->symbol(i));
    if (!d.is_zero()) s += ci * d;
  }
  return s;
}

namespace {

void same_chart(const VectorField& a, const VectorField& b) {
  if (a.chart() != b.chart() && a.chart()->name() != b.chart()->name()) {
    throw ChartMismatch("fields live on charts '" + a.chart()->name() + "' and '" +
                        b.chart()->name() + "'");
  }
}

}  // namespace

VectorField operator+(const VectorField& a, const VectorField& b) {
  same_chart(a, b);
  std::vector<Expr> c(a.comps().size());
  for (int i = 0; i < a.dim(); ++i) c[static_cast<std::size_t>(i)] = a[i] + b[i];
  return VectorField(a.chart(), std::move(c));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  same_chart(a, b);
  std::vector<Expr> c(a.comps().size());
  for (int i = 0; i < a.dim(); ++i) c[static_cast<std::size_t>(i)] = a[i] - b[i];
  return VectorField(a.chart(), std::move(c));
}

VectorField operator*(const Expr& f, const VectorField& a) {
  std::vector<Expr> c(a.comps().size());
  for (int i = 0; i < a.dim(); ++i) c[static_cast<std::size_t>(i)] = f * a[i];
  return VectorField(a.chart(), std::move(c));
}

VectorField operator-(const VectorField& a) { return Expr(-1.0) * a; }

VectorField apply(const ExprMatrix& m, const VectorField& v) {
  if (m.cols() != v.dim() || m.rows() != v.dim()) throw GeometryError("matrix/field shape mismatch");
  std::vector<Expr> c(v.comps().size());
  for (int i = 0; i < m.rows(); ++i) {
    Expr s;
    for (int j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    c[static_cast<std::size_t>(i)] = s;
  }
  return VectorField(v.chart(), std::move(c));
}

// ---------------------------------------------------------------------------
// TensorField

TensorField::TensorField(ChartPtr chart, int p, int q) : chart_(std::move(chart)), p_(p), q_(q) {
  std::size_t n = 1;
  for (int i = 0; i < p + q; ++i) n *= static_cast<std::size_t>(chart_->dim());
  c_.resize(n);
}

std::size_t TensorField::offset(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != p_ + q_) throw GeometryError("tensor index rank mismatch");
  std::size_t k = 0;
  for (int i : idx) k = k * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(i);
  return k;
}

Expr& TensorField::at(std::initializer_list<int> idx) {
  return c_[offset(std::span<const int>(idx.begin(), idx.size()))];
}

const Expr& TensorField::at(std::initializer_list<int> idx) const {
  return c_[offset(std::span<const int>(idx.begin(), idx.size()))];
}

TensorField TensorField::simplified(const Assumptions& a) const {
  TensorField t(chart_, p_, q_);
  for (std::size_t k = 0; k < c_.size(); ++k) t.c_[k] = simplify(c_[k], a);
  return t;
}

std::vector<double> TensorField::eval(const Point& p) const {
  std::vector<double> v(c_.size());
  for (std::size_t k = 0; k < c_.size(); ++k) v[k] = c_[k].is_zero() ? 0.0 : evaluate(c_[k], p);
  return v;
}

// ---------------------------------------------------------------------------

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t workers = std::min<std::size_t>(std::min<std::size_t>(hw, 8), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dgeo
