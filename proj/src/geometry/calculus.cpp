#include <cmath>

#include "dgeo/geometry.hpp"

namespace dgeo {

VectorField gradient(const Metric& g, const Expr& f) {
  const int n = g.dim();
  std::vector<Expr> df(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) df[static_cast<std::size_t>(i)] = differentiate(f, g.chart().symbol(i));
  std::vector<Expr> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Expr s;
    for (int i = 0; i < n; ++i) {
      const Expr& a = g.ginv(i, j);
      if (!a.is_zero() && !df[static_cast<std::size_t>(i)].is_zero()) s += a * df[static_cast<std::size_t>(i)];
    }
    out[static_cast<std::size_t>(j)] = simplify(s, g.assumptions());
  }
  return VectorField(g.chart_ptr(), std::move(out));
}

TensorField hessian(const Metric& g, const Expr& f) {
  const int n = g.dim();
  const TensorField& gam = g.christoffel();
  std::vector<Expr> df(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) df[static_cast<std::size_t>(i)] = differentiate(f, g.chart().symbol(i));
  TensorField h(g.chart_ptr(), 0, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Expr s = differentiate(df[static_cast<std::size_t>(i)], g.chart().symbol(j));
      for (int k = 0; k < n; ++k) {
        const Expr& c = gam.at({k, i, j});
        if (!c.is_zero() && !df[static_cast<std::size_t>(k)].is_zero()) s -= c * df[static_cast<std::size_t>(k)];
      }
      h.at({i, j}) = simplify(s, g.assumptions());
    }
  }
  return h;
}

Expr hessian_apply(const Metric& g, const Expr& f, const VectorField& x, const VectorField& y) {
  return g.inner(covariant_derivative(g, x, gradient(g, f)), y);
}

Expr divergence(const Metric& g, const VectorField& x) {
  Expr root = simplify(sqrt(g.det()), g.assumptions());
  Expr s;
  for (int i = 0; i < g.dim(); ++i) {
    if (x[i].is_zero()) continue;
    s += differentiate(root * x[i], g.chart().symbol(i));
  }
  return simplify(s / root, g.assumptions());
}

Expr divergence_frame(const Metric& g, const VectorField& x, const Frame& frame) {
  Expr s;
  for (const auto& e : frame.fields) s += g.inner(covariant_derivative(g, e, x), e);
  return simplify(s, g.assumptions());
}

TensorField lie_derivative_metric(const Metric& g, const VectorField& x) {
  const int n = g.dim();
  TensorField out(g.chart_ptr(), 0, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Expr s = x.apply(g.g(i, j));
      for (int k = 0; k < n; ++k) {
        if (!g.g(k, j).is_zero()) s += g.g(k, j) * differentiate(x[k], g.chart().symbol(i));
        if (!g.g(i, k).is_zero()) s += g.g(i, k) * differentiate(x[k], g.chart().symbol(j));
      }
      out.at({i, j}) = simplify(s, g.assumptions());
    }
  }
  return out;
}

Expr lie_derivative_apply(const Metric& g, const VectorField& x, const VectorField& y,
                          const VectorField& z) {
  return simplify(g.inner(covariant_derivative(g, y, x), z) + g.inner(covariant_derivative(g, z, x), y),
                  g.assumptions());
}

std::vector<Eigen::VectorXd> orthonormalize(const Metric& g, const std::vector<Eigen::VectorXd>& vecs,
                                            const Point& p) {
  Eigen::MatrixXd m = g.at(p);
  std::vector<Eigen::VectorXd> out;
  for (const auto& v0 : vecs) {
    Eigen::VectorXd v = v0;
    double scale = std::sqrt(std::max(0.0, v0.dot(m * v0)));
    // Two passes of modified Gram-Schmidt keep the result orthogonal to
    // working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : out) v -= e.dot(m * v) * e;
    }
    double nrm = std::sqrt(std::max(0.0, v.dot(m * v)));
    if (!(nrm > 1e-10 * std::max(1.0, scale))) {
      throw RankDeficient("fields are linearly dependent at the sample point");
    }
    out.push_back(v / nrm);
  }
  return out;
}

std::vector<Eigen::VectorXd> orthonormalize(const Metric& g, const std::vector<VectorField>& fields,
                                            const Point& p) {
  std::vector<Eigen::VectorXd> vecs;
  vecs.reserve(fields.size());
  for (const auto& f : fields) vecs.push_back(f.eval(p));
  return orthonormalize(g, vecs, p);
}

std::vector<Eigen::VectorXd> orthogonal_complement(const Metric& g, const std::vector<Eigen::VectorXd>& basis,
                                                   const Point& p) {
  Eigen::MatrixXd m = g.at(p);
  const int n = g.dim();
  std::vector<Eigen::VectorXd> span;
  auto push = [&](Eigen::VectorXd v) {
    double scale = std::sqrt(std::max(0.0, v.dot(m * v)));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : span) v -= e.dot(m * v) * e;
    }
    double nrm = std::sqrt(std::max(0.0, v.dot(m * v)));
    if (nrm > 1e-9 * std::max(1.0, scale)) span.push_back(v / nrm);
  };
  for (const auto& b : basis) push(b);
  const std::size_t base = span.size();
  for (int i = 0; i < n && static_cast<int>(span.size()) < n; ++i) {
    push(Eigen::VectorXd::Unit(n, i));
  }
  return {span.begin() + static_cast<std::ptrdiff_t>(base), span.end()};
}

double frame_orthonormality_residual(const Metric& g, const Frame& f, const std::vector<Point>& pts) {
  double worst = 0.0;
  for (const auto& p : pts) {
    Eigen::MatrixXd m = g.at(p);
    std::vector<Eigen::VectorXd> v;
    for (const auto& e : f.fields) v.push_back(e.eval(p));
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        double d = v[i].dot(m * v[j]) - (i == j ? 1.0 : 0.0);
        worst = std::max(worst, std::abs(d));
      }
    }
  }
  return worst;
}

}  // namespace dgeo
