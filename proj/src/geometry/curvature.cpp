#include "dgeo/geometry.hpp"

namespace dgeo {

namespace {

void require_chart(const Metric& g, const VectorField& x) {
  if (x.chart()->name() != g.chart().name() || x.dim() != g.dim()) {
    throw ChartMismatch("field on chart '" + x.chart()->name() + "' used with metric on '" +
                        g.chart().name() + "'");
  }
}

}  // namespace

VectorField covariant_derivative(const Metric& g, const VectorField& x, const VectorField& y) {
  require_chart(g, x);
  require_chart(g, y);
  const int n = g.dim();
  const TensorField& gam = g.christoffel();
  std::vector<Expr> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Expr s = x.apply(y[k]);
    for (int i = 0; i < n; ++i) {
      if (x[i].is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        const Expr& c = gam.at({k, i, j});
        if (c.is_zero() || y[j].is_zero()) continue;
        s += c * x[i] * y[j];
      }
    }
    out[static_cast<std::size_t>(k)] = simplify(s, g.assumptions());
  }
  return VectorField(g.chart_ptr(), std::move(out));
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.chart()->name() != y.chart()->name()) throw ChartMismatch("lie bracket across charts");
  std::vector<Expr> out(x.comps().size());
  for (int k = 0; k < x.dim(); ++k) {
    out[static_cast<std::size_t>(k)] = simplify(x.apply(y[k]) - y.apply(x[k]));
  }
  return VectorField(x.chart(), std::move(out));
}

const TensorField& Metric::riemann() const {
  std::call_once(riemann_once_, [this] {
    const int n = dim();
    const TensorField& gam = christoffel();
    TensorField r(chart_, 1, 3);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ll) {
      int l = static_cast<int>(ll);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            Expr s = differentiate(gam.at({l, j, k}), chart_->symbol(i)) -
                     differentiate(gam.at({l, i, k}), chart_->symbol(j));
            for (int m = 0; m < n; ++m) {
              const Expr& a = gam.at({l, i, m});
              const Expr& b = gam.at({m, j, k});
              if (!a.is_zero() && !b.is_zero()) s += a * b;
              const Expr& c = gam.at({l, j, m});
              const Expr& d = gam.at({m, i, k});
              if (!c.is_zero() && !d.is_zero()) s -= c * d;
            }
            Expr v = simplify(s, assume_);
            r.at({l, i, j, k}) = v;
            r.at({l, j, i, k}) = simplify(-v, assume_);
          }
        }
      }
    });
    riemann_ = std::move(r);
  });
  return riemann_;
}

const TensorField& Metric::ricci() const {
  std::call_once(ricci_once_, [this] {
    const int n = dim();
    const TensorField& r = riemann();
    TensorField ric(chart_, 0, 2);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Expr s;
        for (int i = 0; i < n; ++i) s += r.at({i, i, j, k});
        ric.at({j, k}) = simplify(s, assume_);
      }
    }
    ricci_ = std::move(ric);
  });
  return ricci_;
}

const TensorField& riemann(const Metric& g) { return g.riemann(); }
const TensorField& ricci(const Metric& g) { return g.ricci(); }

VectorField riemann_apply(const Metric& g, const VectorField& x, const VectorField& y,
                          const VectorField& z) {
  require_chart(g, x);
  require_chart(g, y);
  require_chart(g, z);
  const int n = g.dim();
  const TensorField& r = g.riemann();
  std::vector<Expr> out(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    Expr s;
    for (int i = 0; i < n; ++i) {
      if (x[i].is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        if (y[j].is_zero()) continue;
        for (int k = 0; k < n; ++k) {
          const Expr& c = r.at({l, i, j, k});
          if (c.is_zero() || z[k].is_zero()) continue;
          s += c * x[i] * y[j] * z[k];
        }
      }
    }
    out[static_cast<std::size_t>(l)] = simplify(s, g.assumptions());
  }
  return VectorField(g.chart_ptr(), std::move(out));
}

Expr ricci_apply(const Metric& g, const VectorField& x, const VectorField& y) {
  require_chart(g, x);
  require_chart(g, y);
  const TensorField& ric = g.ricci();
  Expr s;
  for (int j = 0; j < g.dim(); ++j) {
    if (x[j].is_zero()) continue;
    for (int k = 0; k < g.dim(); ++k) {
      const Expr& c = ric.at({j, k});
      if (c.is_zero() || y[k].is_zero()) continue;
      s += c * x[j] * y[k];
    }
  }
  return simplify(s, g.assumptions());
}

Expr scalar_curvature(const Metric& g) {
  const TensorField& ric = g.ricci();
  Expr s;
  for (int j = 0; j < g.dim(); ++j) {
    for (int k = 0; k < g.dim(); ++k) {
      const Expr& a = g.ginv(j, k);
      const Expr& b = ric.at({j, k});
      if (!a.is_zero() && !b.is_zero()) s += a * b;
    }
  }
  return simplify(s, g.assumptions());
}

TensorField covariant_derivative(const Metric& g, const TensorField& t) {
  const int n = g.dim();
  const int p = t.up();
  const int q = t.down();
  const int rank = p + q;
  const TensorField& gam = g.christoffel();
  TensorField out(g.chart_ptr(), p, q + 1);
  std::vector<int> idx(static_cast<std::size_t>(rank));
  std::vector<int> full(static_cast<std::size_t>(rank + 1));
  std::size_t total = t.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int a = rank - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    for (int m = 0; m < n; ++m) {
      Expr s = differentiate(t.flat(flat), g.chart().symbol(m));
      for (int a = 0; a < rank; ++a) {
        std::vector<int> j = idx;
        for (int sdx = 0; sdx < n; ++sdx) {
          j[static_cast<std::size_t>(a)] = sdx;
          const Expr& tv = t.flat(t.offset(j));
          if (tv.is_zero()) continue;
          if (a < p) {
            const Expr& c = gam.at({idx[static_cast<std::size_t>(a)], m, sdx});
            if (!c.is_zero()) s += c * tv;
          } else {
            const Expr& c = gam.at({sdx, m, idx[static_cast<std::size_t>(a)]});
            if (!c.is_zero()) s -= c * tv;
          }
        }
      }
      std::copy(idx.begin(), idx.end(), full.begin());
      full[static_cast<std::size_t>(rank)] = m;
      out.flat(out.offset(full)) = simplify(s, g.assumptions());
    }
  }
  return out;
}

}  // namespace dgeo
