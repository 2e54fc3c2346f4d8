// Finite-difference Ricci: uses only pointwise metric values.

#include "dgeo/geometry.hpp"

namespace dgeo {

namespace {

// Values of g at chart coordinates x; other symbols of base (frozen
// parameters) are kept.
Eigen::MatrixXd metric_at(const Metric& g, const Point& base, const Eigen::VectorXd& x) {
  Point q = base;
  for (int i = 0; i < g.dim(); ++i) q.set(g.chart().symbol(i), x[i]);
  return g.matrix().eval(q);
}

// Fourth-order central difference of a matrix-valued function along axis l.
template <class F>
Eigen::MatrixXd diff4(const F& f, const Eigen::VectorXd& x, int l, double h) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(x.size());
  e[l] = h;
  return (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h);
}

// Γ^k_{ij} at x, flattened as a (n*n) x n matrix with row k*n+i, column j.
Eigen::MatrixXd fd_gamma(const Metric& g, const Point& base, const Eigen::VectorXd& x, double h) {
  const int n = g.dim();
  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(n));
  auto gm = [&](const Eigen::VectorXd& y) { return metric_at(g, base, y); };
  for (int l = 0; l < n; ++l) dg[static_cast<std::size_t>(l)] = diff4(gm, x, l, h);
  Eigen::MatrixXd inv = metric_at(g, base, x).inverse();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          s += inv(k, l) * (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) -
                            dg[static_cast<std::size_t>(l)](i, j));
        }
        out(k * n + i, j) = 0.5 * s;
      }
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd fd_ricci(const Metric& g, const Point& p, double h) {
  const int n = g.dim();
  Eigen::VectorXd x = g.chart().coords_of(p);
  auto gam = [&](const Eigen::VectorXd& y) { return fd_gamma(g, p, y, h); };
  Eigen::MatrixXd G = gam(x);
  std::vector<Eigen::MatrixXd> dG(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) dG[static_cast<std::size_t>(l)] = diff4(gam, x, l, h);
  auto Gv = [&](int k, int i, int j) { return G(k * n + i, j); };
  auto dGv = [&](int l, int k, int i, int j) { return dG[static_cast<std::size_t>(l)](k * n + i, j); };
  // Ric_{jk} = R^i_{ijk} = ∂_i Γ^i_{jk} - ∂_j Γ^i_{ik} + Γ^i_{im}Γ^m_{jk} - Γ^i_{jm}Γ^m_{ik}
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        s += dGv(i, i, j, k) - dGv(j, i, i, k);
        for (int m = 0; m < n; ++m) s += Gv(i, i, m) * Gv(m, j, k) - Gv(i, j, m) * Gv(m, i, k);
      }
      ric(j, k) = s;
    }
  }
  return ric;
}

}  // namespace dgeo
