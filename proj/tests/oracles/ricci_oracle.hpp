#pragma once

// Independent Ricci oracle for tests. Differentiates sampled metric values
// directly (first and second central differences) and assembles the lowered
// curvature from the second-derivative formula, never touching the engine's
// Christoffel or curvature code.

#include <Eigen/Dense>
#include <functional>

namespace oracle {

using MetricFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

inline Eigen::MatrixXd ricci(const MetricFn& g, const Eigen::VectorXd& x, double h = 1e-3) {
  const int n = static_cast<int>(x.size());
  auto e = [&](int i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[i] = h;
    return v;
  };
  // dg[a](i,j) = ∂_a g_ij ; ddg[a*n+b](i,j) = ∂_a ∂_b g_ij
  std::vector<Eigen::MatrixXd> dg(n), ddg(n * n);
  Eigen::MatrixXd g0 = g(x);
  for (int a = 0; a < n; ++a) {
    dg[a] = (-g(x + 2 * e(a)) + 8 * g(x + e(a)) - 8 * g(x - e(a)) + g(x - 2 * e(a))) / (12 * h);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) {
        ddg[a * n + b] = (-g(x + 2 * e(a)) + 16 * g(x + e(a)) - 30 * g0 + 16 * g(x - e(a)) - g(x - 2 * e(a))) /
                         (12 * h * h);
      } else {
        ddg[a * n + b] = (g(x + e(a) + e(b)) - g(x + e(a) - e(b)) - g(x - e(a) + e(b)) + g(x - e(a) - e(b))) /
                         (4 * h * h);
      }
    }
  }
  Eigen::MatrixXd inv = g0.inverse();
  // Γ^k_{ij}
  std::vector<double> G(n * n * n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l) s += inv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        G[(k * n + i) * n + j] = 0.5 * s;
      }
  auto Gm = [&](int k, int i, int j) { return G[(k * n + i) * n + j]; };
  auto dd = [&](int a, int b, int i, int j) { return ddg[a * n + b](i, j); };
  // R_{rsmv} = 1/2 (∂m∂s g_rv + ∂v∂r g_sm - ∂m∂r g_sv - ∂v∂s g_rm)
  //            + g_zh (Γ^z_sm Γ^h_rv - Γ^z_sv Γ^h_rm)
  auto R = [&](int r, int s, int m, int v) {
    double out = 0.5 * (dd(m, s, r, v) + dd(v, r, s, m) - dd(m, r, s, v) - dd(v, s, r, m));
    for (int z = 0; z < n; ++z)
      for (int w = 0; w < n; ++w) out += g0(z, w) * (Gm(z, s, m) * Gm(w, r, v) - Gm(z, s, v) * Gm(w, r, m));
    return out;
  };
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s)
    for (int v = 0; v < n; ++v) {
      double acc = 0;
      for (int r = 0; r < n; ++r)
        for (int l = 0; l < n; ++l) acc += inv(r, l) * R(l, s, r, v);
      ric(s, v) = acc;
    }
  return ric;
}

}  // namespace oracle
