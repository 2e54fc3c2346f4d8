#include <cmath>

#include "dgeo/rmap.hpp"

namespace dgeo {

namespace {

Point shifted(const Point& p, Symbol s, double h) {
  Point q = p;
  q.set(s, p.at(s) + h);
  return q;
}

// Fourth-order central difference of a vector-valued point function.
template <typename F>
auto central(const Point& p, Symbol s, double h, F&& f) {
  using R = decltype(f(p));
  R a = f(shifted(p, s, -2 * h));
  R b = f(shifted(p, s, -h));
  R c = f(shifted(p, s, h));
  R d = f(shifted(p, s, 2 * h));
  R out = ((a - d) + 8.0 * (c - b)) / (12.0 * h);
  return out;
}

}  // namespace

Eigen::VectorXd ChristoffelJet::riemann(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                        const Eigen::VectorXd& c) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      double ab = a[i] * b[j];
      if (ab == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        if (c[k] == 0.0) continue;
        double w = ab * c[k];
        for (int l = 0; l < n; ++l) {
          double r = dG(i, l, j, k) - dG(j, l, i, k);
          for (int m = 0; m < n; ++m) r += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
          out[l] += w * r;
        }
      }
    }
  }
  return out;
}

Eigen::VectorXd ChristoffelJet::nabla(const Point& p, const Eigen::VectorXd& v, const VectorField& x) const {
  Eigen::VectorXd xv = x.eval(p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (v[i] == 0.0) continue;
    Symbol s = x.chart()->symbol(i);
    for (int k = 0; k < n; ++k) {
      Expr d = differentiate(x[k], s);
      double dv = d.is_zero() ? 0.0 : evaluate(d, p);
      double gsum = 0.0;
      for (int j = 0; j < n; ++j) gsum += G(k, i, j) * xv[j];
      out[k] += v[i] * (dv + gsum);
    }
  }
  return out;
}

ChristoffelJetSource::ChristoffelJetSource(std::shared_ptr<const Metric> g) : g_(std::move(g)) {
  symbolic_ = g_->has_symbolic_inverse();
  if (!symbolic_) return;
  const int n = g_->dim();
  const TensorField& gam = g_->christoffel();
  dgamma_.resize(static_cast<std::size_t>(n * n * n * n));
  for (int l = 0; l < n; ++l) {
    Symbol s = g_->chart().symbol(l);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          Expr d = differentiate(gam.at({k, i, j}), s);
          dgamma_[static_cast<std::size_t>(((l * n + k) * n + i) * n + j)] = d;
          dgamma_[static_cast<std::size_t>(((l * n + k) * n + j) * n + i)] = d;
        }
      }
    }
  }
}

ChristoffelJet ChristoffelJetSource::at(const Point& p) const {
  const int n = g_->dim();
  ChristoffelJet j;
  j.n = n;
  j.gamma = christoffel_at(*g_, p).gamma;
  j.dgamma.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
  if (symbolic_) {
    for (std::size_t k = 0; k < dgamma_.size(); ++k) {
      if (!dgamma_[k].is_zero()) j.dgamma[k] = evaluate(dgamma_[k], p);
    }
    return j;
  }
  const double h = 1e-3;
  auto gam = [&](const Point& q) {
    auto v = christoffel_at(*g_, q).gamma;
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
  };
  for (int l = 0; l < n; ++l) {
    Eigen::VectorXd d = central(p, g_->chart().symbol(l), h, gam);
    for (int r = 0; r < n * n * n; ++r) j.dgamma[static_cast<std::size_t>(l * n * n * n + r)] = d[r];
  }
  return j;
}

Eigen::MatrixXd projector_from(const Eigen::MatrixXd& g, const std::vector<Eigen::VectorXd>& onb) {
  const auto n = g.rows();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (const auto& u : onb) p += u * (g * u).transpose();
  return p;
}

double DistributionAt::norm(const Eigen::VectorXd& a) const { return std::sqrt(std::max(0.0, inner(a, a))); }

Eigen::MatrixXd DistributionAt::w(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (x[k] != 0.0) out += x[k] * W[static_cast<std::size_t>(k)];
  }
  return out;
}

Eigen::MatrixXd DistributionAt::dw(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (!has_second) {
    throw FramesRequired("derivative of a frame-built tensor needs declared expression-valued frames");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int l = 0; l < n; ++l) {
    if (x[l] == 0.0) continue;
    for (int k = 0; k < n; ++k) {
      if (y[k] != 0.0) out += x[l] * y[k] * DW[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
    }
  }
  return out;
}

Eigen::VectorXd DistributionAt::T(const Eigen::VectorXd& e, const Eigen::VectorXd& f) const {
  Eigen::MatrixXd refl = Q() - P;
  return refl * (w(P * e) * f);
}

Eigen::VectorXd DistributionAt::A(const Eigen::VectorXd& e, const Eigen::VectorXd& f) const {
  Eigen::MatrixXd refl = Q() - P;
  return refl * (w(Q() * e) * f);
}

Eigen::VectorXd DistributionAt::nabla_T(const Eigen::VectorXd& x, const Eigen::VectorXd& e,
                                        const Eigen::VectorXd& f) const {
  Eigen::MatrixXd refl = Q() - P;
  Eigen::MatrixXd wx = w(x);
  Eigen::VectorXd pe = P * e;
  return -2.0 * wx * (w(pe) * f) + refl * (dw(x, pe) * f) + refl * (w(wx * e) * f);
}

Eigen::VectorXd DistributionAt::nabla_A(const Eigen::VectorXd& x, const Eigen::VectorXd& e,
                                        const Eigen::VectorXd& f) const {
  Eigen::MatrixXd refl = Q() - P;
  Eigen::MatrixXd wx = w(x);
  Eigen::VectorXd qe = Q() * e;
  return -2.0 * wx * (w(qe) * f) + refl * (dw(x, qe) * f) - refl * (w(wx * e) * f);
}

Eigen::VectorXd DistributionAt::S(const Eigen::VectorXd& d, const Eigen::VectorXd& v) const {
  return P * (w(v) * d);
}

Eigen::VectorXd DistributionAt::nabla_S(const Eigen::VectorXd& x, const Eigen::VectorXd& d,
                                        const Eigen::VectorXd& v) const {
  return w(x) * (w(v) * d) + P * (dw(x, v) * d);
}

Eigen::VectorXd DistributionAt::normal_curvature(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                                 const Eigen::VectorXd& xi) const {
  Eigen::MatrixXd q = Q();
  Eigen::MatrixXd wa = w(a), wb = w(b);
  return q * (jet.riemann(a, b, xi) + wa * (wb * xi) - wb * (wa * xi));
}

Eigen::VectorXd DistributionAt::normal_nabla(const Point& p, const Eigen::VectorXd& a, const VectorField& x) const {
  return Q() * jet.nabla(p, a, x);
}

namespace {

// W_k and, when dp2 is given, (∇_l W)_k from P, ∂P, ∂²P and the Γ jet.
void assemble(DistributionAt& d, const std::vector<Eigen::MatrixXd>& dp,
              const std::vector<std::vector<Eigen::MatrixXd>>* dp2) {
  const int n = d.n;
  const ChristoffelJet& j = d.jet;
  auto gmat = [&](int k) {  // (Γ_k)^i_m = Γ^i_{km}
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) m(i, c) = j.G(i, k, c);
    return m;
  };
  std::vector<Eigen::MatrixXd> gk(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) gk[static_cast<std::size_t>(k)] = gmat(k);
  d.W.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto& g = gk[static_cast<std::size_t>(k)];
    d.W[static_cast<std::size_t>(k)] = dp[static_cast<std::size_t>(k)] + g * d.P - d.P * g;
  }
  if (!dp2) return;
  d.has_second = true;
  d.DW.assign(static_cast<std::size_t>(n), std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(n)));
  for (int l = 0; l < n; ++l) {
    const auto& gl = gk[static_cast<std::size_t>(l)];
    for (int k = 0; k < n; ++k) {
      // ∂_l Γ_k
      Eigen::MatrixXd dg(n, n);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c) dg(i, c) = j.dG(l, i, k, c);
      const auto& g = gk[static_cast<std::size_t>(k)];
      const auto& dpl = dp[static_cast<std::size_t>(l)];
      Eigen::MatrixXd dlw = (*dp2)[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] + dg * d.P + g * dpl -
                            dpl * g - d.P * dg;
      Eigen::MatrixXd out = dlw + gl * d.W[static_cast<std::size_t>(k)] - d.W[static_cast<std::size_t>(k)] * gl;
      // - Γ^m_{lk} W_m
      for (int m = 0; m < n; ++m) {
        double c = j.G(m, l, k);
        if (c != 0.0) out -= c * d.W[static_cast<std::size_t>(m)];
      }
      d.DW[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] = std::move(out);
    }
  }
}

}  // namespace

DistributionJet::DistributionJet(std::shared_ptr<const Metric> g, const std::vector<VectorField>& onb)
    : g_(std::move(g)), gamma_(g_) {
  const int n = g_->dim();
  const ExprMatrix& gm = g_->matrix();
  p_ = ExprMatrix(n, n);
  for (const auto& u : onb) {
    if (u.chart()->name() != g_->chart().name() || u.dim() != n) {
      throw ChartMismatch("distribution frame does not live on chart '" + g_->chart().name() + "'");
    }
    for (int j = 0; j < n; ++j) {
      Expr gu;
      for (int c = 0; c < n; ++c) {
        if (!gm(j, c).is_zero() && !u[c].is_zero()) gu += gm(j, c) * u[c];
      }
      if (gu.is_zero()) continue;
      for (int i = 0; i < n; ++i) {
        if (!u[i].is_zero()) p_(i, j) += u[i] * gu;
      }
    }
  }
  p_ = p_.simplified(g_->assumptions());
  dp_.resize(static_cast<std::size_t>(n));
  ddp_.assign(static_cast<std::size_t>(n), std::vector<ExprMatrix>(static_cast<std::size_t>(n)));
  for (int k = 0; k < n; ++k) {
    ExprMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = differentiate(p_(i, j), g_->chart().symbol(k));
    dp_[static_cast<std::size_t>(k)] = m.simplified(g_->assumptions());
  }
  for (int l = 0; l < n; ++l) {
    for (int k = l; k < n; ++k) {
      ExprMatrix m(n, n);
      const ExprMatrix& src = dp_[static_cast<std::size_t>(k)];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = differentiate(src(i, j), g_->chart().symbol(l));
      ddp_[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] = m;
      ddp_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = m;
    }
  }
}

DistributionAt DistributionJet::at(const Point& p) const {
  const int n = g_->dim();
  DistributionAt d;
  d.n = n;
  d.g = g_->at(p);
  d.P = p_.eval(p);
  d.jet = gamma_.at(p);
  std::vector<Eigen::MatrixXd> dp;
  std::vector<std::vector<Eigen::MatrixXd>> dp2(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) dp.push_back(dp_[static_cast<std::size_t>(k)].eval(p));
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) dp2[static_cast<std::size_t>(l)].push_back(
        ddp_[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)].eval(p));
  }
  assemble(d, dp, &dp2);
  return d;
}

DistributionAt numeric_distribution_at(const ChristoffelJetSource& gamma,
                                       const std::function<Eigen::MatrixXd(const Point&)>& proj, const Point& p,
                                       double h) {
  const Metric& g = gamma.metric();
  const int n = g.dim();
  DistributionAt d;
  d.n = n;
  d.g = g.at(p);
  d.P = proj(p);
  d.jet = gamma.at(p);
  std::vector<Eigen::MatrixXd> dp;
  for (int k = 0; k < n; ++k) dp.push_back(central(p, g.chart().symbol(k), h, proj));
  assemble(d, dp, nullptr);
  return d;
}

}  // namespace dgeo
