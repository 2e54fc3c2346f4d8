#include <Eigen/SVD>

#include "dgeo/rmap.hpp"

namespace dgeo {

Eigen::VectorXd AlongMap::eval(const Point& p) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(comps.size()));
  for (std::size_t a = 0; a < comps.size(); ++a) {
    v[static_cast<Eigen::Index>(a)] = comps[a].is_zero() ? 0.0 : evaluate(comps[a], p);
  }
  return v;
}

SmoothMap::SmoothMap(ChartPtr source, ChartPtr target, std::vector<Expr> components)
    : source_(std::move(source)), target_(std::move(target)), comps_(std::move(components)) {
  const int m = source_->dim();
  const int n = target_->dim();
  if (static_cast<int>(comps_.size()) != n) {
    throw ChartMismatch("map needs " + std::to_string(n) + " components for chart '" + target_->name() + "'");
  }
  Assumptions assume = source_->assumptions();
  for (auto& c : comps_) c = simplify(c, assume);
  for (int a = 0; a < n; ++a) subst_[target_->symbol(a)] = comps_[static_cast<std::size_t>(a)];
  jac_ = ExprMatrix(n, m);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < m; ++i) {
      jac_(a, i) = simplify(differentiate(comps_[static_cast<std::size_t>(a)], source_->symbol(i)), assume);
    }
  }
  for (int a = 0; a < n; ++a) {
    ExprMatrix h(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        h(i, j) = simplify(differentiate(jac_(a, i), source_->symbol(j)), assume);
        h(j, i) = h(i, j);
      }
    }
    hess_.push_back(std::move(h));
  }
}

Point SmoothMap::image(const Point& p) const {
  std::vector<double> y;
  for (const auto& c : comps_) y.push_back(evaluate(c, p));
  return target_->point(y);
}

int SmoothMap::rank_at(const Point& p, double tol) const {
  Eigen::MatrixXd j = jacobian_at(p);
  if (j.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
  const auto& s = svd.singularValues();
  double cut = tol * std::max(1.0, s.size() ? s[0] : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s[i] > cut ? 1 : 0;
  return r;
}

Expr SmoothMap::pullback(const Expr& f) const { return substitute(f, subst_); }

AlongMap SmoothMap::compose(const VectorField& on_target) const {
  if (on_target.chart()->name() != target_->name() || on_target.dim() != target_->dim()) {
    throw ChartMismatch("field does not live on target chart '" + target_->name() + "'");
  }
  AlongMap out{source_, target_, {}};
  for (const auto& c : on_target.comps()) out.comps.push_back(pullback(c));
  return out;
}

AlongMap SmoothMap::pushforward(const VectorField& x) const {
  if (x.chart()->name() != source_->name() || x.dim() != source_->dim()) {
    throw ChartMismatch("field does not live on source chart '" + source_->name() + "'");
  }
  AlongMap out{source_, target_, {}};
  const Assumptions assume = source_->assumptions();
  for (int a = 0; a < jac_.rows(); ++a) {
    Expr s;
    for (int i = 0; i < jac_.cols(); ++i) {
      if (!jac_(a, i).is_zero() && !x[i].is_zero()) s += jac_(a, i) * x[i];
    }
    out.comps.push_back(simplify(s, assume));
  }
  return out;
}

namespace {

// Null space of J as the right singular vectors beyond the leading `rank`.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& j, int rank) {
  const auto m = j.cols();
  if (j.rows() == 0) return Eigen::MatrixXd::Identity(m, m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(m - rank);
}

}  // namespace

MapContext::MapContext(std::shared_ptr<const Metric> gm, std::shared_ptr<const Metric> gn,
                       std::shared_ptr<const SmoothMap> f, DeclaredFrames frames, std::optional<int> rank)
    : gm_(std::move(gm)), gn_(std::move(gn)), f_(std::move(f)), frames_(std::move(frames)), rank_(rank) {
  if (gm_->chart().name() != f_->source()->name() || gm_->dim() != f_->source()->dim()) {
    throw ChartMismatch("source metric chart '" + gm_->chart().name() + "' does not match the map source '" +
                        f_->source()->name() + "'");
  }
  if (gn_->chart().name() != f_->target()->name() || gn_->dim() != f_->target()->dim()) {
    throw ChartMismatch("target metric chart '" + gn_->chart().name() + "' does not match the map target '" +
                        f_->target()->name() + "'");
  }
  source_gamma_ = std::make_shared<ChristoffelJetSource>(gm_);
  if (frames_.source) {
    if (!rank_) rank_ = gm_->dim() - static_cast<int>(frames_.vertical.size());
    vjet_ = std::make_shared<DistributionJet>(gm_, frames_.vertical);
  }
  if (frames_.target) {
    if (!rank_) rank_ = static_cast<int>(frames_.range.size());
    rjet_ = std::make_shared<DistributionJet>(gn_, frames_.range);
  }
  if (!rank_) {
    auto pts = sample_points(*f_->source(), 1, 0x5eed);
    rank_ = f_->rank_at(pts.front());
  }
}

DistributionAt MapContext::vertical_at(const Point& p) const {
  if (vjet_) return vjet_->at(p);
  const int r = *rank_;
  auto proj = [this, r](const Point& x) {
    Eigen::MatrixXd k = kernel_basis(f_->jacobian_at(x), r);
    Eigen::MatrixXd g = gm_->at(x);
    if (k.cols() == 0) return Eigen::MatrixXd::Zero(g.rows(), g.cols()).eval();
    Eigen::MatrixXd gram = k.transpose() * g * k;
    return (k * gram.ldlt().solve(k.transpose() * g)).eval();
  };
  return numeric_distribution_at(*source_gamma_, proj, p);
}

DistributionAt MapContext::range_at(const Point& p) const {
  if (!rjet_) throw FramesRequired("target-side tensors need declared range frames");
  return rjet_->at(f_->image(p));
}

const TensorField& MapContext::composed_target_christoffel() const {
  std::call_once(composed_once_, [this] {
    // Target index layout, entries over source coordinates.
    const TensorField& gam = gn_->christoffel();
    composed_ = TensorField(f_->target(), 1, 2);
    for (std::size_t s = 0; s < gam.size(); ++s) composed_.flat(s) = f_->pullback(gam.flat(s));
  });
  return composed_;
}

Eigen::VectorXd MapContext::pullback_nabla_at(const Point& p, const Eigen::VectorXd& x, const AlongMap& w) const {
  const int n = gn_->dim();
  const int m = gm_->dim();
  Point q = f_->image(p);
  auto gam = christoffel_at(*gn_, q).gamma;
  Eigen::VectorXd fx = f_->pushforward_at(p, x);
  Eigen::VectorXd wv = w.eval(p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < n; ++a) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      if (x[i] == 0.0) continue;
      Expr d = differentiate(w.comps[static_cast<std::size_t>(a)], f_->source()->symbol(i));
      if (!d.is_zero()) s += x[i] * evaluate(d, p);
    }
    for (int b = 0; b < n; ++b) {
      if (fx[b] == 0.0) continue;
      for (int c = 0; c < n; ++c) s += gam[static_cast<std::size_t>((a * n + b) * n + c)] * fx[b] * wv[c];
    }
    out[a] = s;
  }
  return out;
}

Eigen::VectorXd MapContext::second_fundamental_form_at(const Point& p, const Eigen::VectorXd& x,
                                                       const Eigen::VectorXd& y) const {
  const int n = gn_->dim();
  const int m = gm_->dim();
  auto gm = christoffel_at(*gm_, p).gamma;
  auto gn = christoffel_at(*gn_, f_->image(p)).gamma;
  Eigen::MatrixXd jac = f_->jacobian_at(p);
  Eigen::VectorXd fx = jac * x, fy = jac * y;
  // ∇_x y with constant components.
  Eigen::VectorXd nxy = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) nxy[k] += gm[static_cast<std::size_t>((k * m + i) * m + j)] * x[i] * y[j];
  Eigen::VectorXd out = -(jac * nxy);
  for (int a = 0; a < n; ++a) {
    out[a] += x.dot(f_->second_derivatives(a).eval(p) * y);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out[a] += gn[static_cast<std::size_t>((a * n + b) * n + c)] * fx[b] * fy[c];
  }
  return out;
}

AlongMap MapContext::second_fundamental_form(const VectorField& x, const VectorField& y) const {
  const TensorField& gam = composed_target_christoffel();
  const int n = gn_->dim();
  const int m = gm_->dim();
  AlongMap fx = f_->pushforward(x);
  AlongMap fy = f_->pushforward(y);
  AlongMap fn = f_->pushforward(covariant_derivative(*gm_, x, y));
  AlongMap out{f_->source(), f_->target(), {}};
  const Assumptions assume = gm_->assumptions();
  for (int a = 0; a < n; ++a) {
    Expr s;
    for (int i = 0; i < m; ++i) {
      if (x[i].is_zero()) continue;
      Expr d = differentiate(fy.comps[static_cast<std::size_t>(a)], f_->source()->symbol(i));
      if (!d.is_zero()) s += x[i] * d;
    }
    for (int b = 0; b < n; ++b) {
      if (fx.comps[static_cast<std::size_t>(b)].is_zero()) continue;
      for (int c = 0; c < n; ++c) {
        const Expr& g = gam.at({a, b, c});
        if (g.is_zero() || fy.comps[static_cast<std::size_t>(c)].is_zero()) continue;
        s += g * fx.comps[static_cast<std::size_t>(b)] * fy.comps[static_cast<std::size_t>(c)];
      }
    }
    s -= fn.comps[static_cast<std::size_t>(a)];
    out.comps.push_back(simplify(s, assume));
  }
  return out;
}

}  // namespace dgeo
