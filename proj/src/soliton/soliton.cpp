#include <cmath>
#include <limits>

#include "dgeo/soliton.hpp"

namespace dgeo {

namespace {

Eigen::MatrixXd eval2(const TensorField& t, const Point& p) {
  const int n = t.dim();
  auto v = t.eval(p);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(i * n + j)];
  return m;
}

Eigen::MatrixXd ricci_matrix(const Metric& g, const Point& p) {
  return g.has_symbolic_inverse() ? eval2(g.ricci(), p) : fd_ricci(g, p);
}

// The Lie (or Hessian) part, built once per check.
struct SolitonTensors {
  TensorField lie;
  bool halve = false;

  explicit SolitonTensors(const SolitonConfig& cfg) {
    validate(cfg);
    if (cfg.potential) {
      lie = hessian(*cfg.metric, *cfg.potential);
    } else {
      lie = lie_derivative_metric(*cfg.metric, *cfg.xi);
      halve = true;
    }
  }

  Eigen::MatrixXd at(const SolitonConfig& cfg, const Point& p) const {
    Eigen::MatrixXd l = eval2(lie, p);
    if (halve) l *= 0.5;
    return l + cfg.alpha * ricci_matrix(*cfg.metric, p);
  }
};

Eigen::MatrixXd basis_matrix(const std::vector<Eigen::VectorXd>& b, int n) {
  Eigen::MatrixXd e(n, static_cast<Eigen::Index>(b.size()));
  for (std::size_t a = 0; a < b.size(); ++a) e.col(static_cast<Eigen::Index>(a)) = b[a];
  return e;
}

double op_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

void validate(const SolitonConfig& cfg) {
  if (!cfg.metric) throw GeometryError("soliton config has no metric");
  if (cfg.xi.has_value() == cfg.potential.has_value()) {
    throw GeometryError("soliton config needs exactly one of a potential field or a potential function");
  }
  if (cfg.alpha == 0.0) throw GeometryError("soliton coefficient alpha must be nonzero");
  if (cfg.xi && (cfg.xi->chart()->name() != cfg.metric->chart().name() || cfg.xi->dim() != cfg.metric->dim())) {
    throw ChartMismatch("soliton potential field does not live on the metric chart");
  }
}

Eigen::MatrixXd soliton_operator_at(const SolitonConfig& cfg, const Point& p) { return SolitonTensors(cfg).at(cfg, p); }

std::vector<Eigen::VectorXd> restriction_basis(const Metric& g, const std::vector<VectorField>& restriction,
                                               const Point& p) {
  if (!restriction.empty()) return orthonormalize(g, restriction, p);
  std::vector<Eigen::VectorXd> e;
  for (int i = 0; i < g.dim(); ++i) e.push_back(Eigen::VectorXd::Unit(g.dim(), i));
  return orthonormalize(g, e, p);
}

CheckResult soliton_residual(const SolitonConfig& cfg, const std::vector<VectorField>& restriction,
                             const std::vector<Point>& points, double tol) {
  if (!cfg.lambda) throw GeometryError("soliton residual needs a value for lambda");
  SolitonTensors st(cfg);
  CheckResult r;
  r.id = "soliton";
  r.tolerance = tol;
  const Metric& g = *cfg.metric;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    Eigen::MatrixXd e = basis_matrix(restriction_basis(g, restriction, p), g.dim());
    Eigen::MatrixXd k = e.transpose() * st.at(cfg, p) * e;
    Eigen::MatrixXd res = k + *cfg.lambda * (e.transpose() * g.at(p) * e);
    if (r.observe(res.cwiseAbs().maxCoeff(), i, g.chart().coords_of(p))) {
      Eigen::MatrixXd lie = k - cfg.alpha * (e.transpose() * ricci_matrix(g, p) * e);
      r.terms = {{"lie", lie.cwiseAbs().maxCoeff(), true, ""},
                 {"alpha*Ric", (k - lie).cwiseAbs().maxCoeff(), true, ""},
                 {"lambda*g", std::abs(*cfg.lambda), true, ""}};
    }
  }
  r.set_value("lambda", *cfg.lambda);
  r.set_value("alpha", cfg.alpha);
  finalize(r);
  return r;
}

LambdaFit solve_lambda(const SolitonConfig& cfg, const std::vector<VectorField>& restriction,
                       const std::vector<Point>& points) {
  SolitonTensors st(cfg);
  const Metric& g = *cfg.metric;
  std::vector<Eigen::MatrixXd> ks, gs;
  double num = 0.0, den = 0.0;
  for (const auto& p : points) {
    Eigen::MatrixXd e = basis_matrix(restriction_basis(g, restriction, p), g.dim());
    ks.push_back(e.transpose() * st.at(cfg, p) * e);
    gs.push_back(e.transpose() * g.at(p) * e);
    num += (ks.back().array() * gs.back().array()).sum();
    den += gs.back().squaredNorm();
  }
  if (!(den > 1e-24)) throw GeometryError("lambda is underdetermined: every sampled g(X, Y) vanishes");
  LambdaFit fit;
  fit.lambda = -num / den;
  for (std::size_t s = 0; s < ks.size(); ++s) {
    const auto& k = ks[s];
    const auto& gm = gs[s];
    for (Eigen::Index a = 0; a < k.rows(); ++a) {
      for (Eigen::Index b = 0; b < k.cols(); ++b) {
        fit.residual = std::max(fit.residual, std::abs(k(a, b) + fit.lambda * gm(a, b)));
        if (std::abs(gm(a, b)) > 1e-12) {
          fit.spread = std::max(fit.spread, std::abs(-k(a, b) / gm(a, b) - fit.lambda));
          ++fit.samples;
        }
      }
    }
  }
  return fit;
}

CheckResult check_einstein(const RestrictedGeometry& rg, const std::vector<Point>& points, double tol) {
  CheckResult r;
  r.id = "einstein";
  r.tolerance = tol;
  const Chart& chart = rg.parent().chart();
  if (rg.dim() == 0) {
    r.vacuous = true;
    r.notes.push_back("zero-dimensional distribution");
    finalize(r);
    return r;
  }
  // Ricci in an orthonormal basis of the leaf.
  std::vector<Eigen::MatrixXd> ric;
  double sum = 0.0;
  for (const auto& p : points) {
    Eigen::MatrixXd g = rg.induced()->at(p);
    Eigen::MatrixXd linv = Eigen::LLT<Eigen::MatrixXd>(g).matrixL().solve(Eigen::MatrixXd::Identity(rg.dim(), rg.dim()));
    ric.push_back(linv * rg.ricci_at(p) * linv.transpose());
    sum += ric.back().trace() / rg.dim();
  }
  double lambda = points.empty() ? 0.0 : -sum / static_cast<double>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Eigen::MatrixXd m = ric[i] + lambda * Eigen::MatrixXd::Identity(rg.dim(), rg.dim());
    r.observe(op_norm(m), i, chart.coords_of(points[i]));
  }
  r.set_value("lambda", lambda);
  r.terms.push_back({"Ric+lambda*g", r.max_residual, true, ""});
  finalize(r);
  return r;
}

CheckResult check_conformal(const Metric& g, const VectorField& x, const std::vector<VectorField>& restriction,
                            const std::vector<Point>& points, double tol, const std::optional<ConformalClaim>& claim) {
  CheckResult r;
  r.id = "conformal";
  r.tolerance = tol;
  TensorField lie = lie_derivative_metric(g, x);
  double phi_min = std::numeric_limits<double>::infinity();
  double phi_max = -phi_min;
  double claim_res = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    auto basis = restriction_basis(g, restriction, p);
    Eigen::MatrixXd e = basis_matrix(basis, g.dim());
    Eigen::MatrixXd l = e.transpose() * eval2(lie, p) * e;
    const auto k = static_cast<double>(basis.size());
    double phi = k > 0 ? l.trace() / k : 0.0;
    if (i == 0) r.set_value("phi_first", phi);
    phi_min = std::min(phi_min, phi);
    phi_max = std::max(phi_max, phi);
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(l.rows(), l.cols());
    r.observe(op_norm(l - phi * id), i, g.chart().coords_of(p));
    if (claim) {
      double mu = 2.0 * claim->lambda / claim->r;
      claim_res = std::max(claim_res, (0.5 * l + mu * id).cwiseAbs().maxCoeff());
    }
  }
  if (!points.empty()) {
    r.set_value("phi_min", phi_min);
    r.set_value("phi_max", phi_max);
  }
  r.terms.push_back({"L_X g - phi g", r.max_residual, true, ""});
  if (claim) {
    r.set_value("claim_residual", claim_res);
    r.terms.push_back({"1/2 L_X g + mu' g", claim_res, true, ""});
  }
  finalize(r);
  return r;
}

}  // namespace dgeo
