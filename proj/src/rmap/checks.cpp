#include <cmath>
#include <limits>

#include "dgeo/rmap.hpp"

namespace dgeo {

namespace {

double hnorm(const Eigen::MatrixXd& h, const Eigen::VectorXd& v) { return std::sqrt(std::max(0.0, v.dot(h * v))); }

void rank_failure(CheckResult& r, std::size_t i, const Point& p, const Chart& c, const std::string& what) {
  r.observe(std::numeric_limits<double>::infinity(), i, c.coords_of(p));
  r.notes.push_back("point " + std::to_string(i) + ": " + what);
}

}  // namespace

CheckResult check_riemannian_map(const MapContext& ctx, const std::vector<Point>& points, double tol) {
  CheckResult r;
  r.id = "riemannian_map";
  r.tolerance = tol;
  const Chart& chart = *ctx.map().source();
  bool any_horizontal = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    FramesAt fr;
    try {
      fr = compute_splittings(ctx, p);
    } catch (const RankChange& e) {
      rank_failure(r, i, p, chart, e.what());
      continue;
    }
    any_horizontal = any_horizontal || !fr.horizontal.empty();
    Eigen::MatrixXd jac = ctx.map().jacobian_at(p);
    Eigen::MatrixXd g = ctx.source_metric().at(p);
    Eigen::MatrixXd h = ctx.target_metric().at(fr.q);
    double worst = 0.0;
    for (const auto& x : fr.horizontal) {
      for (const auto& y : fr.horizontal) {
        double d = (jac * x).dot(h * (jac * y)) - x.dot(g * y);
        worst = std::max(worst, std::abs(d));
      }
    }
    r.observe(worst, i, chart.coords_of(p));
  }
  r.terms.push_back({"g_N(F*X,F*Y)-g_M(X,Y)", r.max_residual, true, ""});
  finalize(r);
  if (!any_horizontal && r.verdict == Verdict::Pass) r.notes.push_back("degenerate: no horizontal directions");
  return r;
}

CheckResult check_umbilical(const MapContext& ctx, const std::vector<Point>& points, double tol,
                            const std::function<Eigen::VectorXd(const Point& q)>& expected) {
  CheckResult r;
  r.id = "umbilical";
  r.tolerance = tol;
  const Chart& chart = *ctx.map().source();
  double max_fit = 0.0, max_gap = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    FramesAt fr;
    try {
      fr = compute_splittings(ctx, p);
    } catch (const RankChange& e) {
      rank_failure(r, i, p, chart, e.what());
      continue;
    }
    const auto& xs = fr.horizontal;
    if (xs.empty()) continue;
    any = true;
    Eigen::MatrixXd h = ctx.target_metric().at(fr.q);
    const int n = ctx.target_metric().dim();
    std::vector<std::vector<Eigen::VectorXd>> b(xs.size(), std::vector<Eigen::VectorXd>(xs.size()));
    Eigen::VectorXd fit = Eigen::VectorXd::Zero(n);
    for (std::size_t a = 0; a < xs.size(); ++a) {
      for (std::size_t c = a; c < xs.size(); ++c) {
        b[a][c] = ctx.second_fundamental_form_at(p, xs[a], xs[c]);
        b[c][a] = b[a][c];
      }
      fit += b[a][a];
    }
    fit /= static_cast<double>(xs.size());
    max_fit = std::max(max_fit, hnorm(h, fit));
    Eigen::VectorXd hp = fit;
    if (expected) {
      hp = expected(fr.q);
      max_gap = std::max(max_gap, hnorm(h, fit - hp));
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < xs.size(); ++a) {
      for (std::size_t c = 0; c < xs.size(); ++c) {
        Eigen::VectorXd d = b[a][c] - (a == c ? hp : Eigen::VectorXd::Zero(n));
        worst = std::max(worst, hnorm(h, d));
      }
    }
    if (r.observe(worst, i, chart.coords_of(p))) {
      for (int k = 0; k < n; ++k) r.set_value("H'_" + std::to_string(k + 1), hp[k]);
    }
  }
  r.set_value("max_fitted_norm", max_fit);
  if (expected) r.set_value("fit_vs_expected", max_gap);
  r.terms.push_back({"(nablaF*)(X,Y)-g(X,Y)H'", r.max_residual, true, expected ? "expected H'" : "fitted H'"});
  r.vacuous = !any;
  finalize(r);
  return r;
}

}  // namespace dgeo
