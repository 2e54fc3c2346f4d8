#include <cmath>
#include <limits>

#include "dgeo/soliton.hpp"

namespace dgeo {

namespace {

double gnorm(const Eigen::MatrixXd& g, const Eigen::VectorXd& v) { return std::sqrt(std::max(0.0, v.dot(g * v))); }

}  // namespace

CheckResult check_clairaut_source(const MapContext& ctx, const Expr& f, const std::vector<Point>& points, double tol) {
  CheckResult r;
  r.id = "clairaut_source";
  r.tolerance = tol;
  const Metric& gm = ctx.source_metric();
  VectorField grad = gradient(gm, f);
  double umb = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    FramesAt fr;
    try {
      fr = compute_splittings(ctx, p);
    } catch (const RankChange& e) {
      r.observe(std::numeric_limits<double>::infinity(), i, gm.chart().coords_of(p));
      r.notes.push_back("point " + std::to_string(i) + ": " + e.what());
      continue;
    }
    if (fr.vertical.empty()) throw GeometryError("Clairaut source condition needs a nonzero kernel");
    DistributionAt d = ctx.vertical_at(p);
    Eigen::MatrixXd g = gm.at(p);
    Eigen::VectorXd gf = grad.eval(p);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(gm.dim());
    for (const auto& u : fr.vertical) h += d.T(u, u);
    h /= static_cast<double>(fr.vertical.size());
    double worst = 0.0;
    for (const auto& u : fr.vertical) {
      for (const auto& v : fr.vertical) {
        Eigen::VectorXd t = d.T(u, v);
        double guv = u.dot(g * v);
        worst = std::max(worst, gnorm(g, t + guv * gf));
        umb = std::max(umb, gnorm(g, t - guv * h));
      }
    }
    gap = std::max(gap, gnorm(g, h + gf));
    r.observe(worst, i, gm.chart().coords_of(p));
  }
  r.set_value("umbilicity", umb);
  r.set_value("mean_curvature_gap", gap);
  r.terms.push_back({"T_U V + g(U,V) grad f", r.max_residual, true, ""});
  r.terms.push_back({"T_U V - g(U,V) H", umb, true, ""});
  finalize(r);
  return r;
}

CheckResult check_clairaut_target(const MapContext& ctx, const Expr& gfun, const std::vector<Point>& points,
                                  double tol) {
  CheckResult r;
  r.id = "clairaut_target";
  r.tolerance = tol;
  const Metric& gn = ctx.target_metric();
  const Chart& chart = *ctx.map().source();
  VectorField grad = gradient(gn, gfun);
  const bool exact = ctx.has_exact_range() && ctx.frames().normal.size() > 0;
  std::vector<AlongMap> normals;
  if (exact) {
    for (const auto& e : ctx.frames().normal) normals.push_back(ctx.map().compose(e));
  }
  double s_part = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    FramesAt fr;
    try {
      fr = compute_splittings(ctx, p);
    } catch (const RankChange& e) {
      r.observe(std::numeric_limits<double>::infinity(), i, chart.coords_of(p));
      r.notes.push_back("point " + std::to_string(i) + ": " + e.what());
      continue;
    }
    if (fr.range.empty()) throw GeometryError("Clairaut target condition needs a nontrivial range");
    Eigen::MatrixXd h = gn.at(fr.q);
    Eigen::MatrixXd jac = ctx.map().jacobian_at(p);
    Eigen::VectorXd gg = grad.eval(fr.q);
    double worst = 0.0;
    for (std::size_t k = 0; k < fr.normal.size(); ++k) {
      const Eigen::VectorXd& d = fr.normal[k];
      double dg = d.dot(h * gg);
      for (const auto& x : fr.horizontal) {
        Eigen::VectorXd fx = jac * x;
        Eigen::VectorXd s;
        if (exact) {
          s = shape_operator(ctx, fr, normals[k], x).s;
        } else {
          // g(S_D F*X, F*Y) = g(D, (∇F*)(X, Y)) over the horizontal frame.
          s = Eigen::VectorXd::Zero(gn.dim());
          for (const auto& y : fr.horizontal) s += d.dot(h * ctx.second_fundamental_form_at(p, x, y)) * (jac * y);
        }
        worst = std::max(worst, gnorm(h, s + dg * fx));
      }
    }
    s_part = std::max(s_part, worst);
  }
  auto expected = [&](const Point& q) { return (-grad.eval(q)).eval(); };
  CheckResult u = check_umbilical(ctx, points, tol, expected);
  double umb = u.max_residual;
  r.max_residual = std::max(r.max_residual, std::max(s_part, umb));
  if (u.worst_point && (!r.worst_point || umb >= s_part)) {
    r.worst_point = u.worst_point;
    r.worst_coords = u.worst_coords;
  }
  r.set_value("shape_part", s_part);
  r.set_value("umbilical_part", umb);
  if (auto v = u.value("fit_vs_expected")) r.set_value("fit_vs_expected", *v);
  r.terms.push_back({"S_D F*X + D(g) F*X", s_part, true, exact ? "" : "S from duality with the second fundamental form"});
  r.terms.push_back({"(nablaF*)(X,Y) + g(X,Y) grad g", umb, true, ""});
  finalize(r);
  return r;
}

const char* scalar_relation_id(ScalarRelation r) {
  switch (r) {
    case ScalarRelation::RangeSource:
      return "scalar_range_source";
    case ScalarRelation::Kernel:
      return "scalar_kernel";
    case ScalarRelation::NormalTarget:
      return "scalar_normal_target";
    case ScalarRelation::RangeTarget:
      return "scalar_range_target";
  }
  return "?";
}

namespace {

// Leaf geometry for one of the map distributions, built once and checked
// for alignment at every point.
struct Leaves {
  std::optional<RestrictedGeometry> rg;

  const RestrictedGeometry& get(const std::shared_ptr<const Metric>& g, const std::vector<VectorField>* declared,
                                const std::vector<Eigen::VectorXd>& span, const Point& at) {
    if (!rg) {
      rg = declared ? RestrictedGeometry::from_fields(g, *declared, at) : RestrictedGeometry::from_vectors(g, span, 1e-10);
    }
    for (const auto& v : span) (void)rg->restrict(v);
    if (static_cast<int>(span.size()) != rg->dim()) {
      throw UnsupportedConfiguration("distribution dimension changes between points");
    }
    return *rg;
  }
};

}  // namespace

CheckResult check_scalar_relation(const ScalarRelationInput& in, const std::vector<Point>& points, double tol) {
  CheckResult r;
  r.id = scalar_relation_id(in.which);
  r.tolerance = tol;
  r.gates = in.gates;
  const MapContext& ctx = *in.ctx;
  const auto& frames = ctx.frames();
  const Chart& chart = *ctx.map().source();
  std::optional<VectorField> grad;
  if (in.which == ScalarRelation::NormalTarget) {
    if (!in.target_function) throw GeometryError("scalar relation on the normal bundle needs the function g");
    grad = gradient(ctx.target_metric(), *in.target_function);
  }
  Leaves leaves;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    FramesAt fr = compute_splittings(ctx, p);
    const int r0 = static_cast<int>(fr.vertical.size());
    const int rank = static_cast<int>(fr.range.size());
    double lhs = 0.0, rhs = 0.0, res = 0.0;
    switch (in.which) {
      case ScalarRelation::RangeSource:
      case ScalarRelation::RangeTarget: {
        const auto& rg = leaves.get(ctx.target_metric_ptr(), frames.target ? &frames.range : nullptr, fr.range, fr.q);
        lhs = rg.scalar_at(fr.q);
        rhs = in.which == ScalarRelation::RangeSource ? -in.lambda * r0 : -rank * in.lambda;
        res = std::abs(lhs - rhs);
        break;
      }
      case ScalarRelation::Kernel: {
        const auto& rg = leaves.get(ctx.source_metric_ptr(), frames.source ? &frames.vertical : nullptr, fr.vertical, p);
        lhs = rg.scalar_at(p);
        rhs = -r0 * in.lambda;
        res = std::abs(lhs - rhs);
        break;
      }
      case ScalarRelation::NormalTarget: {
        const auto& rg =
            leaves.get(ctx.target_metric_ptr(), frames.target ? &frames.normal : nullptr, fr.normal, fr.q);
        lhs = rg.scalar_at(fr.q);
        Eigen::MatrixXd h = ctx.target_metric().at(fr.q);
        Eigen::VectorXd gg = grad->eval(fr.q);
        const auto n1 = static_cast<double>(fr.normal.size());
        rhs = -in.lambda * n1;
        for (const auto& d : fr.normal) {
          double cand = -(d.dot(h * gg) + in.lambda) * n1;
          if (std::abs(lhs - cand) >= res) {
            res = std::abs(lhs - cand);
            rhs = cand;
          }
        }
        break;
      }
    }
    if (r.observe(res, i, chart.coords_of(p))) {
      r.set_value("lhs", lhs);
      r.set_value("rhs", rhs);
    }
  }
  r.set_value("lambda", in.lambda);
  finalize(r);
  return r;
}

}  // namespace dgeo
