#include "dgeo/structure.hpp"

#include <cmath>
#include <sstream>

namespace dgeo {

namespace {

void require_chart(const Chart& a, const Chart& b) {
  if (a.name() != b.name() || a.dim() != b.dim()) {
    throw ChartMismatch("structure on chart '" + b.name() + "' used with metric on '" + a.name() + "'");
  }
}

Eigen::MatrixXd columns(const std::vector<Eigen::VectorXd>& v, int n) {
  Eigen::MatrixXd m(n, static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m.col(static_cast<int>(i)) = v[i];
  return m;
}

// g-orthogonal projection onto an orthonormal set.
Eigen::VectorXd project(const Eigen::MatrixXd& gm, const std::vector<Eigen::VectorXd>& onb, const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (const auto& e : onb) out += e.dot(gm * v) * e;
  return out;
}

double gnorm(const Eigen::MatrixXd& gm, const Eigen::VectorXd& v) { return std::sqrt(std::max(0.0, v.dot(gm * v))); }

std::string basis_label(const AlmostComplexStructure& j, std::size_t a) {
  if (a < j.frame_names().size()) return j.frame_names()[a];
  if (j.basis() == AlmostComplexStructure::Basis::Frame) return "e" + std::to_string(a + 1);
  return "b" + std::to_string(a + 1);
}

}  // namespace

AlmostComplexStructure AlmostComplexStructure::on_coordinates(ChartPtr chart, ExprMatrix m) {
  if (m.rows() != chart->dim() || m.cols() != chart->dim()) {
    throw GeometryError("structure matrix must be " + std::to_string(chart->dim()) + "x" +
                        std::to_string(chart->dim()));
  }
  AlmostComplexStructure j;
  j.chart_ = std::move(chart);
  j.basis_ = Basis::Coordinates;
  j.declared_ = m;
  j.jc_ = m.simplified(j.chart_->assumptions());
  j.build_derivatives();
  return j;
}

AlmostComplexStructure AlmostComplexStructure::on_frame(const Metric& g, Frame frame, ExprMatrix m,
                                                        std::vector<std::string> names) {
  const int n = g.dim();
  require_chart(g.chart(), *frame.chart);
  if (static_cast<int>(frame.size()) != n) throw GeometryError("structure frame must span the tangent space");
  if (m.rows() != n || m.cols() != n) throw GeometryError("structure matrix does not match the frame size");
  auto pts = sample_points(g.chart(), 6, 0x5eedULL);
  double res = frame_orthonormality_residual(g, frame, pts);
  if (!(res <= 1e-9)) {
    std::ostringstream os;
    os << "structure frame is not orthonormal (residual " << res << ")";
    throw GeometryError(os.str());
  }
  // Jc = E M E^{-1} with E^{-1} = Eᵀ g for an orthonormal frame.
  ExprMatrix e(n, n), et(n, n);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) {
      e(i, a) = frame[static_cast<std::size_t>(a)][i];
      et(a, i) = e(i, a);
    }
  }
  AlmostComplexStructure j;
  j.chart_ = frame.chart;
  j.basis_ = Basis::Frame;
  j.declared_ = m;
  j.jc_ = (e * m * et * g.matrix()).simplified(g.assumptions());
  frame.orthonormal = true;
  j.frame_ = std::move(frame);
  j.names_ = std::move(names);
  j.build_derivatives();
  return j;
}

void AlmostComplexStructure::build_derivatives() {
  const int n = dim();
  djc_.assign(static_cast<std::size_t>(n), ExprMatrix(n, n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < n; ++c) {
        djc_[static_cast<std::size_t>(k)](i, c) =
            simplify(differentiate(jc_(i, c), chart_->symbol(k)), chart_->assumptions());
      }
    }
  }
}

VectorField AlmostComplexStructure::apply(const VectorField& v) const {
  require_chart(*chart_, *v.chart());
  return dgeo::apply(jc_, v).simplified(chart_->assumptions());
}

AlmostComplexStructure AlmostComplexStructure::scaled(double c) const {
  AlmostComplexStructure j = *this;
  for (int a = 0; a < dim(); ++a) {
    for (int b = 0; b < dim(); ++b) {
      j.declared_(a, b) = simplify(Expr(c) * declared_(a, b));
      j.jc_(a, b) = simplify(Expr(c) * jc_(a, b));
    }
  }
  j.build_derivatives();
  return j;
}

std::vector<Eigen::VectorXd> residual_basis(const Metric& g, const AlmostComplexStructure& j, const Point& p) {
  if (j.frame()) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& f : j.frame()->fields) out.push_back(f.eval(p));
    return out;
  }
  return orthogonal_complement(g, {}, p);
}

std::vector<Eigen::MatrixXd> nabla_j_at(const Metric& g, const AlmostComplexStructure& j, const Point& p) {
  require_chart(g.chart(), *j.chart());
  const int n = g.dim();
  const auto gam = christoffel_at(g, p).gamma;
  auto G = [&](int k, int a, int b) { return gam[static_cast<std::size_t>((k * n + a) * n + b)]; };
  Eigen::MatrixXd jm = j.matrix_at(p);
  std::vector<Eigen::MatrixXd> out;
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd d = j.derivatives()[static_cast<std::size_t>(k)].eval(p);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < n; ++c) {
        double s = d(i, c);
        for (int m = 0; m < n; ++m) s += G(i, k, m) * jm(m, c) - G(m, k, c) * jm(i, m);
        d(i, c) = s;
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

Eigen::MatrixXd kahler_entries(const Metric& g, const AlmostComplexStructure& j, const Point& p) {
  const int n = g.dim();
  auto dj = nabla_j_at(g, j, p);
  auto basis = residual_basis(g, j, p);
  Eigen::MatrixXd gm = g.at(p);
  Eigen::MatrixXd out(n, n);
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXd along = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) along += basis[static_cast<std::size_t>(a)][k] * dj[static_cast<std::size_t>(k)];
    for (int b = 0; b < n; ++b) out(a, b) = gnorm(gm, along * basis[static_cast<std::size_t>(b)]);
  }
  return out;
}

CheckResult check_hermitian(const Metric& g, const AlmostComplexStructure& j, const std::vector<Point>& points,
                            double tol) {
  require_chart(g.chart(), *j.chart());
  const int n = g.dim();
  CheckResult r;
  r.id = "hermitian";
  r.tolerance = tol;
  std::vector<double> sq(points.size()), met(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    const Point& p = points[k];
    Eigen::MatrixXd gm = g.at(p);
    Eigen::MatrixXd e = columns(residual_basis(g, j, p), n);
    // J in the orthonormal basis: Eᵀ g J E.
    Eigen::MatrixXd jo = e.transpose() * gm * j.matrix_at(p) * e;
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    sq[k] = (jo * jo + id).operatorNorm();
    met[k] = (jo.transpose() * jo - id).operatorNorm();
  });
  double wsq = 0, wmet = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (r.observe(std::max(sq[k], met[k]), k, g.chart().coords_of(points[k]))) {
      wsq = sq[k];
      wmet = met[k];
    }
  }
  r.terms.push_back({"J^2+I", wsq, true, ""});
  r.terms.push_back({"g(J.,J.)-g", wmet, true, ""});
  r.set_value("square_residual", wsq);
  r.set_value("metric_residual", wmet);
  finalize(r);
  return r;
}

CheckResult check_kahler(const Metric& g, const AlmostComplexStructure& j, const std::vector<Point>& points,
                         double tol) {
  require_chart(g.chart(), *j.chart());
  CheckResult r;
  r.id = "kahler";
  r.tolerance = tol;
  std::vector<Eigen::MatrixXd> ent(points.size());
  parallel_for(points.size(), [&](std::size_t k) { ent[k] = kahler_entries(g, j, points[k]); });
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (r.observe(ent[k].norm(), k, g.chart().coords_of(points[k]))) {
      Eigen::Index a = 0, b = 0;
      double top = ent[k].maxCoeff(&a, &b);
      r.terms.clear();
      r.terms.push_back({"(nabla_" + basis_label(j, static_cast<std::size_t>(a)) + " J)" +
                             basis_label(j, static_cast<std::size_t>(b)),
                         top, true, ""});
      r.set_value("max_entry", top);
      r.set_value("max_entry_a", static_cast<double>(a));
      r.set_value("max_entry_b", static_cast<double>(b));
    }
  }
  finalize(r);
  return r;
}

CheckResult check_anti_invariant(const Metric& g, const AlmostComplexStructure& j, const std::vector<Point>& points,
                                 const std::vector<std::vector<Eigen::VectorXd>>& subspace, double tol) {
  require_chart(g.chart(), *j.chart());
  if (subspace.size() != points.size()) throw GeometryError("one subspace per sample point is required");
  CheckResult r;
  r.id = "anti_invariant";
  r.tolerance = tol;
  bool any = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& vs = subspace[k];
    if (vs.empty()) continue;
    any = true;
    auto onb = orthonormalize(g, vs, points[k]);
    Eigen::MatrixXd gm = g.at(points[k]);
    Eigen::MatrixXd jm = j.matrix_at(points[k]);
    double worst = 0;
    for (const auto& v : onb) {
      Eigen::VectorXd jv = jm * v;
      for (const auto& w : onb) worst = std::max(worst, std::abs(jv.dot(gm * w)));
    }
    r.observe(worst, k, g.chart().coords_of(points[k]));
  }
  if (!any) {
    r.vacuous = true;
    r.notes.push_back("degenerate: the subspace is zero at every sample, so the condition is vacuous");
    r.verdict = Verdict::Fail;
    return r;
  }
  finalize(r);
  return r;
}

std::vector<Eigen::VectorXd> invariant_complement(const Metric& g, const AlmostComplexStructure& j,
                                                  const std::vector<Eigen::VectorXd>& base, const Point& p) {
  Eigen::MatrixXd jm = j.matrix_at(p);
  std::vector<Eigen::VectorXd> span = base;
  for (const auto& v : base) span.push_back(jm * v);
  return orthogonal_complement(g, span, p);
}

namespace {

struct Split {
  Eigen::VectorXd image, inside, rest;
  double outside;
};

Split split(const Metric& g, const AlmostComplexStructure& j, const Point& p, const Eigen::VectorXd& x,
            const std::vector<Eigen::VectorXd>& base, const std::optional<std::vector<Eigen::VectorXd>>& comp,
            double tol, const char* what) {
  require_chart(g.chart(), *j.chart());
  Eigen::MatrixXd gm = g.at(p);
  auto onb = base.empty() ? std::vector<Eigen::VectorXd>{} : orthonormalize(g, base, p);
  double xn = gnorm(gm, x);
  if (gnorm(gm, project(gm, onb, x)) > tol * std::max(1.0, xn)) {
    throw GeometryError(std::string("vector is not ") + what + " at the sample point");
  }
  Split s;
  s.image = j.apply_at(p, x);
  s.inside = project(gm, onb, s.image);
  s.rest = s.image - s.inside;
  auto c = comp ? (comp->empty() ? std::vector<Eigen::VectorXd>{} : orthonormalize(g, *comp, p))
                : invariant_complement(g, j, base, p);
  s.outside = gnorm(gm, s.rest - project(gm, c, s.rest));
  return s;
}

}  // namespace

BCDecomposition decompose_BC(const Metric& g, const AlmostComplexStructure& j, const Point& p,
                             const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& vertical,
                             const std::optional<std::vector<Eigen::VectorXd>>& mu, double tol) {
  Split s = split(g, j, p, x, vertical, mu, tol, "horizontal");
  if (s.outside > tol) {
    std::ostringstream os;
    os << "JX leaves ker F* + mu by " << s.outside;
    throw AntiInvarianceViolation(os.str());
  }
  return {s.image, s.inside, s.rest, s.outside};
}

PQDecomposition decompose_PQ(const Metric& g, const AlmostComplexStructure& j, const Point& p,
                             const Eigen::VectorXd& d, const std::vector<Eigen::VectorXd>& range,
                             const std::optional<std::vector<Eigen::VectorXd>>& nu, double tol) {
  Split s = split(g, j, p, d, range, nu, tol, "normal");
  if (s.outside > tol) {
    std::ostringstream os;
    os << "J'D leaves range F* + nu by " << s.outside;
    throw AntiInvarianceViolation(os.str());
  }
  return {s.image, s.inside, s.rest, s.outside};
}

}  // namespace dgeo
