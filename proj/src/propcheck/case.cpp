#include <algorithm>
#include <cmath>
#include <limits>

#include "internal.hpp"

namespace dgeo {

namespace prop {

Eigen::MatrixXd eval2(const TensorField& t, const Point& p) {
  const int n = t.dim();
  auto v = t.eval(p);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(i * n + j)];
  return m;
}

Eigen::MatrixXd ambient_ricci(const Metric& g, const Point& p) {
  return g.has_symbolic_inverse() ? eval2(g.ricci(), p) : fd_ricci(g, p);
}

void Accumulator::begin() {
  cur_.assign(defs_.size(), 0.0);
  cur_ok_.assign(defs_.size(), false);
}

void Accumulator::term(const std::string& name, const std::function<double()>& fn, const std::string& note) {
  std::size_t k = 0;
  while (k < defs_.size() && defs_[k].name != name) ++k;
  if (k == defs_.size()) {
    defs_.push_back({name, note, "", true});
    cur_.push_back(0.0);
    cur_ok_.push_back(false);
  }
  try {
    cur_[k] = fn();
    cur_ok_[k] = true;
  } catch (const FramesRequired& e) {
    defs_[k].available = false;
    if (defs_[k].reason.empty()) defs_[k].reason = e.what();
  } catch (const UnsupportedConfiguration& e) {
    defs_[k].available = false;
    if (defs_[k].reason.empty()) defs_[k].reason = e.what();
  }
}

void Accumulator::finish(double lhs, std::size_t point, const Point& p, const std::string& label) {
  double rhs = 0.0;
  for (std::size_t k = 0; k < cur_.size(); ++k) {
    if (cur_ok_[k]) rhs += cur_[k];
  }
  if (r_.observe(std::abs(lhs - rhs), point, chart_.coords_of(p)) || !any_) {
    worst_ = cur_;
    worst_.resize(defs_.size(), 0.0);
    worst_lhs_ = lhs;
    worst_rhs_ = rhs;
    worst_label_ = label;
  }
  any_ = true;
}

void Accumulator::skip(std::size_t point, const Point& p, const std::string& why) {
  r_.observe(std::numeric_limits<double>::infinity(), point, chart_.coords_of(p));
  r_.notes.push_back("point " + std::to_string(point) + ": " + why);
}

void Accumulator::close() {
  r_.terms.clear();
  if (!any_) return;
  r_.terms.push_back({"LHS", worst_lhs_, true, ""});
  worst_.resize(defs_.size(), 0.0);
  for (std::size_t k = 0; k < defs_.size(); ++k) {
    const auto& d = defs_[k];
    std::string note = d.note;
    if (!d.available) note = "UNAVAILABLE: " + d.reason;
    r_.terms.push_back({d.name, d.available ? worst_[k] : 0.0, d.available, note});
  }
  r_.terms.push_back({"RHS", worst_rhs_, true, ""});
  r_.set_value("lhs", worst_lhs_);
  r_.set_value("rhs", worst_rhs_);
  if (!worst_label_.empty()) r_.notes.push_back("worst pair: " + worst_label_);
}

}  // namespace prop

namespace {

const std::vector<std::string> kSourceIds = {"ric_uv",     "ric_ux",     "ric_xy",     "ric_bxby",
                                             "ric_cxcy",   "ric_bxcy",   "ric_cxby",   "lag_ric_uv",
                                             "lag_ric_ux", "lag_ric_xy", "cor_ric_xy"};
const std::vector<std::string> kTargetIds = {"ric_fxfy",  "ric_fxe",  "ric_de",       "ric_pdpe",
                                             "ric_pdqe",  "ric_peqd", "ric_qdqe",     "lag_ric_fxfy",
                                             "lag_ric_fxe", "lag_ric_de"};

bool starts_with(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

double gnorm(const Eigen::MatrixXd& g, const Eigen::VectorXd& v) { return std::sqrt(std::max(0.0, v.dot(g * v))); }

const std::vector<std::string>& gates_for_all() {
  static const std::vector<std::string> all = {
      "dim_kernel",          "dim_range",           "riemannian_map",         "kahler_source",
      "anti_invariant_source", "clairaut_source",   "lagrangian_source",      "totally_geodesic_map",
      "horizontal_totally_geodesic", "kahler_target", "anti_invariant_target", "clairaut_target",
      "lagrangian_target",   "normal_totally_geodesic", "source_soliton",    "target_soliton",
      "potential_vertical_source", "potential_horizontal_source", "potential_normal_target"};
  return all;
}

VectorField potential_field(const SolitonConfig& cfg) {
  return cfg.xi ? *cfg.xi : gradient(*cfg.metric, *cfg.potential);
}

}  // namespace

const std::vector<std::string>& identity_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v = kSourceIds;
    v.insert(v.end(), kTargetIds.begin(), kTargetIds.end());
    return v;
  }();
  return ids;
}

bool is_source_identity(const std::string& id) {
  return std::find(kSourceIds.begin(), kSourceIds.end(), id) != kSourceIds.end();
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {"alpha_soliton_range",  "ric_lie_relation",
                                               "scalar_range_source",  "scalar_kernel",
                                               "scalar_normal_target", "scalar_range_target"};
  return ids;
}

std::vector<std::string> gates_for(const std::string& id) {
  const std::vector<std::string> source = {"dim_kernel", "kahler_source", "anti_invariant_source", "riemannian_map",
                                           "clairaut_source"};
  const std::vector<std::string> target = {"dim_range",      "kahler_target",  "anti_invariant_target",
                                           "riemannian_map", "clairaut_target", "normal_totally_geodesic"};
  auto plus = [](std::vector<std::string> a, std::initializer_list<const char*> more) {
    for (const char* m : more) a.emplace_back(m);
    return a;
  };
  if (is_source_identity(id)) {
    if (starts_with(id, "lag_")) return plus(source, {"lagrangian_source"});
    if (id == "cor_ric_xy") return plus(source, {"totally_geodesic_map", "horizontal_totally_geodesic"});
    return source;
  }
  if (std::find(kTargetIds.begin(), kTargetIds.end(), id) != kTargetIds.end()) {
    if (starts_with(id, "lag_")) return plus(target, {"lagrangian_target"});
    return target;
  }
  if (id == "alpha_soliton_range") return plus(source, {"horizontal_totally_geodesic", "source_soliton"});
  if (id == "ric_lie_relation") {
    return plus(source, {"horizontal_totally_geodesic", "source_soliton", "potential_horizontal_source"});
  }
  if (id == "scalar_range_source") return plus(source, {"lagrangian_source", "source_soliton"});
  if (id == "scalar_kernel") {
    return plus(source, {"lagrangian_source", "source_soliton", "potential_vertical_source"});
  }
  if (id == "scalar_normal_target") {
    return plus(target, {"lagrangian_target", "target_soliton", "potential_normal_target"});
  }
  if (id == "scalar_range_target") return plus(target, {"lagrangian_target", "target_soliton"});
  throw GeometryError("unknown identity or theorem id '" + id + "'");
}

void PropositionRunner::Impl::prepare_source() {
  if (src_ready) return;
  src_ready = true;
  src.assign(pts.size(), {});
  const Metric& gm = ctx().source_metric();
  const AlmostComplexStructure* j = c.j ? &*c.j : nullptr;
  std::optional<TensorField> hess;
  std::optional<VectorField> grad;
  std::optional<Expr> div;
  if (c.f) {
    hess = hessian(gm, *c.f);
    grad = gradient(gm, *c.f);
    div = divergence(gm, *grad);
  }
  if (gm.has_symbolic_inverse()) (void)gm.ricci();
  parallel_for(pts.size(), [&](std::size_t k) {
    auto& s = src[k];
    const Point& p = pts[k];
    try {
      s.fr = compute_splittings(ctx(), p, j);
      s.vert = ctx().vertical_at(p);
      s.g = gm.at(p);
      s.ric = prop::ambient_ricci(gm, p);
      s.jac = ctx().map().jacobian_at(p);
      if (j) {
        s.xs = s.fr.jker;
        s.xs.insert(s.xs.end(), s.fr.mu.begin(), s.fr.mu.end());
        for (const auto& x : s.xs) {
          Eigen::VectorXd jx = j->apply_at(p, x);
          // B = vertical part of JX, C = its μ part.
          Eigen::VectorXd b = s.vert.P * jx;
          s.bx.push_back(b);
          s.cx.push_back(jx - b);
        }
      }
      if (hess) {
        s.hess = prop::eval2(*hess, p);
        s.grad = grad->eval(p);
        s.div_grad = evaluate(*div, p);
      }
    } catch (const std::exception& e) {
      s.error = e.what();
    }
  });
}

void PropositionRunner::Impl::prepare_target() {
  if (tgt_ready) return;
  tgt_ready = true;
  tgt.assign(pts.size(), {});
  const Metric& gn = ctx().target_metric();
  const AlmostComplexStructure* jp = c.jprime ? &*c.jprime : nullptr;
  std::optional<TensorField> hess;
  std::optional<VectorField> grad;
  if (c.g) {
    hess = hessian(gn, *c.g);
    grad = gradient(gn, *c.g);
  }
  if (jp && ctx().frames().target) {
    jrange_fields.clear();
    for (const auto& e : ctx().frames().range) jrange_fields.push_back(jp->apply(e));
  }
  if (gn.has_symbolic_inverse()) (void)gn.ricci();
  parallel_for(pts.size(), [&](std::size_t k) {
    auto& t = tgt[k];
    const Point& p = pts[k];
    try {
      t.fr = compute_splittings(ctx(), p, nullptr, jp);
      const Point& q = t.fr.q;
      t.h = gn.at(q);
      t.ric = prop::ambient_ricci(gn, q);
      if (ctx().has_exact_range()) {
        t.range = ctx().range_at(p);
      } else {
        t.range_error = "needs declared target frames";
      }
      if (jp) {
        t.jp = jp->matrix_at(q);
        Eigen::MatrixXd pr = projector_from(t.h, t.fr.range);
        for (const auto& d : t.fr.normal) {
          Eigen::VectorXd jd = t.jp * d;
          t.pd.push_back(pr * jd);
          t.qd.push_back(jd - pr * jd);
        }
      }
      if (hess) {
        t.hess = prop::eval2(*hess, q);
        t.grad = grad->eval(q);
      }
    } catch (const std::exception& e) {
      t.error = e.what();
    }
  });
}

int PropositionRunner::Impl::kernel_dim() {
  prepare_source();
  for (const auto& s : src) {
    if (s.error.empty()) return static_cast<int>(s.fr.vertical.size());
  }
  return c.ctx->expected_rank() ? ctx().source_metric().dim() - *c.ctx->expected_rank() : 0;
}

int PropositionRunner::Impl::range_dim() {
  prepare_source();
  for (const auto& s : src) {
    if (s.error.empty()) return s.fr.rank;
  }
  return c.ctx->expected_rank().value_or(0);
}

namespace {

const RestrictedGeometry& leaf(prop::Leaf& l, const std::function<RestrictedGeometry()>& build) {
  if (!l.tried) {
    l.tried = true;
    try {
      l.rg.emplace(build());
    } catch (const UnsupportedConfiguration& e) {
      l.error = e.what();
    } catch (const GeometryError& e) {
      l.error = e.what();
    }
  }
  if (!l.rg) throw UnsupportedConfiguration("restricted Ricci unavailable: " + l.error);
  return *l.rg;
}

}  // namespace

const RestrictedGeometry& PropositionRunner::Impl::ker_geometry() {
  prepare_source();
  return leaf(ker_leaf, [&] {
    const auto& d = ctx().frames();
    for (std::size_t k = 0; k < src.size(); ++k) {
      if (!src[k].error.empty()) continue;
      if (d.source) return RestrictedGeometry::from_fields(ctx().source_metric_ptr(), d.vertical, pts[k]);
      return RestrictedGeometry::from_vectors(ctx().source_metric_ptr(), src[k].fr.vertical, 1e-10);
    }
    throw GeometryError("no usable sample point");
  });
}

const RestrictedGeometry& PropositionRunner::Impl::range_geometry() {
  prepare_source();
  return leaf(range_leaf, [&] {
    const auto& d = ctx().frames();
    for (std::size_t k = 0; k < src.size(); ++k) {
      if (!src[k].error.empty()) continue;
      if (d.target) return RestrictedGeometry::from_fields(ctx().target_metric_ptr(), d.range, src[k].fr.q);
      return RestrictedGeometry::from_vectors(ctx().target_metric_ptr(), src[k].fr.range, 1e-10);
    }
    throw GeometryError("no usable sample point");
  });
}

const RestrictedGeometry& PropositionRunner::Impl::normal_geometry() {
  prepare_source();
  return leaf(normal_leaf, [&] {
    const auto& d = ctx().frames();
    for (std::size_t k = 0; k < src.size(); ++k) {
      if (!src[k].error.empty()) continue;
      if (d.target) return RestrictedGeometry::from_fields(ctx().target_metric_ptr(), d.normal, src[k].fr.q);
      return RestrictedGeometry::from_vectors(ctx().target_metric_ptr(), src[k].fr.normal, 1e-10);
    }
    throw GeometryError("no usable sample point");
  });
}

namespace {

// Leaf Ricci; vectors off the leaf make the term unavailable.
double leaf_ricci(const RestrictedGeometry& rg, const Point& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  try {
    return rg.ricci(p, a, b, 1e-8);
  } catch (const UnsupportedConfiguration&) {
    throw;
  } catch (const GeometryError& e) {
    throw UnsupportedConfiguration(e.what());
  }
}

}  // namespace

double PropositionRunner::Impl::ric_ker(std::size_t k, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return leaf_ricci(ker_geometry(), pts[k], a, b);
}

double PropositionRunner::Impl::ric_range(std::size_t k, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return leaf_ricci(range_geometry(), src[k].fr.q, a, b);
}

double PropositionRunner::Impl::ric_normal(std::size_t k, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return leaf_ricci(normal_geometry(), src[k].fr.q, a, b);
}

double PropositionRunner::Impl::div_a(std::size_t k, const Eigen::VectorXd& e, const Eigen::VectorXd& f) {
  const auto& s = src[k];
  double sum = 0.0;
  for (const auto& u : s.fr.vertical) sum += s.vert.inner(s.vert.nabla_A(u, e, f), u);
  return sum;
}

double PropositionRunner::Impl::lie_push(std::size_t k, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (!c.f) throw UnsupportedConfiguration("no dilation function f");
  if (!push_grad) push_grad = ctx().map().pushforward(gradient(ctx().source_metric(), *c.f));
  const auto& s = src[k];
  const Eigen::MatrixXd h = ctx().target_metric().at(s.fr.q);
  Eigen::VectorXd nx = ctx().pullback_nabla_at(pts[k], x, *push_grad);
  Eigen::VectorXd ny = ctx().pullback_nabla_at(pts[k], y, *push_grad);
  return nx.dot(h * (s.jac * y)) + ny.dot(h * (s.jac * x));
}

const DistributionAt& PropositionRunner::Impl::range_jet(std::size_t k) {
  const auto& t = tgt[k];
  if (!t.range) throw FramesRequired("range-side derivative terms " + t.range_error);
  return *t.range;
}

Eigen::VectorXd PropositionRunner::Impl::normal_nabla_jv(std::size_t k, const Eigen::VectorXd& a,
                                                         const Eigen::VectorXd& v) {
  const DistributionAt& r = range_jet(k);
  if (jrange_fields.empty()) throw FramesRequired("normal connection terms need J' and declared target frames");
  const auto& t = tgt[k];
  Eigen::VectorXd out = Eigen::VectorXd::Zero(r.n);
  for (std::size_t i = 0; i < jrange_fields.size(); ++i) {
    double ci = v.dot(t.h * t.fr.range[i]);
    if (ci != 0.0) out += ci * r.normal_nabla(t.fr.q, a, jrange_fields[i]);
  }
  return out;
}

double PropositionRunner::Impl::lambda_source() {
  if (!c.source_soliton) return 0.0;
  if (c.source_soliton->lambda) return *c.source_soliton->lambda;
  return solve_lambda(*c.source_soliton, {}, pts).lambda;
}

double PropositionRunner::Impl::lambda_target() {
  if (!c.target_soliton) return 0.0;
  if (c.target_soliton->lambda) return *c.target_soliton->lambda;
  prepare_target();
  std::vector<Point> qs;
  for (const auto& t : tgt) {
    if (t.error.empty()) qs.push_back(t.fr.q);
  }
  return solve_lambda(*c.target_soliton, {}, qs).lambda;
}

GateResult PropositionRunner::Impl::compute_gate(const std::string& name) {
  GateResult gr{name, true, 0.0, ""};
  auto from_check = [&](const CheckResult& r) {
    gr.residual = r.max_residual;
    gr.holds = r.verdict == Verdict::Pass;
    if (!gr.holds) gr.detail = std::string(verdict_name(r.verdict)) + " at residual " + std::to_string(r.max_residual);
  };
  auto fail = [&](const std::string& why) {
    gr.holds = false;
    gr.residual = std::numeric_limits<double>::infinity();
    gr.detail = why;
  };
  const double tol = c.gate_tol;

  if (name == "dim_kernel") {
    int r = kernel_dim();
    gr.residual = r;
    gr.holds = r > 1;
    gr.detail = "dim ker F* = " + std::to_string(r);
  } else if (name == "dim_range") {
    int m = range_dim();
    gr.residual = m;
    gr.holds = m > 1;
    gr.detail = "dim range F* = " + std::to_string(m);
  } else if (name == "riemannian_map") {
    from_check(check_riemannian_map(ctx(), pts, tol));
  } else if (name == "kahler_source") {
    if (!c.j) return fail("no source structure J"), gr;
    from_check(check_kahler(ctx().source_metric(), *c.j, pts, tol));
  } else if (name == "anti_invariant_source") {
    if (!c.j) return fail("no source structure J"), gr;
    prepare_source();
    std::vector<Point> ps;
    std::vector<std::vector<Eigen::VectorXd>> sub;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (!src[k].error.empty()) continue;
      ps.push_back(pts[k]);
      sub.push_back(src[k].fr.vertical);
    }
    from_check(check_anti_invariant(ctx().source_metric(), *c.j, ps, sub, tol));
  } else if (name == "clairaut_source") {
    if (!c.f) return fail("no dilation function f"), gr;
    from_check(check_clairaut_source(ctx(), *c.f, pts, tol));
  } else if (name == "lagrangian_source") {
    if (!c.j) return fail("no source structure J"), gr;
    prepare_source();
    double worst = 0.0;
    for (const auto& s : src) worst = std::max(worst, static_cast<double>(s.fr.mu.size()));
    gr.residual = worst;
    gr.holds = worst == 0.0;
    gr.detail = "max dim mu = " + std::to_string(static_cast<int>(worst));
  } else if (name == "totally_geodesic_map" || name == "horizontal_totally_geodesic") {
    prepare_source();
    const bool sff = name == "totally_geodesic_map";
    double worst = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto& s = src[k];
      if (!s.error.empty()) continue;
      const Eigen::MatrixXd h = ctx().target_metric().at(s.fr.q);
      for (const auto& x : s.fr.horizontal) {
        for (const auto& y : s.fr.horizontal) {
          worst = std::max(worst, sff ? gnorm(h, ctx().second_fundamental_form_at(pts[k], x, y))
                                      : gnorm(s.g, s.vert.A(x, y)));
        }
      }
    }
    gr.residual = worst;
    gr.holds = worst <= tol;
  } else if (name == "kahler_target" || name == "anti_invariant_target") {
    if (!c.jprime) return fail("no target structure J'"), gr;
    prepare_target();
    std::vector<Point> qs;
    std::vector<std::vector<Eigen::VectorXd>> sub;
    for (const auto& t : tgt) {
      if (!t.error.empty()) continue;
      qs.push_back(t.fr.q);
      sub.push_back(t.fr.range);
    }
    if (name == "kahler_target") {
      from_check(check_kahler(ctx().target_metric(), *c.jprime, qs, tol));
    } else {
      from_check(check_anti_invariant(ctx().target_metric(), *c.jprime, qs, sub, tol));
    }
  } else if (name == "clairaut_target") {
    if (!c.g) return fail("no dilation function g"), gr;
    from_check(check_clairaut_target(ctx(), *c.g, pts, tol));
  } else if (name == "lagrangian_target") {
    if (!c.jprime) return fail("no target structure J'"), gr;
    prepare_target();
    double worst = 0.0;
    for (const auto& t : tgt) worst = std::max(worst, static_cast<double>(t.fr.nu.size()));
    gr.residual = worst;
    gr.holds = worst == 0.0;
    gr.detail = "max dim nu = " + std::to_string(static_cast<int>(worst));
  } else if (name == "normal_totally_geodesic") {
    prepare_target();
    double worst = 0.0;
    for (const auto& t : tgt) {
      if (!t.error.empty()) continue;
      if (!t.range) return fail("range-side derivatives " + t.range_error), gr;
      for (const auto& d : t.fr.normal) {
        for (const auto& e : t.fr.normal) worst = std::max(worst, gnorm(t.h, t.range->P * (t.range->w(d) * e)));
      }
    }
    gr.residual = worst;
    gr.holds = worst <= tol;
  } else if (name == "source_soliton" || name == "target_soliton") {
    const bool source = name == "source_soliton";
    const auto& cfg = source ? c.source_soliton : c.target_soliton;
    if (!cfg) return fail("no soliton data"), gr;
    SolitonConfig s = *cfg;
    s.lambda = source ? lambda_source() : lambda_target();
    std::vector<Point> ps;
    if (source) {
      ps = pts;
    } else {
      prepare_target();
      for (const auto& t : tgt) {
        if (t.error.empty()) ps.push_back(t.fr.q);
      }
    }
    from_check(soliton_residual(s, {}, ps, tol));
  } else if (name == "potential_vertical_source" || name == "potential_horizontal_source") {
    if (!c.source_soliton) return fail("no soliton data"), gr;
    prepare_source();
    VectorField eta = potential_field(*c.source_soliton);
    const bool want_vertical = name == "potential_vertical_source";
    double worst = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto& s = src[k];
      if (!s.error.empty()) continue;
      Eigen::VectorXd v = eta.eval(pts[k]);
      Eigen::VectorXd vert = s.vert.P * v;
      worst = std::max(worst, gnorm(s.g, want_vertical ? Eigen::VectorXd(v - vert) : vert));
    }
    gr.residual = worst;
    gr.holds = worst <= tol;
  } else if (name == "potential_normal_target") {
    if (!c.target_soliton) return fail("no soliton data"), gr;
    prepare_target();
    VectorField theta = potential_field(*c.target_soliton);
    double worst = 0.0;
    for (const auto& t : tgt) {
      if (!t.error.empty()) continue;
      Eigen::VectorXd v = theta.eval(t.fr.q);
      worst = std::max(worst, gnorm(t.h, projector_from(t.h, t.fr.range) * v));
    }
    gr.residual = worst;
    gr.holds = worst <= tol;
  } else {
    throw GeometryError("unknown gate '" + name + "'");
  }
  return gr;
}

PropositionRunner::PropositionRunner(PropositionCase c, std::vector<Point> points)
    : case_(std::move(c)), points_(std::move(points)) {
  if (!case_.ctx) throw GeometryError("proposition case has no map");
  impl_ = std::make_unique<Impl>(case_, points_);
}

PropositionRunner::~PropositionRunner() = default;

GateResult PropositionRunner::gate(const std::string& name) {
  auto it = impl_->gates.find(name);
  if (it != impl_->gates.end()) return it->second;
  GateResult gr;
  try {
    gr = impl_->compute_gate(name);
  } catch (const GeometryError& e) {
    if (std::find(gates_for_all().begin(), gates_for_all().end(), name) == gates_for_all().end()) throw;
    gr = {name, false, std::numeric_limits<double>::infinity(), e.what()};
  }
  auto flag = case_.assume.find(name);
  if (flag != case_.assume.end() && !flag->second) {
    gr.holds = false;
    gr.detail = gr.detail.empty() ? "disabled by the case" : gr.detail + "; disabled by the case";
  }
  impl_->gates.emplace(name, gr);
  return gr;
}

CheckResult PropositionRunner::run(const std::string& id) {
  if (id == "alpha_soliton_range") return alpha_soliton_range();
  if (id == "ric_lie_relation") return ric_lie_relation();
  if (id == "scalar_range_source") return scalar_relation(ScalarRelation::RangeSource);
  if (id == "scalar_kernel") return scalar_relation(ScalarRelation::Kernel);
  if (id == "scalar_normal_target") return scalar_relation(ScalarRelation::NormalTarget);
  if (id == "scalar_range_target") return scalar_relation(ScalarRelation::RangeTarget);
  return identity(id);
}

CheckResult verify_identity(const PropositionCase& c, const std::string& id, const std::vector<Point>& points) {
  PropositionRunner r(c, points);
  return r.identity(id);
}

CheckResult verify_alpha_soliton_on_range(const PropositionCase& c, const std::vector<Point>& points) {
  PropositionRunner r(c, points);
  return r.alpha_soliton_range();
}

CheckResult verify_ric_lie_relation(const PropositionCase& c, const std::vector<Point>& points) {
  PropositionRunner r(c, points);
  return r.ric_lie_relation();
}

}  // namespace dgeo
