#include <cmath>
#include <limits>

#include "internal.hpp"

namespace dgeo {

namespace {

using Vec = Eigen::VectorXd;

std::string pair_label(const char* a, std::size_t i, const char* b, std::size_t j) {
  return std::string(a) + std::to_string(i + 1) + "," + b + std::to_string(j + 1);
}

// Source-side building blocks at one sample point.
struct SourceTerms {
  PropositionRunner::Impl& m;
  std::size_t k;
  const prop::SourcePoint& s;
  const Point& p;

  double r() const { return static_cast<double>(s.fr.vertical.size()); }
  double ric(const Vec& a, const Vec& b) const { return a.dot(s.ric * b); }
  double g(const Vec& a, const Vec& b) const { return a.dot(s.g * b); }
  double hess(const Vec& a, const Vec& b) const {
    if (!m.c.f) throw UnsupportedConfiguration("no dilation function f");
    return a.dot(s.hess * b);
  }
  double df(const Vec& a) const {
    if (!m.c.f) throw UnsupportedConfiguration("no dilation function f");
    return s.grad.dot(s.g * a);
  }
  double grad_sq() const {
    if (!m.c.f) throw UnsupportedConfiguration("no dilation function f");
    return s.grad.dot(s.g * s.grad);
  }
  double ric_range(const Vec& a, const Vec& b) const { return m.ric_range(k, s.jac * a, s.jac * b); }
  double ric_ker(const Vec& a, const Vec& b) const { return m.ric_ker(k, a, b); }
  Vec jv(const Vec& v) const { return m.c.j->apply_at(p, v); }
  double h(const Vec& a, const Vec& b) const {
    return a.dot(m.ctx().target_metric().at(s.fr.q) * b);
  }
  Vec sff(const Vec& a, const Vec& b) const { return m.ctx().second_fundamental_form_at(p, a, b); }
};

void add_bxby(prop::Accumulator& acc, const SourceTerms& t, const Vec& bx, const Vec& by, const std::string& pre) {
  const auto& s = t.s;
  acc.term(pre + "RicK(BX,BY)", [&] { return t.ric_ker(bx, by); });
  acc.term(pre + "-r|grad f|^2 g(BX,BY)", [&] { return -t.r() * t.grad_sq() * t.g(bx, by); });
  acc.term(pre + "sum g(A_Xi BX,A_Xi BY)", [&] {
    double sum = 0.0;
    for (const auto& xi : s.xs) sum += t.g(s.vert.A(xi, bx), s.vert.A(xi, by));
    return sum;
  });
  acc.term(pre + "-g(BX,BY) div grad f", [&] {
    if (!t.m.c.f) throw UnsupportedConfiguration("no dilation function f");
    return -t.g(bx, by) * s.div_grad;
  });
}

void add_cxcy(prop::Accumulator& acc, const SourceTerms& t, const Vec& cx, const Vec& cy, const std::string& pre) {
  const auto& s = t.s;
  acc.term(pre + "-r Hess f(CX,CY)", [&] { return -t.r() * t.hess(cx, cy); });
  acc.term(pre + "RicR(F*CX,F*CY)", [&] { return t.ric_range(cx, cy); });
  acc.term(pre + "-r CX(f) CY(f)", [&] { return -t.r() * t.df(cx) * t.df(cy); });
  acc.term(pre + "sum g(A_CX u_j,A_CY u_j)", [&] {
    double sum = 0.0;
    for (const auto& u : s.fr.vertical) sum += t.g(s.vert.A(cx, u), s.vert.A(cy, u));
    return sum;
  });
  acc.term(pre + "divA(CX,CY)", [&] { return t.m.div_a(t.k, cx, cy); });
  acc.term(pre + "-sum h(dF*(Xi,CY),dF*(CX,Xi))", [&] {
    double sum = 0.0;
    for (const auto& xi : s.xs) sum += t.h(t.sff(xi, cy), t.sff(cx, xi));
    return -sum;
  });
  acc.term(pre + "h(dF*(CX,CY),tau)", [&] {
    Vec tau = Vec::Zero(s.jac.rows());
    for (const auto& xi : s.xs) tau += t.sff(xi, xi);
    return t.h(t.sff(cx, cy), tau);
  });
}

void add_bxcy(prop::Accumulator& acc, const SourceTerms& t, const Vec& bx, const Vec& cy, const std::string& pre) {
  const auto& s = t.s;
  acc.term(pre + "-(r+1)Hess f(BX,CY)", [&] { return -(t.r() + 1.0) * t.hess(bx, cy); });
  acc.term(pre + "-sum g((nabla_Xi A)(CY,Xi),BX)", [&] {
    double sum = 0.0;
    for (const auto& xi : s.xs) sum += t.g(s.vert.nabla_A(xi, cy, xi), bx);
    return -sum;
  });
}

void add_cxby(prop::Accumulator& acc, const SourceTerms& t, const Vec& cx, const Vec& by, const std::string& pre) {
  const auto& s = t.s;
  acc.term(pre + "-(r+1)Hess f(BY,CX)", [&] { return -(t.r() + 1.0) * t.hess(by, cx); });
  acc.term(pre + "-sum g((nabla_Xi A)(CX,Xi),BY)", [&] {
    double sum = 0.0;
    for (const auto& xi : s.xs) sum += t.g(s.vert.nabla_A(xi, cx, xi), by);
    return -sum;
  });
}

// Target-side building blocks at F(p).
struct TargetTerms {
  PropositionRunner::Impl& m;
  std::size_t k;
  const prop::TargetPoint& t;

  double rank() const { return static_cast<double>(t.fr.range.size()); }
  double ric(const Vec& a, const Vec& b) const { return a.dot(t.ric * b); }
  double h(const Vec& a, const Vec& b) const { return a.dot(t.h * b); }
  double hess(const Vec& a, const Vec& b) const {
    if (!m.c.g) throw UnsupportedConfiguration("no dilation function g");
    return a.dot(t.hess * b);
  }
  double dg(const Vec& a) const {
    if (!m.c.g) throw UnsupportedConfiguration("no dilation function g");
    return t.grad.dot(t.h * a);
  }
  double grad_sq() const {
    if (!m.c.g) throw UnsupportedConfiguration("no dilation function g");
    return t.grad.dot(t.h * t.grad);
  }
  double ric_range(const Vec& a, const Vec& b) const { return m.ric_range(k, a, b); }
  double ric_normal(const Vec& a, const Vec& b) const { return m.ric_normal(k, a, b); }
  const DistributionAt& jet() const { return m.range_jet(k); }
  // Σ_j h((∇_x S)_d F*X_j, F*X_j) and Σ_j h((∇_{F*X_j} S)_d y, F*X_j).
  double trace_nabla_s_first(const Vec& x, const Vec& d) const {
    const auto& r = jet();
    double sum = 0.0;
    for (const auto& e : t.fr.range) sum += h(r.nabla_S(x, d, e), e);
    return sum;
  }
  double trace_nabla_s_second(const Vec& d, const Vec& y) const {
    const auto& r = jet();
    double sum = 0.0;
    for (const auto& e : t.fr.range) sum += h(r.nabla_S(e, d, y), e);
    return sum;
  }
  double trace_normal_curvature(const Vec& a, const Vec& xi) const {
    const auto& r = jet();
    double sum = 0.0;
    for (const auto& e : t.fr.normal) sum += h(r.normal_curvature(a, e, xi), e);
    return sum;
  }
};

const char* kInterpreted = "INTERPRETED";

void add_pdqe(prop::Accumulator& acc, const TargetTerms& t, const Vec& pd, const Vec& qe, const std::string& pre) {
  acc.term(pre + "sum h((nabla_PD S)_QE F*X_j,F*X_j)", [&] { return t.trace_nabla_s_first(pd, qe); }, kInterpreted);
  acc.term(pre + "-sum h((nabla_F*X_j S)_QE PD,F*X_j)", [&] { return -t.trace_nabla_s_second(qe, pd); },
           kInterpreted);
  acc.term(pre + "-sum h(Rperp(PD,e_k)QE,e_k)", [&] { return -t.trace_normal_curvature(pd, qe); }, kInterpreted);
}

void add_pdpe(prop::Accumulator& acc, const TargetTerms& t, const Vec& pd, const Vec& pe, const std::string& pre) {
  acc.term(pre + "RicR(PD,PE)", [&] { return t.ric_range(pd, pe); });
  acc.term(pre + "-h(PD,PE)(n1|grad g|^2 + sum Hess g(e_k,e_k))", [&] {
    double n1 = static_cast<double>(t.t.fr.normal.size());
    double tr = 0.0;
    for (const auto& e : t.t.fr.normal) tr += t.hess(e, e);
    return -t.h(pd, pe) * (n1 * t.grad_sq() + tr);
  });
}

void add_qdqe(prop::Accumulator& acc, const TargetTerms& t, const Vec& qd, const Vec& qe, const std::string& pre) {
  acc.term(pre + "Ricperp(QD,QE)", [&] { return t.ric_normal(qd, qe); });
  acc.term(pre + "-(m-r)(QD(g)QE(g) + Hess g(QD,QE))",
           [&] { return -t.rank() * (t.dg(qd) * t.dg(qe) + t.hess(qd, qe)); });
}

}  // namespace

CheckResult PropositionRunner::identity(const std::string& id) {
  const std::vector<std::string> gate_names = gates_for(id);  // validates id
  auto& m = *impl_;
  CheckResult r;
  r.id = id;
  r.tolerance = case_.tol;
  for (const auto& gname : gate_names) r.gates.push_back(gate(gname));

  const bool source = is_source_identity(id);
  const Chart& chart = *m.ctx().map().source();
  prop::Accumulator acc(r, chart);
  std::size_t pairs = 0;

  if (source) {
    m.prepare_source();
    for (std::size_t k = 0; k < points_.size(); ++k) {
      const auto& s = m.src[k];
      const Point& p = points_[k];
      if (!s.error.empty()) {
        acc.skip(k, p, s.error);
        continue;
      }
      if (!case_.j) {
        acc.skip(k, p, "no source structure J");
        continue;
      }
      SourceTerms t{m, k, s, p};
      const auto& vert = s.fr.vertical;
      const auto& xs = s.xs;

      if (id == "ric_uv" || id == "lag_ric_uv") {
        for (std::size_t a = 0; a < vert.size(); ++a) {
          for (std::size_t b = 0; b < vert.size(); ++b) {
            const Vec ju = t.jv(vert[a]), jw = t.jv(vert[b]);
            acc.begin();
            acc.term("RicR(F*JU,F*JV)", [&] { return t.ric_range(ju, jw); });
            if (id == "ric_uv") {
              acc.term("r Hess f(JU,JV)", [&] { return t.r() * t.hess(ju, jw); });
              acc.term("-divA(JU,JV)", [&] { return -m.div_a(k, ju, jw); });
            }
            acc.finish(t.ric(vert[a], vert[b]), k, p, pair_label("U", a, "V", b));
            ++pairs;
          }
        }
      } else if (id == "ric_ux" || id == "lag_ric_ux") {
        for (std::size_t a = 0; a < vert.size(); ++a) {
          for (std::size_t b = 0; b < xs.size(); ++b) {
            const Vec ju = t.jv(vert[a]);
            const Vec &bx = s.bx[b], &cx = s.cx[b];
            acc.begin();
            if (id == "ric_ux") {
              acc.term("-(r+1)Hess f(BX,JU)", [&] { return -(t.r() + 1.0) * t.hess(bx, ju); });
              acc.term("divA(JU,CX)", [&] { return m.div_a(k, ju, cx); });
              acc.term("-r Hess f(JU,CX)", [&] { return -t.r() * t.hess(ju, cx); });
              acc.term("RicR(F*JU,F*CX)", [&] { return t.ric_range(ju, cx); });
              acc.term("sum g((nabla_Xi A)(Xi,JU),BX)", [&] {
                double sum = 0.0;
                for (const auto& xi : xs) sum += t.g(s.vert.nabla_A(xi, xi, ju), bx);
                return sum;
              });
            }
            acc.finish(t.ric(vert[a], xs[b]), k, p, pair_label("U", a, "X", b));
            ++pairs;
          }
        }
      } else {
        for (std::size_t a = 0; a < xs.size(); ++a) {
          for (std::size_t b = 0; b < xs.size(); ++b) {
            const Vec &bx = s.bx[a], &cx = s.cx[a], &by = s.bx[b], &cy = s.cx[b];
            double lhs = 0.0;
            acc.begin();
            if (id == "ric_bxby") {
              lhs = t.ric(bx, by);
              add_bxby(acc, t, bx, by, "");
            } else if (id == "ric_cxcy") {
              lhs = t.ric(cx, cy);
              add_cxcy(acc, t, cx, cy, "");
            } else if (id == "ric_bxcy") {
              lhs = t.ric(bx, cy);
              add_bxcy(acc, t, bx, cy, "");
            } else if (id == "ric_cxby") {
              lhs = t.ric(cx, by);
              add_cxby(acc, t, cx, by, "");
            } else if (id == "ric_xy") {
              lhs = t.ric(xs[a], xs[b]);
              add_bxby(acc, t, bx, by, "[BB] ");
              add_cxcy(acc, t, cx, cy, "[CC] ");
              add_bxcy(acc, t, bx, cy, "[BC] ");
              add_cxby(acc, t, cx, by, "[CB] ");
            } else if (id == "lag_ric_xy") {
              lhs = t.ric(xs[a], xs[b]);
              acc.term("RicK(BX,BY)", [&] { return t.ric_ker(bx, by); });
            } else {  // cor_ric_xy
              lhs = t.ric(xs[a], xs[b]);
              acc.term("RicK(BX,BY)", [&] { return t.ric_ker(bx, by); });
              acc.term("-(r|grad f|^2 + div grad f) g(BX,BY)", [&] {
                return -(t.r() * t.grad_sq() + s.div_grad) * t.g(bx, by);
              });
              acc.term("-r Hess f(CX,CY)", [&] { return -t.r() * t.hess(cx, cy); });
              acc.term("RicR(F*CX,F*CY)", [&] { return t.ric_range(cx, cy); });
              acc.term("-r CX(f) CY(f)", [&] { return -t.r() * t.df(cx) * t.df(cy); });
            }
            acc.finish(lhs, k, p, pair_label("X", a, "Y", b));
            ++pairs;
          }
        }
      }
    }
  } else {
    m.prepare_target();
    for (std::size_t k = 0; k < points_.size(); ++k) {
      const auto& tp = m.tgt[k];
      const Point& p = points_[k];
      if (!tp.error.empty()) {
        acc.skip(k, p, tp.error);
        continue;
      }
      if (!case_.jprime) {
        acc.skip(k, p, "no target structure J'");
        continue;
      }
      // Source-side readiness is needed by the leaf geometries.
      m.prepare_source();
      TargetTerms t{m, k, tp};
      const auto& range = tp.fr.range;
      const auto& normal = tp.fr.normal;

      if (id == "ric_fxfy" || id == "lag_ric_fxfy") {
        for (std::size_t a = 0; a < range.size(); ++a) {
          for (std::size_t b = 0; b < range.size(); ++b) {
            const Vec jx = tp.jp * range[a], jy = tp.jp * range[b];
            acc.begin();
            acc.term("Ricperp(J'F*X,J'F*Y)", [&] { return t.ric_normal(jx, jy); });
            if (id == "ric_fxfy") {
              acc.term("(m-r) h(grad g,nablaperp_{J'F*X} J'F*Y)", [&] {
                if (!case_.g) throw UnsupportedConfiguration("no dilation function g");
                return t.rank() * t.h(tp.grad, m.normal_nabla_jv(k, jx, range[b]));
              });
            }
            acc.finish(t.ric(range[a], range[b]), k, p, pair_label("F*X", a, "F*Y", b));
            ++pairs;
          }
        }
      } else if (id == "ric_fxe" || id == "lag_ric_fxe") {
        for (std::size_t a = 0; a < range.size(); ++a) {
          for (std::size_t b = 0; b < normal.size(); ++b) {
            const Vec jx = tp.jp * range[a];
            const Vec &pe = tp.pd[b], &qe = tp.qd[b];
            acc.begin();
            if (id == "ric_fxe") acc.term("Ricperp(J'F*X,QE)", [&] { return t.ric_normal(jx, qe); });
            acc.term("sum h((nabla_PE S)_{J'F*X} F*X_j,F*X_j)", [&] { return t.trace_nabla_s_first(pe, jx); },
                     kInterpreted);
            acc.term("-sum h((nabla_F*X_j S)_{J'F*X} PE,F*X_j)", [&] { return -t.trace_nabla_s_second(jx, pe); },
                     kInterpreted);
            if (id == "ric_fxe") {
              acc.term("(m-r) h(grad g,nablaperp_QE J'F*X)", [&] {
                if (!case_.g) throw UnsupportedConfiguration("no dilation function g");
                return t.rank() * t.h(tp.grad, m.normal_nabla_jv(k, qe, range[a]));
              });
            }
            acc.term("-sum h(Rperp(PE,e_k)J'F*X,e_k)", [&] { return -t.trace_normal_curvature(pe, jx); },
                     kInterpreted);
            acc.finish(t.ric(range[a], normal[b]), k, p, pair_label("F*X", a, "E", b));
            ++pairs;
          }
        }
      } else {
        for (std::size_t a = 0; a < normal.size(); ++a) {
          for (std::size_t b = 0; b < normal.size(); ++b) {
            const Vec &pd = tp.pd[a], &qd = tp.qd[a], &pe = tp.pd[b], &qe = tp.qd[b];
            double lhs = 0.0;
            acc.begin();
            if (id == "ric_pdpe") {
              lhs = t.ric(pd, pe);
              add_pdpe(acc, t, pd, pe, "");
            } else if (id == "ric_pdqe") {
              lhs = t.ric(pd, qe);
              add_pdqe(acc, t, pd, qe, "");
            } else if (id == "ric_peqd") {
              lhs = t.ric(pe, qd);
              add_pdqe(acc, t, pe, qd, "");
            } else if (id == "ric_qdqe") {
              lhs = t.ric(qd, qe);
              add_qdqe(acc, t, qd, qe, "");
            } else if (id == "ric_de") {
              lhs = t.ric(normal[a], normal[b]);
              add_pdpe(acc, t, pd, pe, "[PP] ");
              add_pdqe(acc, t, pd, qe, "[PQ] ");
              add_pdqe(acc, t, pe, qd, "[QP] ");
              add_qdqe(acc, t, qd, qe, "[QQ] ");
            } else {  // lag_ric_de
              lhs = t.ric(normal[a], normal[b]);
              acc.term("RicR(PD,PE)", [&] { return t.ric_range(pd, pe); });
            }
            acc.finish(lhs, k, p, pair_label("D", a, "E", b));
            ++pairs;
          }
        }
      }
    }
  }
  acc.close();
  if (pairs == 0 && r.notes.empty()) {
    r.vacuous = true;
    r.notes.push_back("no vector pairs to evaluate");
  }
  finalize(r);
  return r;
}

CheckResult PropositionRunner::j_invariance(bool target) {
  auto& m = *impl_;
  CheckResult r;
  r.id = target ? "j_invariance_target" : "j_invariance_source";
  r.tolerance = case_.tol;
  const auto& js = target ? case_.jprime : case_.j;
  if (!js) throw GeometryError(target ? "no target structure J'" : "no source structure J");
  const Metric& g = target ? m.ctx().target_metric() : m.ctx().source_metric();
  const Chart& chart = *m.ctx().map().source();
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const Point q = target ? m.ctx().map().image(points_[k]) : points_[k];
    const Eigen::MatrixXd ric = prop::ambient_ricci(g, q);
    const Eigen::MatrixXd jm = js->matrix_at(q);
    const auto basis = residual_basis(g, *js, q);
    double worst = 0.0;
    for (const auto& ea : basis) {
      for (const auto& eb : basis) {
        worst = std::max(worst, std::abs((jm * ea).dot(ric * (jm * eb)) - ea.dot(ric * eb)));
      }
    }
    r.observe(worst, k, chart.coords_of(points_[k]));
  }
  finalize(r);
  return r;
}

CheckResult PropositionRunner::vertical_ricci_decomposition() {
  auto& m = *impl_;
  CheckResult r;
  r.id = "vertical_ricci_decomposition";
  r.tolerance = case_.tol;
  m.prepare_source();
  prop::Accumulator acc(r, *m.ctx().map().source());
  std::size_t pairs = 0;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const auto& s = m.src[k];
    const Point& p = points_[k];
    if (!s.error.empty()) {
      acc.skip(k, p, s.error);
      continue;
    }
    const auto& vert = s.fr.vertical;
    const auto& hor = s.fr.horizontal;
    Vec nvec = Vec::Zero(s.g.rows());
    for (const auto& u : vert) nvec += s.vert.T(u, u);
    for (std::size_t a = 0; a < vert.size(); ++a) {
      for (std::size_t b = 0; b < vert.size(); ++b) {
        const Vec &u = vert[a], &v = vert[b];
        acc.begin();
        acc.term("RicK(U,V)", [&] { return m.ric_ker(k, u, v); });
        acc.term("-g(N,T_U V)", [&] { return -nvec.dot(s.g * s.vert.T(u, v)); });
        acc.term("sum g((nabla_Xi T)(U,V),Xi)", [&] {
          double sum = 0.0;
          for (const auto& x : hor) sum += s.vert.nabla_T(x, u, v).dot(s.g * x);
          return sum;
        });
        acc.term("sum g(A_Xi U,A_Xi V)", [&] {
          double sum = 0.0;
          for (const auto& x : hor) sum += s.vert.A(x, u).dot(s.g * s.vert.A(x, v));
          return sum;
        });
        acc.finish(u.dot(s.ric * v), k, p, pair_label("U", a, "V", b));
        ++pairs;
      }
    }
  }
  acc.close();
  if (pairs == 0 && r.notes.empty()) {
    r.vacuous = true;
    r.notes.push_back("trivial kernel");
  }
  finalize(r);
  return r;
}

}  // namespace dgeo
