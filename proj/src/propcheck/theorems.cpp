#include <cmath>
#include <limits>

#include "internal.hpp"

namespace dgeo {

namespace {

bool gate_holds(const std::vector<GateResult>& gates, const std::string& name) {
  for (const auto& g : gates) {
    if (g.name == name) return g.holds;
  }
  return true;
}

}  // namespace

CheckResult PropositionRunner::alpha_soliton_range() {
  auto& m = *impl_;
  CheckResult r;
  r.id = "alpha_soliton_range";
  r.tolerance = case_.tol;
  for (const auto& name : gates_for(r.id)) r.gates.push_back(gate(name));

  m.prepare_source();
  double lambda = 0.0;
  try {
    lambda = m.lambda_source();
  } catch (const GeometryError& e) {
    r.notes.push_back(std::string("lambda unavailable: ") + e.what());
  }
  r.set_value("lambda", lambda);
  for (const auto& g : r.gates) {
    if (g.name == "source_soliton") r.set_value("source_soliton_residual", g.residual);
  }

  prop::Accumulator acc(r, *m.ctx().map().source());
  double hess_gap = 0.0, div_a = 0.0, lie_eta = 0.0, propagation = 0.0;
  std::optional<VectorField> eta;
  if (case_.source_soliton) {
    const auto& sc = *case_.source_soliton;
    eta = sc.xi ? *sc.xi : gradient(*sc.metric, *sc.potential);
  }
  std::size_t pairs = 0;
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
    const double rr = static_cast<double>(s.fr.vertical.size());
    if (rr == 0.0) continue;
    const Eigen::MatrixXd h = m.ctx().target_metric().at(s.fr.q);
    Eigen::MatrixXd lie_eta_m;
    if (eta) {
      SolitonConfig unit = *case_.source_soliton;
      unit.alpha = 1.0;
      lie_eta_m = soliton_operator_at(unit, p) - s.ric;
    }
    const auto& vert = s.fr.vertical;
    for (std::size_t a = 0; a < vert.size(); ++a) {
      for (std::size_t b = 0; b < vert.size(); ++b) {
        const Eigen::VectorXd ju = case_.j->apply_at(p, vert[a]);
        const Eigen::VectorXd jw = case_.j->apply_at(p, vert[b]);
        const Eigen::VectorXd fu = s.jac * ju, fw = s.jac * jw;
        double half_l = std::numeric_limits<double>::quiet_NaN();
        acc.begin();
        acc.term("1/2 L_N(F*JU,F*JV)", [&] { return half_l = 0.5 * m.lie_push(k, ju, jw); });
        acc.term("(1/r) RicR(F*JU,F*JV)", [&] { return m.ric_range(k, fu, fw) / rr; });
        acc.term("(lambda/r) h(F*JU,F*JV)", [&] { return lambda / rr * fu.dot(h * fw); });
        acc.finish(0.0, k, p, "U" + std::to_string(a + 1) + ",V" + std::to_string(b + 1));
        ++pairs;
        if (std::isfinite(half_l)) {
          if (case_.f) hess_gap = std::max(hess_gap, std::abs(half_l - ju.dot(s.hess * jw)));
          if (eta) {
            const double le = vert[a].dot(lie_eta_m * vert[b]);
            lie_eta = std::max(lie_eta, std::abs(le));
            propagation = std::max(propagation, std::abs(le - half_l));
          }
        }
        try {
          div_a = std::max(div_a, std::abs(m.div_a(k, ju, jw)));
        } catch (const FramesRequired&) {
        }
      }
    }
  }
  acc.close();
  // Residual is |0 - Σ terms|; the lhs/rhs values restate that.
  r.set_value("hess_gap", hess_gap);
  r.set_value("divA", div_a);
  r.set_value("lie_eta_term", lie_eta);
  r.set_value("propagation_gap", propagation);
  try {
    CheckResult uv = identity("ric_uv");
    r.set_value("ric_uv_defect", uv.max_residual);
  } catch (const GeometryError& e) {
    r.notes.push_back(std::string("ric_uv unavailable: ") + e.what());
  }
  if (pairs == 0 && r.notes.empty()) {
    r.vacuous = true;
    r.notes.push_back("trivial kernel");
  }
  finalize(r);
  return r;
}

CheckResult PropositionRunner::ric_lie_relation() {
  auto& m = *impl_;
  CheckResult r;
  r.id = "ric_lie_relation";
  r.tolerance = case_.tol;
  for (const auto& name : gates_for(r.id)) r.gates.push_back(gate(name));
  m.prepare_source();
  prop::Accumulator acc(r, *m.ctx().map().source());
  bool any_c = false;
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
    const double rr = static_cast<double>(s.fr.vertical.size());
    const auto& vert = s.fr.vertical;
    for (std::size_t a = 0; a < vert.size(); ++a) {
      for (std::size_t b = 0; b < s.xs.size(); ++b) {
        const Eigen::VectorXd& cx = s.cx[b];
        if (cx.norm() < 1e-12) continue;
        any_c = true;
        const Eigen::VectorXd ju = case_.j->apply_at(p, vert[a]);
        double lhs = std::numeric_limits<double>::quiet_NaN();
        try {
          lhs = m.ric_range(k, s.jac * ju, s.jac * cx);
        } catch (const UnsupportedConfiguration& e) {
          acc.skip(k, p, e.what());
          continue;
        }
        acc.begin();
        acc.term("(r/2) L_N(F*JU,F*CX)", [&] { return 0.5 * rr * m.lie_push(k, ju, cx); });
        acc.finish(lhs, k, p, "U" + std::to_string(a + 1) + ",X" + std::to_string(b + 1));
      }
    }
  }
  acc.close();
  if (!any_c) {
    r.vacuous = true;
    r.notes.push_back("CX vanishes at every sample (mu = 0)");
  }
  finalize(r);
  return r;
}

CheckResult PropositionRunner::scalar_relation(ScalarRelation which) {
  auto& m = *impl_;
  const std::string id = scalar_relation_id(which);
  std::vector<GateResult> gates;
  for (const auto& name : gates_for(id)) gates.push_back(gate(name));
  const bool target = which == ScalarRelation::NormalTarget || which == ScalarRelation::RangeTarget;
  ScalarRelationInput in;
  in.which = which;
  in.ctx = &m.ctx();
  in.target_function = case_.g;
  in.gates = gates;
  try {
    in.lambda = target ? m.lambda_target() : m.lambda_source();
  } catch (const GeometryError&) {
    in.lambda = 0.0;
  }
  try {
    CheckResult r = check_scalar_relation(in, points_, case_.tol);
    r.set_value("lambda", in.lambda);
    return r;
  } catch (const GeometryError& e) {
    CheckResult r;
    r.id = id;
    r.tolerance = case_.tol;
    r.gates = gates;
    r.max_residual = std::numeric_limits<double>::infinity();
    r.terms.push_back({"scalar curvature", 0.0, false, std::string("UNAVAILABLE: ") + e.what()});
    r.notes.push_back(e.what());
    if (!gate_holds(gates, "dim_kernel") || !gate_holds(gates, "dim_range")) r.notes.push_back("dimension gate fails");
    finalize(r);
    return r;
  }
}

}  // namespace dgeo
