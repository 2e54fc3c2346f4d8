#pragma once

// Pointwise verification of the Ricci decompositions for anti-invariant
// Riemannian maps from and to Kähler manifolds, and of the theorem-level
// conclusions built on them.
//
// Every identity reports LHS (ambient Ricci only) against RHS terms that
// never touch the ambient Ricci tensor. Gates are evaluated first; a failed
// gate yields NOT-APPLICABLE but both sides are still computed and kept in
// the term breakdown for auditing.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgeo/restricted.hpp"
#include "dgeo/rmap.hpp"
#include "dgeo/soliton.hpp"
#include "dgeo/structure.hpp"

namespace dgeo {

struct PropositionCase {
  std::string name;
  std::shared_ptr<const MapContext> ctx;
  std::optional<AlmostComplexStructure> j;       // on the source
  std::optional<AlmostComplexStructure> jprime;  // on the target
  std::optional<Expr> f;                         // source dilation, r̃ = e^f
  std::optional<Expr> g;                         // target dilation, s̃ = e^g
  std::optional<SolitonConfig> source_soliton;   // potential η on M
  std::optional<SolitonConfig> target_soliton;   // potential ϑ on N
  // A false entry disables the named gate; gates are never forced on.
  std::map<std::string, bool> assume;
  double tol = 1e-8;
  double gate_tol = 1e-8;
};

// Identity ids, source side first.
const std::vector<std::string>& identity_ids();
bool is_source_identity(const std::string& id);
// alpha_soliton_range, ric_lie_relation and the four scalar relations.
const std::vector<std::string>& theorem_ids();

// Names of the gates an identity or theorem checks, in order.
std::vector<std::string> gates_for(const std::string& id);

class PropositionRunner {
 public:
  PropositionRunner(PropositionCase c, std::vector<Point> points);
  ~PropositionRunner();
  PropositionRunner(const PropositionRunner&) = delete;
  PropositionRunner& operator=(const PropositionRunner&) = delete;

  const PropositionCase& config() const { return case_; }
  const std::vector<Point>& points() const { return points_; }

  // Cached by name. Unknown names throw GeometryError.
  GateResult gate(const std::string& name);

  // Throws GeometryError for an unknown id.
  CheckResult identity(const std::string& id);
  CheckResult alpha_soliton_range();
  CheckResult ric_lie_relation();
  CheckResult scalar_relation(ScalarRelation which);
  // Dispatch over identity_ids() and theorem_ids().
  CheckResult run(const std::string& id);

  // Ric(JX, JY) - Ric(X, Y) over an orthonormal basis, source (J) or
  // target (J'). Reported against tol; meaningful only for Kähler cases.
  CheckResult j_invariance(bool target);

  // O'Neill decomposition of the ambient Ricci tensor on vertical pairs:
  // Ric(U,V) = Ric^ker(U,V) - g(N, T_U V) + Σ g((∇_{X_i}T)_U V, X_i)
  //            + Σ g(A_{X_i}U, A_{X_i}V),  N = Σ T_{u_j}u_j.
  // No Kähler structure involved; validates the restricted-Ricci and O'Neill
  // pipelines against the ambient Ricci tensor.
  CheckResult vertical_ricci_decomposition();

  struct Impl;  // internal

 private:
  PropositionCase case_;
  std::vector<Point> points_;
  std::unique_ptr<Impl> impl_;
};

CheckResult verify_identity(const PropositionCase& c, const std::string& id, const std::vector<Point>& points);
CheckResult verify_alpha_soliton_on_range(const PropositionCase& c, const std::vector<Point>& points);
CheckResult verify_ric_lie_relation(const PropositionCase& c, const std::vector<Point>& points);

// Ricci of the leaf metric at p, in leaf coordinates.
inline Eigen::MatrixXd restricted_ricci(const RestrictedGeometry& rg, const Point& p) { return rg.ricci_at(p); }

}  // namespace dgeo
