#pragma once

// Ricci solitons ½ L_ξ g + α Ric + λ g = 0, Einstein and conformal checks,
// the two Clairaut conditions, and scalar-curvature relations.

#include <optional>
#include <string>
#include <vector>

#include "dgeo/geometry.hpp"
#include "dgeo/report.hpp"
#include "dgeo/restricted.hpp"
#include "dgeo/rmap.hpp"

namespace dgeo {

struct SolitonConfig {
  std::shared_ptr<const Metric> metric;
  // Exactly one of these; the potential f stands for ξ = ∇f with Hess f in
  // place of ½ L_ξ g.
  std::optional<VectorField> xi;
  std::optional<Expr> potential;
  double alpha = 1.0;
  std::optional<double> lambda;  // unset: solve
};

// Throws GeometryError when the config is malformed.
void validate(const SolitonConfig& cfg);

// ½ L_ξ g (or Hess f) + α Ric at p, in coordinates.
Eigen::MatrixXd soliton_operator_at(const SolitonConfig& cfg, const Point& p);

// Orthonormal basis of the restriction span at p (all coordinates when
// the restriction is empty).
std::vector<Eigen::VectorXd> restriction_basis(const Metric& g, const std::vector<VectorField>& restriction,
                                               const Point& p);

// max |½(L_ξ g)(X,Y) + α Ric(X,Y) + λ g(X,Y)| over orthonormal pairs of the
// restriction span. Needs cfg.lambda.
CheckResult soliton_residual(const SolitonConfig& cfg, const std::vector<VectorField>& restriction,
                             const std::vector<Point>& points, double tol = 1e-8);

struct LambdaFit {
  double lambda = 0.0;
  double spread = 0.0;    // max |λ_sample - λ|
  double residual = 0.0;  // max |K + λ g| over all pairs with the fitted λ
  std::size_t samples = 0;
};
// Least-squares λ over all point/pair samples. Throws GeometryError when
// every sampled g(X, Y) vanishes.
LambdaFit solve_lambda(const SolitonConfig& cfg, const std::vector<VectorField>& restriction,
                       const std::vector<Point>& points);

// Fits a constant λ with Ric + λ g = 0 on the leaves; residual is the max
// operator norm of Ric + λ g in an orthonormal basis. Values: lambda.
CheckResult check_einstein(const RestrictedGeometry& rg, const std::vector<Point>& points, double tol = 1e-8);

struct ConformalClaim {
  double lambda = 0.0;
  double r = 1.0;  // μ' = 2λ/r
};
// Fits φ(p) with L_X g = φ g on the restriction span; residual is the max
// operator norm of L_X g - φ g. Values: phi_min, phi_max, phi_first and,
// with a claim, claim_residual = max |½ L_X g + μ' g|.
CheckResult check_conformal(const Metric& g, const VectorField& x, const std::vector<VectorField>& restriction,
                            const std::vector<Point>& points, double tol = 1e-8,
                            const std::optional<ConformalClaim>& claim = std::nullopt);

// max ‖T_U V + g(U,V) ∇f‖ over vertical orthonormal pairs. Values:
// umbilicity (‖T_U V - g(U,V) H‖) and mean_curvature_gap (‖H + ∇f‖).
// Throws GeometryError for an empty kernel.
CheckResult check_clairaut_source(const MapContext& ctx, const Expr& f, const std::vector<Point>& points,
                                  double tol = 1e-8);

// max over normal D and range F*X of ‖S_D F*X + D(g) F*X‖, together with the
// umbilical residual of ∇F* against H' = -∇^N g. S comes from the pullback
// connection with declared target frames, else from duality with ∇F*.
// Throws GeometryError for a trivial range.
CheckResult check_clairaut_target(const MapContext& ctx, const Expr& g, const std::vector<Point>& points,
                                  double tol = 1e-8);

enum class ScalarRelation {
  RangeSource,   // s^{range} + λ r = 0, r = dim ker F*
  Kernel,        // s^{ker} = -r λ
  NormalTarget,  // s^{⊥} = -ρ n1, ρ = D(g) + λ for each normal D
  RangeTarget,   // s^{range} = -(m - r) λ, m - r = dim range F*
};
const char* scalar_relation_id(ScalarRelation r);

struct ScalarRelationInput {
  ScalarRelation which = ScalarRelation::RangeSource;
  const MapContext* ctx = nullptr;
  double lambda = 0.0;
  std::optional<Expr> target_function;  // g for ρ
  std::vector<GateResult> gates;
};
// Both sides reported as values lhs/rhs at the worst point. Throws
// UnsupportedConfiguration when the restricted scalar curvature is not
// available.
CheckResult check_scalar_relation(const ScalarRelationInput& in, const std::vector<Point>& points,
                                  double tol = 1e-8);

}  // namespace dgeo
