#pragma once

// Almost complex structures, their compatibility checks, and the splittings
// JX = BX + CX (horizontal X) and J'D = PD + QD (normal D).

#include <optional>
#include <string>
#include <vector>

#include "dgeo/geometry.hpp"
#include "dgeo/report.hpp"

namespace dgeo {

class AntiInvarianceViolation : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class AlmostComplexStructure {
 public:
  enum class Basis { Coordinates, Frame };

  // J ∂_j = Σ_i m(i, j) ∂_i.
  static AlmostComplexStructure on_coordinates(ChartPtr chart, ExprMatrix m);
  // J e_b = Σ_a m(a, b) e_a for an orthonormal frame of g. Throws
  // GeometryError when the frame is not orthonormal at the chart samples.
  static AlmostComplexStructure on_frame(const Metric& g, Frame frame, ExprMatrix m,
                                         std::vector<std::string> names = {});

  const ChartPtr& chart() const { return chart_; }
  int dim() const { return chart_->dim(); }
  Basis basis() const { return basis_; }
  const std::optional<Frame>& frame() const { return frame_; }
  const std::vector<std::string>& frame_names() const { return names_; }
  // Action on the declared basis.
  const ExprMatrix& declared() const { return declared_; }
  // Action on coordinate vectors.
  const ExprMatrix& coordinate_matrix() const { return jc_; }
  // ∂_k J^i_j, index k.
  const std::vector<ExprMatrix>& derivatives() const { return djc_; }

  VectorField apply(const VectorField& v) const;
  Eigen::MatrixXd matrix_at(const Point& p) const { return jc_.eval(p); }
  Eigen::VectorXd apply_at(const Point& p, const Eigen::VectorXd& v) const { return matrix_at(p) * v; }

  AlmostComplexStructure scaled(double c) const;

 private:
  AlmostComplexStructure() = default;
  void build_derivatives();

  ChartPtr chart_;
  Basis basis_ = Basis::Coordinates;
  std::optional<Frame> frame_;
  std::vector<std::string> names_;
  ExprMatrix declared_;
  ExprMatrix jc_;
  std::vector<ExprMatrix> djc_;
};

// Orthonormal basis at p used for residuals: the declared frame when J has
// one, else Gram-Schmidt of the coordinate vectors.
std::vector<Eigen::VectorXd> residual_basis(const Metric& g, const AlmostComplexStructure& j, const Point& p);

// (∇_k J)^i_j at p, index k.
std::vector<Eigen::MatrixXd> nabla_j_at(const Metric& g, const AlmostComplexStructure& j, const Point& p);

// ‖(∇_{e_a} J) e_b‖_g over the residual basis at p.
Eigen::MatrixXd kahler_entries(const Metric& g, const AlmostComplexStructure& j, const Point& p);

// Residual: max of the operator norms of J²+I and JᵀgJ-g in an orthonormal
// basis, so it does not depend on the basis.
CheckResult check_hermitian(const Metric& g, const AlmostComplexStructure& j, const std::vector<Point>& points,
                            double tol = 1e-10);

// Residual: Frobenius norm of ∇J over an orthonormal basis. The largest
// single entry ‖(∇_{e_a}J)e_b‖ is kept as a term and as values.
CheckResult check_kahler(const Metric& g, const AlmostComplexStructure& j, const std::vector<Point>& points,
                         double tol = 1e-8);

// max |g(J v_a, v_b)| over the given subspace at each point. An empty
// subspace everywhere is flagged as degenerate and fails.
CheckResult check_anti_invariant(const Metric& g, const AlmostComplexStructure& j, const std::vector<Point>& points,
                                 const std::vector<std::vector<Eigen::VectorXd>>& subspace, double tol = 1e-8);

// Complement of span(base ∪ J base) at p: μ for base = ker F*, ν for base =
// range F*.
std::vector<Eigen::VectorXd> invariant_complement(const Metric& g, const AlmostComplexStructure& j,
                                                  const std::vector<Eigen::VectorXd>& base, const Point& p);

struct BCDecomposition {
  Eigen::VectorXd jx;
  Eigen::VectorXd b;  // part in ker F*
  Eigen::VectorXd c;  // part in μ
  double outside = 0.0;
};

struct PQDecomposition {
  Eigen::VectorXd jd;
  Eigen::VectorXd p;  // part in range F*
  Eigen::VectorXd q;  // part in ν
  double outside = 0.0;
};

// X must be g-orthogonal to the vertical vectors. μ is computed when not
// given. Throws AntiInvarianceViolation when JX leaves ker F* ⊕ μ by more
// than tol.
BCDecomposition decompose_BC(const Metric& g, const AlmostComplexStructure& j, const Point& p,
                             const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& vertical,
                             const std::optional<std::vector<Eigen::VectorXd>>& mu = std::nullopt,
                             double tol = 1e-8);

PQDecomposition decompose_PQ(const Metric& g, const AlmostComplexStructure& j, const Point& p,
                             const Eigen::VectorXd& d, const std::vector<Eigen::VectorXd>& range,
                             const std::optional<std::vector<Eigen::VectorXd>>& nu = std::nullopt,
                             double tol = 1e-8);

}  // namespace dgeo
