#pragma once

// Riemannian geometry on a single chart.
//
// Curvature convention: R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z, stored as
// R^l_{ijk} with R(∂_i,∂_j)∂_k = R^l_{ijk} ∂_l, and Ric(X,Y) = tr(Z -> R(Z,X)Y),
// so Ric_{jk} = R^i_{ijk}. The unit sphere has Ric = (n-1) g.

#include <functional>
#include <mutex>

#include "dgeo/fields.hpp"

namespace dgeo {

inline constexpr const char* kCurvatureConvention =
    "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z; "
    "Ric(X,Y) = tr(Z -> R(Z,X)Y); unit sphere Ric = (n-1)g";

class Metric {
 public:
  // Validates symmetry and builds the inverse. Blocks larger than six
  // coordinates get no symbolic inverse; see has_symbolic_inverse().
  Metric(ChartPtr chart, ExprMatrix g);

  const Chart& chart() const { return *chart_; }
  const ChartPtr& chart_ptr() const { return chart_; }
  int dim() const { return chart_->dim(); }

  const Expr& g(int i, int j) const { return g_(i, j); }
  const ExprMatrix& matrix() const { return g_; }
  bool has_symbolic_inverse() const { return symbolic_inverse_; }
  // Throws UnsupportedConfiguration when the inverse is numeric only.
  const Expr& ginv(int i, int j) const;
  const ExprMatrix& inverse() const;
  // det g as an expression; available with the symbolic inverse.
  const Expr& det() const;

  Eigen::MatrixXd at(const Point& p) const { return g_.eval(p); }
  Eigen::MatrixXd inverse_at(const Point& p) const;

  // Chart constraints plus nonvanishing diagonal entries and determinant.
  const Assumptions& assumptions() const { return assume_; }

  // Γ^k_{ij}, computed once on first use.
  const TensorField& christoffel() const;
  // R^l_{ijk}, computed once on first use.
  const TensorField& riemann() const;
  const TensorField& ricci() const;

  Expr inner(const VectorField& a, const VectorField& b) const;
  double inner_at(const Point& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double norm_at(const Point& p, const Eigen::VectorXd& a) const;

  // Positive-definiteness at a point (Cholesky).
  bool positive_definite_at(const Point& p) const;

 private:
  void build_inverse();

  ChartPtr chart_;
  ExprMatrix g_;
  ExprMatrix ginv_;
  Expr det_;
  bool symbolic_inverse_ = true;
  Assumptions assume_;

  mutable std::once_flag gamma_once_, riemann_once_, ricci_once_;
  mutable TensorField gamma_, riemann_, ricci_;
};

// Γ at a point; works with either inverse mode.
struct ChristoffelValues {
  std::vector<double> gamma;  // [k][i][j]
  bool numeric_inverse = false;
};
ChristoffelValues christoffel_at(const Metric& g, const Point& p);

const TensorField& christoffel(const Metric& g);
VectorField covariant_derivative(const Metric& g, const VectorField& x, const VectorField& y);
VectorField lie_bracket(const VectorField& x, const VectorField& y);
const TensorField& riemann(const Metric& g);
// R(X,Y)Z as a field.
VectorField riemann_apply(const Metric& g, const VectorField& x, const VectorField& y,
                          const VectorField& z);
const TensorField& ricci(const Metric& g);
Expr ricci_apply(const Metric& g, const VectorField& x, const VectorField& y);
Expr scalar_curvature(const Metric& g);

VectorField gradient(const Metric& g, const Expr& f);
TensorField hessian(const Metric& g, const Expr& f);
// Hess f(X, Y) = g(∇_X ∇f, Y).
Expr hessian_apply(const Metric& g, const Expr& f, const VectorField& x, const VectorField& y);
// (1/sqrt(det g)) ∂_i (sqrt(det g) X^i).
Expr divergence(const Metric& g, const VectorField& x);
// Σ_a g(∇_{E_a} X, E_a) over an orthonormal frame.
Expr divergence_frame(const Metric& g, const VectorField& x, const Frame& frame);
TensorField lie_derivative_metric(const Metric& g, const VectorField& x);
// (L_X g)(Y, Z) = g(∇_Y X, Z) + g(∇_Z X, Y).
Expr lie_derivative_apply(const Metric& g, const VectorField& x, const VectorField& y,
                          const VectorField& z);

// Covariant derivative of a (p,q) tensor field; the new covariant index is
// appended last.
TensorField covariant_derivative(const Metric& g, const TensorField& t);

// Gram-Schmidt at p; throws RankDeficient when the fields are dependent.
std::vector<Eigen::VectorXd> orthonormalize(const Metric& g, const std::vector<VectorField>& fields,
                                            const Point& p);
std::vector<Eigen::VectorXd> orthonormalize(const Metric& g, const std::vector<Eigen::VectorXd>& vecs,
                                            const Point& p);

// Orthonormal basis of the g-orthogonal complement of span(basis) at p,
// built by Gram-Schmidt over the coordinate vectors.
std::vector<Eigen::VectorXd> orthogonal_complement(const Metric& g, const std::vector<Eigen::VectorXd>& basis,
                                                   const Point& p);

// max |g(e_i, e_j) - δ_ij| over the given points.
double frame_orthonormality_residual(const Metric& g, const Frame& f, const std::vector<Point>& pts);

struct GeodesicOptions {
  // Coordinate whose conjugate momentum is monitored as the Clairaut
  // quantity g(x', ∂_c)/|x'|. -1 selects the first coordinate that no metric
  // entry depends on; leave unset to disable the monitor.
  std::optional<int> clairaut_coord;
  double drift_per_step = 1e-8;
  int max_halvings = 12;
  std::size_t record_every = 1;
};

struct GeodesicSample {
  double t;
  Eigen::VectorXd x;
  Eigen::VectorXd v;
};

struct GeodesicResult {
  std::vector<GeodesicSample> trajectory;
  double max_energy_drift = 0.0;    // max |g(x',x') - E0|
  double max_clairaut_drift = 0.0;  // max |c(t) - c(0)|, when monitored
  std::optional<int> clairaut_coord;
  std::size_t halvings = 0;
};

class GeodesicError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Classical RK4 with step halving when the per-step energy drift exceeds the
// limit. Throws GeodesicError when the trajectory leaves the chart domain.
GeodesicResult geodesic_integrate(const Metric& g, const Point& p0, const Eigen::VectorXd& v0,
                                  double t_end, double dt, const GeodesicOptions& opts = {});

// Ricci at p from differenced metric values only: Christoffels from
// fourth-order central differences of g, curvature from differenced
// Christoffels.
Eigen::MatrixXd fd_ricci(const Metric& g, const Point& p, double h = 1e-3);

}  // namespace dgeo
