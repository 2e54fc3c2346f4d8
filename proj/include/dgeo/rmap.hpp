#pragma once

// Smooth maps between charts, their adapted splittings, and the tensors of
// Riemannian-map geometry: second fundamental form, shape operator, O'Neill
// tensors T and A.
//
// Distribution tensors are built from the g-orthogonal projector P onto a
// distribution and its covariant derivatives W = ∇P, ∇W. With Q = I - P:
//   T_E G = (Q - P) W(PE) G        (P projects onto ker F*)
//   A_E G = (Q - P) W(QE) G
//   S_D V = P W(V) D               (P projects onto range F*, D normal)
// Symbolic frames give exact derivatives; numeric splittings only give
// first derivatives (finite differences), so ∇T, ∇A, ∇S need frames.

#include <functional>
#include <map>
#include <mutex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgeo/geometry.hpp"
#include "dgeo/report.hpp"
#include "dgeo/structure.hpp"

namespace dgeo {

class RankChange : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Vector field along a map: target components over source coordinates.
struct AlongMap {
  ChartPtr source;
  ChartPtr target;
  std::vector<Expr> comps;

  Eigen::VectorXd eval(const Point& p) const;
};

class SmoothMap {
 public:
  SmoothMap(ChartPtr source, ChartPtr target, std::vector<Expr> components);

  const ChartPtr& source() const { return source_; }
  const ChartPtr& target() const { return target_; }
  const std::vector<Expr>& components() const { return comps_; }
  // (∂F^a/∂x^i), target rows by source columns.
  const ExprMatrix& jacobian() const { return jac_; }
  // ∂_i ∂_j F^a for component a.
  const ExprMatrix& second_derivatives(int a) const { return hess_[static_cast<std::size_t>(a)]; }

  Point image(const Point& p) const;
  Eigen::MatrixXd jacobian_at(const Point& p) const { return jac_.eval(p); }
  int rank_at(const Point& p, double tol = 1e-9) const;

  // f ∘ F for f over target coordinates.
  Expr pullback(const Expr& f) const;
  // Target field composed with F.
  AlongMap compose(const VectorField& on_target) const;
  AlongMap pushforward(const VectorField& x) const;
  Eigen::VectorXd pushforward_at(const Point& p, const Eigen::VectorXd& v) const { return jacobian_at(p) * v; }

 private:
  ChartPtr source_, target_;
  std::vector<Expr> comps_;
  std::map<Symbol, Expr> subst_;
  ExprMatrix jac_;
  std::vector<ExprMatrix> hess_;
};

// Numeric Christoffel symbols and their first derivatives at a point.
struct ChristoffelJet {
  int n = 0;
  std::vector<double> gamma;   // [k][i][j]
  std::vector<double> dgamma;  // [l][k][i][j] = ∂_l Γ^k_ij

  double G(int k, int i, int j) const { return gamma[static_cast<std::size_t>((k * n + i) * n + j)]; }
  double dG(int l, int k, int i, int j) const {
    return dgamma[static_cast<std::size_t>(((l * n + k) * n + i) * n + j)];
  }
  // R(a, b) c with the engine convention, assembled from the jet.
  Eigen::VectorXd riemann(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) const;
  // ∇_v X for a vector field with symbolic components.
  Eigen::VectorXd nabla(const Point& p, const Eigen::VectorXd& v, const VectorField& x) const;
};

// Symbolic Γ derivatives, built once per metric.
class ChristoffelJetSource {
 public:
  explicit ChristoffelJetSource(std::shared_ptr<const Metric> g);
  ChristoffelJet at(const Point& p) const;
  const Metric& metric() const { return *g_; }

 private:
  std::shared_ptr<const Metric> g_;
  bool symbolic_ = false;
  std::vector<Expr> dgamma_;
};

// Projector onto a distribution with its covariant derivatives at a point.
struct DistributionAt {
  int n = 0;
  Eigen::MatrixXd g;
  Eigen::MatrixXd P;
  std::vector<Eigen::MatrixXd> W;                // W[k] = ∇_k P
  std::vector<std::vector<Eigen::MatrixXd>> DW;  // DW[l][k] = (∇_l W)_k
  bool has_second = false;
  ChristoffelJet jet;

  Eigen::MatrixXd Q() const { return Eigen::MatrixXd::Identity(n, n) - P; }
  Eigen::MatrixXd w(const Eigen::VectorXd& x) const;              // ∇_x P
  Eigen::MatrixXd dw(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;  // (∇_x W)(y)
  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(g * b); }
  double norm(const Eigen::VectorXd& a) const;

  // O'Neill tensors when P projects onto the vertical distribution.
  Eigen::VectorXd T(const Eigen::VectorXd& e, const Eigen::VectorXd& f) const;
  Eigen::VectorXd A(const Eigen::VectorXd& e, const Eigen::VectorXd& f) const;
  // (∇_x T)(e, f), (∇_x A)(e, f); throw FramesRequired without second derivatives.
  Eigen::VectorXd nabla_T(const Eigen::VectorXd& x, const Eigen::VectorXd& e, const Eigen::VectorXd& f) const;
  Eigen::VectorXd nabla_A(const Eigen::VectorXd& x, const Eigen::VectorXd& e, const Eigen::VectorXd& f) const;

  // Shape tensor when P projects onto range F*: S_d v.
  Eigen::VectorXd S(const Eigen::VectorXd& d, const Eigen::VectorXd& v) const;
  // (∇_x S)_d v as the covariant derivative of the extended tensor.
  Eigen::VectorXd nabla_S(const Eigen::VectorXd& x, const Eigen::VectorXd& d, const Eigen::VectorXd& v) const;
  // Curvature of the connection Q ∇ Q on the complement of P.
  Eigen::VectorXd normal_curvature(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& xi) const;
  // ∇^⊥_a X = Q ∇_a X for a field X.
  Eigen::VectorXd normal_nabla(const Point& p, const Eigen::VectorXd& a, const VectorField& x) const;
};

// Exact jets from orthonormal fields spanning the distribution.
class DistributionJet {
 public:
  DistributionJet(std::shared_ptr<const Metric> g, const std::vector<VectorField>& onb);
  DistributionAt at(const Point& p) const;
  const ExprMatrix& projector() const { return p_; }

 private:
  std::shared_ptr<const Metric> g_;
  ChristoffelJetSource gamma_;
  ExprMatrix p_;
  std::vector<ExprMatrix> dp_;
  std::vector<std::vector<ExprMatrix>> ddp_;
};

// Projector from a point function; W by fourth-order central differences,
// no second derivatives.
DistributionAt numeric_distribution_at(const ChristoffelJetSource& gamma,
                                       const std::function<Eigen::MatrixXd(const Point&)>& proj, const Point& p,
                                       double h = 1e-4);

// g-orthogonal projector onto span(onb) for g-orthonormal vectors.
Eigen::MatrixXd projector_from(const Eigen::MatrixXd& g, const std::vector<Eigen::VectorXd>& onb);

// Expression-valued adapted frames. Source frames live on the source chart,
// target frames on the target chart.
struct DeclaredFrames {
  bool source = false;
  bool target = false;
  std::vector<VectorField> vertical, horizontal, mu;
  std::vector<VectorField> range, normal, nu;
  std::vector<std::string> vertical_names, horizontal_names, range_names, normal_names;
};

struct FramesAt {
  Point p;
  Point q;  // F(p)
  int rank = 0;
  bool source_declared = false;
  bool target_declared = false;
  std::vector<Eigen::VectorXd> vertical, horizontal, range, normal;
  // Present when the matching structure was supplied.
  std::vector<Eigen::VectorXd> jker, mu, jrange, nu;
};

class MapContext {
 public:
  MapContext(std::shared_ptr<const Metric> gm, std::shared_ptr<const Metric> gn, std::shared_ptr<const SmoothMap> f,
             DeclaredFrames frames = {}, std::optional<int> rank = std::nullopt);

  const Metric& source_metric() const { return *gm_; }
  const Metric& target_metric() const { return *gn_; }
  const std::shared_ptr<const Metric>& source_metric_ptr() const { return gm_; }
  const std::shared_ptr<const Metric>& target_metric_ptr() const { return gn_; }
  const SmoothMap& map() const { return *f_; }
  const DeclaredFrames& frames() const { return frames_; }
  std::optional<int> expected_rank() const { return rank_; }

  // Vertical projector jet: exact with declared source frames, numeric otherwise.
  DistributionAt vertical_at(const Point& p) const;
  // Range projector jet on the target at F(p); requires declared target frames.
  DistributionAt range_at(const Point& p) const;
  bool has_exact_vertical() const { return static_cast<bool>(vjet_); }
  bool has_exact_range() const { return static_cast<bool>(rjet_); }

  // Target Γ composed with F, over source coordinates.
  const TensorField& composed_target_christoffel() const;

  // ∇^F_X W at p for a field W along F.
  Eigen::VectorXd pullback_nabla_at(const Point& p, const Eigen::VectorXd& x, const AlongMap& w) const;
  // (∇F*)(x, y) at p from the tensor formula.
  Eigen::VectorXd second_fundamental_form_at(const Point& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  // (∇F*)(X, Y) = ∇^F_X F*Y - F*(∇_X Y) as a field along F.
  AlongMap second_fundamental_form(const VectorField& x, const VectorField& y) const;

 private:
  std::shared_ptr<const Metric> gm_, gn_;
  std::shared_ptr<const SmoothMap> f_;
  DeclaredFrames frames_;
  std::optional<int> rank_;
  std::shared_ptr<ChristoffelJetSource> source_gamma_;
  std::shared_ptr<DistributionJet> vjet_, rjet_;
  mutable std::once_flag composed_once_;
  mutable TensorField composed_;
};

// Kernel, horizontal, range and normal orthonormal frames at p. Declared
// frames are validated (orthonormality ≤ 1e-9, kernel and range membership)
// and used verbatim; otherwise they are computed from the Jacobian. With J
// or J', the J(ker F*), μ, J'(range F*), ν sub-frames are filled in.
FramesAt compute_splittings(const MapContext& ctx, const Point& p, const AlmostComplexStructure* j = nullptr,
                            const AlmostComplexStructure* jprime = nullptr);

// T_e f and A_e f at p, for vectors given in source coordinates.
Eigen::VectorXd oneill_T(const MapContext& ctx, const Point& p, const Eigen::VectorXd& e, const Eigen::VectorXd& f);
Eigen::VectorXd oneill_A(const MapContext& ctx, const Point& p, const Eigen::VectorXd& e, const Eigen::VectorXd& f);
enum class ONeill { T, A };
// (∇_x O)(e, f); throws FramesRequired without declared source frames.
Eigen::VectorXd oneill_derivative(const MapContext& ctx, ONeill which, const Point& p, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& e, const Eigen::VectorXd& f);

// H = (1/r) Σ T_{u_j} u_j; throws GeometryError on an empty kernel.
Eigen::VectorXd fiber_mean_curvature(const MapContext& ctx, const FramesAt& frames);

struct ShapeOperatorResult {
  Eigen::VectorXd s;       // S_D F*X, in range F*
  Eigen::VectorXd normal;  // ∇^{F⊥}_X D
};
// From the pullback connection applied to D along F. Throws GeometryError
// when D is not normal at p.
ShapeOperatorResult shape_operator(const MapContext& ctx, const FramesAt& frames, const AlongMap& d,
                                   const Eigen::VectorXd& x, double tol = 1e-9);

CheckResult check_riemannian_map(const MapContext& ctx, const std::vector<Point>& points, double tol = 1e-10);

// Fits H' = (1/k) Σ (∇F*)(X_i, X_i) and reports max ‖(∇F*)(X_a, X_b) - δ_ab H'‖.
// With expected, the fitted H' is compared with it instead.
CheckResult check_umbilical(const MapContext& ctx, const std::vector<Point>& points, double tol = 1e-8,
                            const std::function<Eigen::VectorXd(const Point& q)>& expected = {});

}  // namespace dgeo
