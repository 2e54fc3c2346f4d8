#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgeo/propcheck.hpp"

namespace dgeo::prop {

Eigen::MatrixXd eval2(const TensorField& t, const Point& p);
Eigen::MatrixXd ambient_ricci(const Metric& g, const Point& p);

// Source-side data at one sample point.
struct SourcePoint {
  std::string error;  // nonempty: the point could not be prepared
  FramesAt fr;
  DistributionAt vert;
  Eigen::MatrixXd g, ric, jac;
  std::vector<Eigen::VectorXd> xs;  // J(ker F*) ⊕ μ frame
  std::vector<Eigen::VectorXd> bx, cx;
  // Present when f is given.
  Eigen::MatrixXd hess;
  Eigen::VectorXd grad;
  double div_grad = 0.0;
};

// Target-side data at F(p).
struct TargetPoint {
  std::string error;
  FramesAt fr;
  std::optional<DistributionAt> range;
  std::string range_error;
  Eigen::MatrixXd h, ric, jp;
  std::vector<Eigen::VectorXd> pd, qd;  // per normal frame vector
  Eigen::MatrixXd hess;
  Eigen::VectorXd grad;
};

// Leaf geometry built once; the failure message is kept for later calls.
struct Leaf {
  bool tried = false;
  std::optional<RestrictedGeometry> rg;
  std::string error;
};

// Collects LHS and named RHS terms per sample; residual = |LHS - Σ terms|
// over the available terms.
class Accumulator {
 public:
  Accumulator(CheckResult& r, const Chart& chart) : r_(r), chart_(chart) {}

  void begin();
  // Unavailable when fn throws FramesRequired or UnsupportedConfiguration.
  void term(const std::string& name, const std::function<double()>& fn, const std::string& note = "");
  void finish(double lhs, std::size_t point, const Point& p, const std::string& label);
  void skip(std::size_t point, const Point& p, const std::string& why);
  // Writes the term breakdown at the worst sample.
  void close();

 private:
  struct Def {
    std::string name, note, reason;
    bool available = true;
  };
  CheckResult& r_;
  const Chart& chart_;
  std::vector<Def> defs_;
  std::vector<double> cur_, worst_;
  std::vector<bool> cur_ok_;
  double worst_lhs_ = 0.0, worst_rhs_ = 0.0;
  std::string worst_label_;
  bool any_ = false;
};

}  // namespace dgeo::prop

namespace dgeo {

struct PropositionRunner::Impl {
  const PropositionCase& c;
  const std::vector<Point>& pts;

  std::vector<prop::SourcePoint> src;
  std::vector<prop::TargetPoint> tgt;
  bool src_ready = false, tgt_ready = false;
  std::map<std::string, GateResult> gates;
  prop::Leaf ker_leaf, range_leaf, normal_leaf;
  std::optional<AlongMap> push_grad;  // F*(∇f)
  std::vector<VectorField> jrange_fields;  // J' applied to declared range fields

  Impl(const PropositionCase& cc, const std::vector<Point>& p) : c(cc), pts(p) {}

  const MapContext& ctx() const { return *c.ctx; }
  void prepare_source();
  void prepare_target();
  GateResult compute_gate(const std::string& name);
  int kernel_dim();
  int range_dim();

  const RestrictedGeometry& ker_geometry();
  const RestrictedGeometry& range_geometry();
  const RestrictedGeometry& normal_geometry();

  // Restricted Ricci on source or target leaves for parent vectors; throw
  // UnsupportedConfiguration when the leaf geometry is not available.
  double ric_ker(std::size_t k, const Eigen::VectorXd& a, const Eigen::VectorXd& b);
  double ric_range(std::size_t k, const Eigen::VectorXd& a, const Eigen::VectorXd& b);  // target vectors
  double ric_normal(std::size_t k, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

  // O'Neill pieces on the source.
  double div_a(std::size_t k, const Eigen::VectorXd& e, const Eigen::VectorXd& f);
  // (L_{F*∇f} g_N)(F*x, F*y) through the pullback connection.
  double lie_push(std::size_t k, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

  // Target pieces; throw FramesRequired without declared target frames.
  const DistributionAt& range_jet(std::size_t k);
  // Q ∇_a (J' V) with V the declared-frame extension of the range vector v.
  Eigen::VectorXd normal_nabla_jv(std::size_t k, const Eigen::VectorXd& a, const Eigen::VectorXd& v);

  double lambda_source();
  double lambda_target();
};

}  // namespace dgeo
