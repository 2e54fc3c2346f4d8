#include "dgeo/rmap.hpp"

namespace dgeo {

Eigen::VectorXd oneill_T(const MapContext& ctx, const Point& p, const Eigen::VectorXd& e, const Eigen::VectorXd& f) {
  return ctx.vertical_at(p).T(e, f);
}

Eigen::VectorXd oneill_A(const MapContext& ctx, const Point& p, const Eigen::VectorXd& e, const Eigen::VectorXd& f) {
  return ctx.vertical_at(p).A(e, f);
}

Eigen::VectorXd oneill_derivative(const MapContext& ctx, ONeill which, const Point& p, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& e, const Eigen::VectorXd& f) {
  if (!ctx.has_exact_vertical()) {
    throw FramesRequired("covariant derivative of T or A needs declared expression-valued vertical frames");
  }
  DistributionAt d = ctx.vertical_at(p);
  return which == ONeill::T ? d.nabla_T(x, e, f) : d.nabla_A(x, e, f);
}

Eigen::VectorXd fiber_mean_curvature(const MapContext& ctx, const FramesAt& frames) {
  if (frames.vertical.empty()) throw GeometryError("mean curvature of the fibers needs a nonzero kernel");
  DistributionAt d = ctx.vertical_at(frames.p);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(d.n);
  for (const auto& u : frames.vertical) h += d.T(u, u);
  return h / static_cast<double>(frames.vertical.size());
}

ShapeOperatorResult shape_operator(const MapContext& ctx, const FramesAt& frames, const AlongMap& d,
                                   const Eigen::VectorXd& x, double tol) {
  Eigen::MatrixXd h = ctx.target_metric().at(frames.q);
  Eigen::MatrixXd pr = projector_from(h, frames.range);
  Eigen::VectorXd dv = d.eval(frames.p);
  double scale = std::max(1.0, std::sqrt(std::max(0.0, dv.dot(h * dv))));
  Eigen::VectorXd tang = pr * dv;
  if (std::sqrt(std::max(0.0, tang.dot(h * tang))) > tol * scale) {
    throw GeometryError("shape operator needs a field normal to range F*");
  }
  Eigen::VectorXd nab = ctx.pullback_nabla_at(frames.p, x, d);
  Eigen::VectorXd s = -(pr * nab);
  return {s, nab + s};
}

}  // namespace dgeo
