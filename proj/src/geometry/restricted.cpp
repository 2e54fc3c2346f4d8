#include "dgeo/restricted.hpp"

#include <algorithm>
#include <cmath>

namespace dgeo {

RestrictedGeometry::RestrictedGeometry(std::shared_ptr<const Metric> parent, std::vector<int> coords)
    : parent_(std::move(parent)), coords_(std::move(coords)) {
  std::sort(coords_.begin(), coords_.end());
  coords_.erase(std::unique(coords_.begin(), coords_.end()), coords_.end());
  const Chart& pc = parent_->chart();
  for (int c : coords_) {
    if (c < 0 || c >= pc.dim()) throw GeometryError("restricted coordinate index out of range");
  }
  if (coords_.empty()) return;
  std::vector<std::string> names;
  std::string label = pc.name() + "|";
  for (int c : coords_) {
    names.push_back(pc.coords()[static_cast<std::size_t>(c)]);
    label += (label.back() == '|' ? "" : ",") + names.back();
  }
  auto sub = std::make_shared<Chart>(label, names);
  for (const auto& k : pc.constraints()) sub->add_constraint(k);
  for (int i = 0; i < sub->dim(); ++i) {
    auto [lo, hi] = pc.box(coords_[static_cast<std::size_t>(i)]);
    sub->set_box(i, lo, hi);
  }
  const int k = sub->dim();
  ExprMatrix g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      g(i, j) = parent_->g(coords_[static_cast<std::size_t>(i)], coords_[static_cast<std::size_t>(j)]);
  induced_ = std::make_shared<Metric>(sub, g);
}

RestrictedGeometry RestrictedGeometry::from_fields(std::shared_ptr<const Metric> parent,
                                                   const std::vector<VectorField>& fields, const Point& p) {
  const int n = parent->dim();
  std::vector<int> support;
  for (int i = 0; i < n; ++i) {
    bool used = false;
    for (const auto& f : fields) used = used || !f[i].is_zero();
    if (used) support.push_back(i);
  }
  if (support.size() != fields.size()) {
    throw UnsupportedConfiguration("restricted Ricci needs a coordinate-aligned distribution");
  }
  if (!fields.empty()) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(support.size()), static_cast<Eigen::Index>(fields.size()));
    for (std::size_t a = 0; a < fields.size(); ++a) {
      Eigen::VectorXd v = fields[a].eval(p);
      for (std::size_t i = 0; i < support.size(); ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = v[support[i]];
      }
    }
    if (m.fullPivLu().rank() != static_cast<Eigen::Index>(fields.size())) {
      throw UnsupportedConfiguration("restricted Ricci: distribution fields are dependent");
    }
  }
  return RestrictedGeometry(std::move(parent), support);
}

RestrictedGeometry RestrictedGeometry::from_vectors(std::shared_ptr<const Metric> parent,
                                                    const std::vector<Eigen::VectorXd>& span, double tol) {
  const int n = parent->dim();
  std::vector<int> support;
  double scale = 1.0;
  for (const auto& v : span) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    bool used = false;
    for (const auto& v : span) used = used || std::abs(v[i]) > tol * scale;
    if (used) support.push_back(i);
  }
  if (support.size() != span.size()) {
    throw UnsupportedConfiguration("restricted Ricci needs a coordinate-aligned distribution");
  }
  return RestrictedGeometry(std::move(parent), support);
}

Eigen::MatrixXd RestrictedGeometry::ricci_at(const Point& p) const {
  if (!induced_) return Eigen::MatrixXd(0, 0);
  if (induced_->has_symbolic_inverse()) {
    auto v = induced_->ricci().eval(p);
    const int k = dim();
    Eigen::MatrixXd out(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) out(i, j) = v[static_cast<std::size_t>(i * k + j)];
    return out;
  }
  return fd_ricci(*induced_, p);
}

double RestrictedGeometry::scalar_at(const Point& p) const {
  if (!induced_) return 0.0;
  return (induced_->inverse_at(p) * ricci_at(p)).trace();
}

Eigen::VectorXd RestrictedGeometry::restrict(const Eigen::VectorXd& v, double tol) const {
  Eigen::VectorXd out(dim());
  Eigen::VectorXd rest = v;
  for (int i = 0; i < dim(); ++i) {
    out[i] = v[coords_[static_cast<std::size_t>(i)]];
    rest[coords_[static_cast<std::size_t>(i)]] = 0.0;
  }
  if (rest.norm() > tol * std::max(1.0, v.norm())) {
    throw GeometryError("vector is not tangent to the restricted distribution");
  }
  return out;
}

double RestrictedGeometry::ricci(const Point& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                 double tol) const {
  if (!induced_) {
    (void)restrict(a, tol);
    (void)restrict(b, tol);
    return 0.0;
  }
  return restrict(a, tol).dot(ricci_at(p) * restrict(b, tol));
}

}  // namespace dgeo
