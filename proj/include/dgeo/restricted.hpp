#pragma once

// Intrinsic geometry of the leaves of a coordinate-aligned distribution:
// the induced metric on span{∂_i : i in S} with the other coordinates frozen
// as parameters. Other distributions are rejected.

#include <memory>
#include <vector>

#include "dgeo/geometry.hpp"

namespace dgeo {

class RestrictedGeometry {
 public:
  RestrictedGeometry(std::shared_ptr<const Metric> parent, std::vector<int> coords);

  // Coordinate subset from the supports of expression fields; throws
  // UnsupportedConfiguration unless the fields span exactly those
  // coordinate directions at p.
  static RestrictedGeometry from_fields(std::shared_ptr<const Metric> parent, const std::vector<VectorField>& fields,
                                        const Point& p);
  // Same from vectors at p; entries below tol count as zero.
  static RestrictedGeometry from_vectors(std::shared_ptr<const Metric> parent,
                                         const std::vector<Eigen::VectorXd>& span, double tol = 1e-12);

  const Metric& parent() const { return *parent_; }
  const std::vector<int>& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  // Null for the zero-dimensional case.
  const std::shared_ptr<const Metric>& induced() const { return induced_; }

  // Ricci of the induced metric in sub-coordinates; p is a parent point.
  Eigen::MatrixXd ricci_at(const Point& p) const;
  double scalar_at(const Point& p) const;
  // Ric(a, b) for parent-dimension vectors tangent to the leaf. Throws
  // GeometryError when a vector leaves the distribution by more than tol.
  double ricci(const Point& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol = 1e-9) const;
  Eigen::VectorXd restrict(const Eigen::VectorXd& v, double tol = 1e-9) const;

 private:
  std::shared_ptr<const Metric> parent_;
  std::vector<int> coords_;
  std::shared_ptr<const Metric> induced_;
};

}  // namespace dgeo
