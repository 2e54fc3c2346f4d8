#include <cmath>
#include <sstream>

#include "dgeo/rmap.hpp"

namespace dgeo {

namespace {

constexpr double kFrameTol = 1e-9;

std::vector<Eigen::VectorXd> eval_all(const std::vector<VectorField>& fields, const Point& p) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& f : fields) out.push_back(f.eval(p));
  return out;
}

void require_orthonormal(const Eigen::MatrixXd& g, const std::vector<Eigen::VectorXd>& v, const std::string& what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      double d = v[i].dot(g * v[j]) - (i == j ? 1.0 : 0.0);
      if (std::abs(d) > kFrameTol) {
        std::ostringstream os;
        os << "declared " << what << " frame is not orthonormal (entry " << i << "," << j << " off by " << d << ")";
        throw GeometryError(os.str());
      }
    }
  }
}

void require_orthogonal(const Eigen::MatrixXd& g, const std::vector<Eigen::VectorXd>& a,
                        const std::vector<Eigen::VectorXd>& b, const std::string& what) {
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (std::abs(x.dot(g * y)) > kFrameTol) throw GeometryError("declared " + what + " frames are not orthogonal");
    }
  }
}

}  // namespace

FramesAt compute_splittings(const MapContext& ctx, const Point& p, const AlmostComplexStructure* j,
                            const AlmostComplexStructure* jprime) {
  const SmoothMap& f = ctx.map();
  const Metric& gm = ctx.source_metric();
  const Metric& gn = ctx.target_metric();
  const int m = gm.dim();
  const int n = gn.dim();
  FramesAt out;
  out.p = p;
  out.q = f.image(p);
  out.rank = f.rank_at(p);
  if (ctx.expected_rank() && out.rank != *ctx.expected_rank()) {
    std::ostringstream os;
    os << "Jacobian rank " << out.rank << " differs from the declared rank " << *ctx.expected_rank();
    throw RankChange(os.str());
  }
  Eigen::MatrixXd jac = f.jacobian_at(p);
  Eigen::MatrixXd g = gm.at(p);
  Eigen::MatrixXd h = gn.at(out.q);
  const DeclaredFrames& d = ctx.frames();

  if (d.source) {
    out.source_declared = true;
    out.vertical = eval_all(d.vertical, p);
    out.horizontal = eval_all(d.horizontal, p);
    if (static_cast<int>(out.vertical.size() + out.horizontal.size()) != m) {
      throw GeometryError("declared vertical and horizontal frames do not span the source");
    }
    require_orthonormal(g, out.vertical, "vertical");
    require_orthonormal(g, out.horizontal, "horizontal");
    require_orthogonal(g, out.vertical, out.horizontal, "vertical and horizontal");
    double scale = std::max(1.0, jac.norm());
    for (const auto& u : out.vertical) {
      if ((jac * u).norm() > kFrameTol * scale) throw GeometryError("declared vertical vector is not in ker F*");
    }
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
    std::vector<Eigen::VectorXd> ker;
    for (int c = out.rank; c < m; ++c) ker.push_back(svd.matrixV().col(c));
    if (jac.rows() == 0) {
      ker.clear();
      for (int c = 0; c < m; ++c) ker.push_back(Eigen::VectorXd::Unit(m, c));
    }
    out.vertical = orthonormalize(gm, ker, p);
    out.horizontal = orthogonal_complement(gm, out.vertical, p);
  }

  if (d.target) {
    out.target_declared = true;
    out.range = eval_all(d.range, out.q);
    out.normal = eval_all(d.normal, out.q);
    if (static_cast<int>(out.range.size() + out.normal.size()) != n) {
      throw GeometryError("declared range and normal frames do not span the target");
    }
    if (static_cast<int>(out.range.size()) != out.rank) {
      throw GeometryError("declared range frame size differs from the Jacobian rank");
    }
    require_orthonormal(h, out.range, "range");
    require_orthonormal(h, out.normal, "normal");
    require_orthogonal(h, out.range, out.normal, "range and normal");
    for (int c = 0; c < m; ++c) {
      Eigen::VectorXd col = jac.col(c);
      double scale = std::max(1.0, col.norm());
      for (const auto& e : out.normal) {
        if (std::abs(col.dot(h * e)) > kFrameTol * scale) {
          throw GeometryError("declared normal vector is not orthogonal to range F*");
        }
      }
    }
  } else {
    std::vector<Eigen::VectorXd> img;
    for (const auto& x : out.horizontal) img.push_back(jac * x);
    // Column space from the pushed horizontal frame, orthonormalized in g_N.
    out.range = orthonormalize(gn, img, out.q);
    out.normal = orthogonal_complement(gn, out.range, out.q);
  }

  if (j) {
    for (const auto& u : out.vertical) out.jker.push_back(j->apply_at(p, u));
    out.mu = d.source && !d.mu.empty() ? eval_all(d.mu, p) : invariant_complement(gm, *j, out.vertical, p);
  }
  if (jprime) {
    for (const auto& e : out.range) out.jrange.push_back(jprime->apply_at(out.q, e));
    out.nu = d.target && !d.nu.empty() ? eval_all(d.nu, out.q) : invariant_complement(gn, *jprime, out.range, out.q);
  }
  return out;
}

}  // namespace dgeo
