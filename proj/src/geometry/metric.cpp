#include <cmath>
#include <map>

#include "dgeo/geometry.hpp"

namespace dgeo {

namespace {

constexpr int kMaxSymbolicBlock = 6;

// Laplace expansion along the first row with memoised minors; exact for the
// small blocks it is used on.
class Determinant {
 public:
  Determinant(const ExprMatrix& m, std::vector<int> idx, const Assumptions& a)
      : m_(m), idx_(std::move(idx)), a_(a) {}

  // det of the submatrix on rows skip_row..., columns given by mask.
  Expr minor(unsigned row_start, unsigned col_mask) {
    auto key = std::make_pair(row_start, col_mask);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const unsigned n = static_cast<unsigned>(idx_.size());
    Expr out;
    if (row_start == n) {
      out = Expr(1.0);
    } else {
      int sign = 1;
      for (unsigned c = 0; c < n; ++c) {
        if (!(col_mask & (1u << c))) continue;
        const Expr& e = m_(idx_[row_start], idx_[c]);
        if (!e.is_zero()) {
          Expr sub = minor(row_start + 1, col_mask & ~(1u << c));
          if (!sub.is_zero()) out += Expr(static_cast<double>(sign)) * e * sub;
        }
        sign = -sign;
      }
      out = simplify(out, a_);
    }
    memo_.emplace(key, out);
    return out;
  }

  Expr det() { return minor(0, (1u << idx_.size()) - 1); }

  // Cofactor C_{rc} of the block.
  Expr cofactor(int r, int c) {
    std::vector<int> rows, cols;
    for (int i = 0; i < static_cast<int>(idx_.size()); ++i) {
      if (i != r) rows.push_back(idx_[i]);
      if (i != c) cols.push_back(idx_[i]);
    }
    if (rows.empty()) return Expr(1.0);
    ExprMatrix sub(static_cast<int>(rows.size()), static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        sub(static_cast<int>(i), static_cast<int>(j)) = m_(rows[i], cols[j]);
      }
    }
    std::vector<int> all(rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    Expr d = Determinant(sub, all, a_).det();
    return ((r + c) % 2 == 0) ? d : simplify(-d, a_);
  }

 private:
  const ExprMatrix& m_;
  std::vector<int> idx_;
  const Assumptions& a_;
  std::map<std::pair<unsigned, unsigned>, Expr> memo_;
};

}  // namespace

Metric::Metric(ChartPtr chart, ExprMatrix g) : chart_(std::move(chart)) {
  const int n = chart_->dim();
  if (g.rows() != n || g.cols() != n) {
    throw GeometryError("metric on chart '" + chart_->name() + "' must be " + std::to_string(n) +
                        "x" + std::to_string(n));
  }
  assume_ = chart_->assumptions();
  g_ = g.simplified(assume_);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!simplify(g_(i, j) - g_(j, i), assume_).is_zero()) {
        throw GeometryError("metric on chart '" + chart_->name() + "' is not symmetric at (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
    // Diagonal entries of a positive-definite metric never vanish.
    assume_.add_nonzero(g_(i, i));
  }
  build_inverse();
}

void Metric::build_inverse() {
  const int n = dim();
  // Connected components of the nonzero pattern.
  std::vector<int> block(static_cast<std::size_t>(n), -1);
  int nblocks = 0;
  for (int s = 0; s < n; ++s) {
    if (block[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<int> stack{s};
    block[static_cast<std::size_t>(s)] = nblocks;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (block[static_cast<std::size_t>(j)] < 0 && !g_(i, j).is_zero()) {
          block[static_cast<std::size_t>(j)] = nblocks;
          stack.push_back(j);
        }
      }
    }
    ++nblocks;
  }
  ginv_ = ExprMatrix(n, n);
  det_ = Expr(1.0);
  for (int b = 0; b < nblocks; ++b) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (block[static_cast<std::size_t>(i)] == b) idx.push_back(i);
    }
    if (static_cast<int>(idx.size()) > kMaxSymbolicBlock) {
      symbolic_inverse_ = false;
      continue;
    }
    Determinant d(g_, idx, assume_);
    Expr det = d.det();
    if (det.is_zero()) {
      throw GeometryError("metric on chart '" + chart_->name() + "' is degenerate");
    }
    assume_.add_nonzero(det);
    det_ = simplify(det_ * det, assume_);
    Expr inv_det = simplify(pow(det, -1.0), assume_);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < idx.size(); ++c) {
        // inverse = adj / det, adj_{rc} = C_{cr}
        Expr cof = d.cofactor(static_cast<int>(c), static_cast<int>(r));
        ginv_(idx[r], idx[c]) = simplify(cof * inv_det, assume_);
      }
    }
  }
}

const Expr& Metric::ginv(int i, int j) const {
  if (!symbolic_inverse_) {
    throw UnsupportedConfiguration("metric on chart '" + chart_->name() +
                                   "' has a block larger than six; only numeric inverse available");
  }
  return ginv_(i, j);
}

const ExprMatrix& Metric::inverse() const {
  if (!symbolic_inverse_) (void)ginv(0, 0);
  return ginv_;
}

const Expr& Metric::det() const {
  if (!symbolic_inverse_) (void)ginv(0, 0);
  return det_;
}

Eigen::MatrixXd Metric::inverse_at(const Point& p) const {
  if (symbolic_inverse_) return ginv_.eval(p);
  return g_.eval(p).inverse();
}

Expr Metric::inner(const VectorField& a, const VectorField& b) const {
  Expr s;
  for (int i = 0; i < dim(); ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < dim(); ++j) {
      if (b[j].is_zero() || g_(i, j).is_zero()) continue;
      s += g_(i, j) * a[i] * b[j];
    }
  }
  return simplify(s, assume_);
}

double Metric::inner_at(const Point& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return a.dot(at(p) * b);
}

double Metric::norm_at(const Point& p, const Eigen::VectorXd& a) const {
  return std::sqrt(std::max(0.0, inner_at(p, a, a)));
}

bool Metric::positive_definite_at(const Point& p) const {
  Eigen::LLT<Eigen::MatrixXd> llt(at(p));
  return llt.info() == Eigen::Success;
}

const TensorField& Metric::christoffel() const {
  std::call_once(gamma_once_, [this] {
    const int n = dim();
    std::vector<Expr> dg(static_cast<std::size_t>(n * n * n));  // [l][i][j] = ∂_l g_ij
    for (int l = 0; l < n; ++l) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          dg[static_cast<std::size_t>((l * n + i) * n + j)] =
              simplify(differentiate(g_(i, j), chart_->symbol(l)), assume_);
        }
      }
    }
    auto d = [&](int l, int i, int j) -> const Expr& {
      return dg[static_cast<std::size_t>((l * n + i) * n + j)];
    };
    TensorField t(chart_, 1, 2);
    const ExprMatrix& inv = inverse();
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t kk) {
      int k = static_cast<int>(kk);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          Expr s;
          for (int l = 0; l < n; ++l) {
            if (inv(k, l).is_zero()) continue;
            Expr bracket = d(i, j, l) + d(j, i, l) - d(l, i, j);
            if (bracket.is_zero()) continue;
            s += inv(k, l) * bracket;
          }
          Expr v = simplify(Expr(0.5) * s, assume_);
          t.at({k, i, j}) = v;
          t.at({k, j, i}) = v;
        }
      }
    });
    gamma_ = std::move(t);
  });
  return gamma_;
}

ChristoffelValues christoffel_at(const Metric& g, const Point& p) {
  const int n = g.dim();
  ChristoffelValues out;
  out.gamma.assign(static_cast<std::size_t>(n * n * n), 0.0);
  if (g.has_symbolic_inverse()) {
    out.gamma = g.christoffel().eval(p);
    return out;
  }
  out.numeric_inverse = true;
  Eigen::MatrixXd inv = g.inverse_at(p);
  std::vector<double> dg(static_cast<std::size_t>(n * n * n));
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Expr e = differentiate(g.g(i, j), g.chart().symbol(l));
        dg[static_cast<std::size_t>((l * n + i) * n + j)] = e.is_zero() ? 0.0 : evaluate(e, p);
      }
    }
  }
  auto d = [&](int l, int i, int j) { return dg[static_cast<std::size_t>((l * n + i) * n + j)]; };
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += inv(k, l) * (d(i, j, l) + d(j, i, l) - d(l, i, j));
        out.gamma[static_cast<std::size_t>((k * n + i) * n + j)] = 0.5 * s;
      }
    }
  }
  return out;
}

const TensorField& christoffel(const Metric& g) { return g.christoffel(); }

}  // namespace dgeo
