#include <cmath>

#include "dgeo/geometry.hpp"

namespace dgeo {

namespace {

struct State {
  Eigen::VectorXd x;
  Eigen::VectorXd v;
};

class GeodesicRhs {
 public:
  explicit GeodesicRhs(const Metric& g) : g_(g), n_(g.dim()) {}

  Point point(const Eigen::VectorXd& x) const {
    std::vector<double> xs(x.data(), x.data() + x.size());
    Point p = g_.chart().point(xs);
    if (!g_.chart().admissible(p)) throw GeodesicError("trajectory left the chart domain");
    return p;
  }

  State deriv(const State& s) const {
    Point p = point(s.x);
    std::vector<double> gam;
    try {
      gam = christoffel_at(g_, p).gamma;
    } catch (const DomainError& e) {
      throw GeodesicError(std::string("trajectory left the chart domain: ") + e.what());
    }
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n_);
    for (int k = 0; k < n_; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) acc += gam[static_cast<std::size_t>((k * n_ + i) * n_ + j)] * s.v[i] * s.v[j];
      }
      a[k] = -acc;
    }
    return {s.v, a};
  }

  State rk4(const State& s, double h) const {
    auto axpy = [](const State& a, double t, const State& d) {
      return State{a.x + t * d.x, a.v + t * d.v};
    };
    State k1 = deriv(s);
    State k2 = deriv(axpy(s, h / 2, k1));
    State k3 = deriv(axpy(s, h / 2, k2));
    State k4 = deriv(axpy(s, h, k3));
    return State{s.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                 s.v + h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
  }

  double energy(const State& s) const {
    Point p = point(s.x);
    return g_.inner_at(p, s.v, s.v);
  }

 private:
  const Metric& g_;
  int n_;
};

}  // namespace

GeodesicResult geodesic_integrate(const Metric& g, const Point& p0, const Eigen::VectorXd& v0,
                                  double t_end, double dt, const GeodesicOptions& opts) {
  if (!(dt > 0.0)) throw GeometryError("geodesic: dt must be positive");
  if (v0.size() != g.dim() || v0.norm() == 0.0) throw GeometryError("geodesic: initial velocity must be nonzero");

  GeodesicResult res;
  if (opts.clairaut_coord) {
    int c = *opts.clairaut_coord;
    if (c < 0) {
      for (int i = 0; i < g.dim() && c < 0; ++i) {
        bool used = false;
        for (int a = 0; a < g.dim(); ++a) {
          for (int b = 0; b < g.dim(); ++b) used = used || depends_on(g.g(a, b), g.chart().symbol(i));
        }
        if (!used) c = i;
      }
      if (c < 0) throw GeometryError("geodesic: metric has no cyclic coordinate to monitor");
    }
    res.clairaut_coord = c;
  }

  GeodesicRhs rhs(g);
  State s{g.chart().coords_of(p0), v0};
  const double e0 = rhs.energy(s);
  const double limit = opts.drift_per_step * std::max(1.0, std::abs(e0));

  auto clairaut = [&](const State& st) {
    Point p = rhs.point(st.x);
    Eigen::VectorXd gv = g.at(p) * st.v;
    return gv[*res.clairaut_coord] / std::sqrt(g.inner_at(p, st.v, st.v));
  };
  const double c0 = res.clairaut_coord ? clairaut(s) : 0.0;

  // Advances by h, halving recursively while the energy jump is too large.
  std::function<State(const State&, double, int)> advance = [&](const State& a, double h, int depth) {
    State b = rhs.rk4(a, h);
    if (depth < opts.max_halvings && std::abs(rhs.energy(b) - rhs.energy(a)) > limit) {
      ++res.halvings;
      return advance(advance(a, h / 2, depth + 1), h / 2, depth + 1);
    }
    return b;
  };

  res.trajectory.push_back({0.0, s.x, s.v});
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  double t = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    double h = std::min(dt, t_end - t);
    s = advance(s, h, 0);
    t = (i + 1 == steps) ? t_end : t + h;
    res.max_energy_drift = std::max(res.max_energy_drift, std::abs(rhs.energy(s) - e0));
    if (res.clairaut_coord) res.max_clairaut_drift = std::max(res.max_clairaut_drift, std::abs(clairaut(s) - c0));
    if ((i + 1) % std::max<std::size_t>(1, opts.record_every) == 0 || i + 1 == steps) {
      res.trajectory.push_back({t, s.x, s.v});
    }
  }
  return res;
}

}  // namespace dgeo
