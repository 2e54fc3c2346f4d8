#include <algorithm>

#include "dgeo/cli.hpp"

namespace dgeo::cli {

namespace {

struct Entry {
  std::string name;
  std::string description;
  std::string text;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = {
      {"paper-3.1", "Clairaut anti-invariant Riemannian map from a warped 6-manifold, source side",
       R"(dgeo-spec 1
name paper-3.1
description Clairaut anti-invariant Riemannian map from a warped 6-manifold, source side

[manifold M]
coords x1 x2 x3 x4 x5 x6
metric diag exp(-2*x4), exp(-2*x4), exp(-2*x4), 1, 1, 1

[manifold N]
coords y1 y2 y3 y4 y5 y6
metric diag 1, exp(-2*y4), 1, 1, exp(-2*y4), 1

[frame EM on M]
U1 = exp(x4), 0, 0, 0, 0, 0
X1 = 0, exp(x4), 0, 0, 0, 0
U2 = 0, 0, exp(x4), 0, 0, 0
X2 = 0, 0, 0, 1, 0, 0
X3 = 0, 0, 0, 0, 1, 0
X4 = 0, 0, 0, 0, 0, 1

[frame EN on N]
e1' = 1, 0, 0, 0, 0, 0
e2' = 0, exp(y4), 0, 0, 0, 0
e3' = 0, 0, 1, 0, 0, 0
e4' = 0, 0, 0, 1, 0, 0
e5' = 0, 0, 0, 0, exp(y4), 0
e6' = 0, 0, 0, 0, 0, 1

[map F: M -> N]
components x5, x2, 0, x4, 0, x6
vertical EM U1 U2
horizontal EM X1 X2 X3 X4
range EN e1' e2' e4' e6'
normal EN e3' e5'

# the coordinate formula squares to +I; the frame table is used
[structure J on M]
frame EM
U1 -> X1
X1 -> -U1
U2 -> X2
X2 -> -U2
X3 -> X4
X4 -> -X3

[function f on M]
expr -x4

[claims]
kahler J
ricci EM U1 U1 = 3
ricci EM U2 U2 = 1
ricci EM U1 U2 = -1
ricci EM X1 X1 = -2
ricci EM X2 X2 = -2
christoffel M 1 1 4 = -1
christoffel M 2 2 4 = -1
christoffel M 3 3 4 = -1
christoffel M 4 1 1 = exp(-2*x4)
christoffel M 4 2 2 = exp(-2*x4)
christoffel M 4 3 3 = exp(-2*x4)

[check]
suite riemannian_map, anti_invariant, hermitian, clairaut_source, oneill, vertical_ricci_decomposition, ricci_oracle
audit kahler, j_invariance, ric_uv, ric_ux, ric_xy, ric_bxby, ric_cxcy, ric_bxcy, ric_cxby, lag_ric_uv, lag_ric_ux, lag_ric_xy, cor_ric_xy
points 20
seed 1
)"},
      {"paper-4.1", "Clairaut anti-invariant Riemannian map to a warped 6-manifold, target side",
       R"(dgeo-spec 1
name paper-4.1
description Clairaut anti-invariant Riemannian map to a warped 6-manifold, target side
# (∇F*)(X,X) = η1 e1' + η2 e3' + η3 e4' + η4 e6' vanishes for this map, so every η is 0
const eta1 = 0
const eta2 = 0
const eta3 = 0
const eta4 = 0
const delta = 1

[manifold M]
coords x1 x2 x3 x4 x5 x6
metric diag 1, 1, exp(2*x5), exp(2*x5), 1, exp(2*x5)

[manifold N]
coords y1 y2 y3 y4 y5 y6
metric diag 1, 1, exp(2*y5), 1, 1, exp(2*y5)

[frame EM on M]
e1 = 1, 0, 0, 0, 0, 0
e2 = 0, 1, 0, 0, 0, 0
e3 = 0, 0, exp(-x5), 0, 0, 0
e4 = 0, 0, 0, exp(-x5), 0, 0
e5 = 0, 0, 0, 0, 1, 0
e6 = 0, 0, 0, 0, 0, exp(-x5)

[frame EN on N]
e1' = 1, 0, 0, 0, 0, 0
e2' = 0, 1, 0, 0, 0, 0
e3' = 0, 0, exp(-y5), 0, 0, 0
e4' = 0, 0, 0, 1, 0, 0
e5' = 0, 0, 0, 0, 1, 0
e6' = 0, 0, 0, 0, 0, exp(-y5)

[map F: M -> N]
components 0, x2, 0, 0, x5, 0
vertical EM e1 e3 e4 e6
horizontal EM e2 e5
range EN e2' e5'
normal EN e1' e3' e4' e6'

[structure J' on N]
frame EN
e1' -> e2'
e2' -> -e1'
e3' -> e4'
e4' -> -e3'
e5' -> e6'
e6' -> -e5'

[function g on N]
expr eta1/delta^2*y1 + exp(-y5)*eta2/delta^2*y3 + eta3/delta^2*y4 + exp(-y5)*eta4/delta^2*y6

[claims]
kahler J'
christoffel N 3 3 5 = 1
christoffel N 6 5 6 = 1
christoffel N 5 3 3 = -exp(2*y5)
christoffel N 5 6 6 = -exp(2*y5)

[check]
suite riemannian_map, anti_invariant_target, hermitian_target, clairaut_target, umbilical, oneill, ricci_oracle
audit kahler_target, j_invariance_target, ric_fxfy, ric_fxe, ric_de, ric_pdpe, ric_pdqe, ric_peqd, ric_qdqe, lag_ric_fxfy, lag_ric_fxe, lag_ric_de
points 20
seed 1
)"},
      {"euclidean-kahler", "flat complex 2-space with its standard structure",
       R"(dgeo-spec 1
name euclidean-kahler
description flat complex 2-space with its standard structure

[manifold C2]
coords x1 x2 x3 x4
metric diag 1, 1, 1, 1
box x1 -1 1
box x2 -1 1
box x3 -1 1
box x4 -1 1

[structure J on C2]
coordinates
x1 -> x3
x3 -> -x1
x2 -> x4
x4 -> -x2

[soliton on C2]
field 0, 0, 0, 0
lambda 0

[check]
suite hermitian, kahler, soliton, j_invariance, einstein, ricci_oracle
points 20
seed 1
)"},
      {"gaussian-soliton", "shrinking Gaussian soliton on Euclidean 3-space",
       R"(dgeo-spec 1
name gaussian-soliton
description shrinking Gaussian soliton on Euclidean 3-space
const c = 0.5

[manifold E3]
coords x y z
metric diag 1, 1, 1
box x -1 1
box y -1 1
box z -1 1

[soliton on E3]
potential c*(x^2 + y^2 + z^2)/2

[check]
suite solve_lambda, soliton, ricci_oracle
points 20
seed 1
)"},
      {"sphere-2", "unit round 2-sphere",
       R"(dgeo-spec 1
name sphere-2
description unit round 2-sphere

[manifold S2]
coords th ph
metric diag 1, sin(th)^2
constraint sin(th) > 0
box th 0.3 2.8
box ph 0 6

[check]
suite einstein, ricci_oracle
points 20
seed 1
)"},
      {"hyperbolic-2", "upper half-plane of curvature -1",
       R"(dgeo-spec 1
name hyperbolic-2
description upper half-plane of curvature -1

[manifold H2]
coords x y
metric diag 1/y^2, 1/y^2
constraint y > 0
box x -1 1
box y 0.5 2

[check]
suite einstein, ricci_oracle
points 20
seed 1
)"},
      {"revolution-surface", "surface of revolution with profile radius 2 + cos(r)",
       R"(dgeo-spec 1
name revolution-surface
description surface of revolution with profile radius 2 + cos(r)

[manifold S]
coords r ph
metric diag 1, (2 + cos(r))^2
box r -3 3
box ph 0 6

[geodesic on S]
from 0.5, 0
dir 0.6, 0.25
t 10
dt 1e-3
monitor clairaut

[check]
suite geodesic_clairaut, geodesic_energy, ricci_oracle
tol geodesic_clairaut 1e-6
tol geodesic_energy 1e-8
points 20
seed 1
)"},
      {"warped-clairaut", "projection of a warped product onto its base, fibers umbilical with mean curvature -grad f",
       R"(dgeo-spec 1
name warped-clairaut
description projection of a warped product onto its base, fibers umbilical with mean curvature -grad f

[manifold M]
coords x1 x2 x3 x4
metric diag 1, 1, exp(2*x1), exp(2*x1)

[manifold N]
coords y1 y2
metric diag 1, 1

[frame EM on M]
X1 = 1, 0, 0, 0
X2 = 0, 1, 0, 0
U1 = 0, 0, exp(-x1), 0
U2 = 0, 0, 0, exp(-x1)

[frame EN on N]
Y1 = 1, 0
Y2 = 0, 1

[map F: M -> N]
components x1, x2
vertical EM U1 U2
horizontal EM X1 X2
range EN Y1 Y2

# anti-invariant and Hermitian, not parallel
[structure J on M]
frame EM
U1 -> X1
X1 -> -U1
U2 -> X2
X2 -> -U2

[function f on M]
expr x1

# M is hyperbolic 3-space times a line; Ric + Hess(-x2^2) + 2g = 0
[soliton on M]
potential -x2^2
lambda 2

[check]
suite riemannian_map, anti_invariant, hermitian, clairaut_source, oneill, vertical_ricci_decomposition, soliton, ricci_oracle
audit kahler, alpha_soliton_range, ric_lie_relation, scalar_range_source, scalar_kernel, ric_uv, ric_ux, ric_xy, cor_ric_xy
points 20
seed 1
)"},
      {"flat-lagrangian", "Lagrangian Riemannian map between flat complex 2-spaces",
       R"(dgeo-spec 1
name flat-lagrangian
description Lagrangian Riemannian map between flat complex 2-spaces

[manifold M]
coords x1 x2 x3 x4
metric diag 1, 1, 1, 1

[manifold N]
coords y1 y2 y3 y4
metric diag 1, 1, 1, 1

[frame EM on M]
e1 = 1, 0, 0, 0
e2 = 0, 1, 0, 0
e3 = 0, 0, 1, 0
e4 = 0, 0, 0, 1

[frame EN on N]
e1' = 1, 0, 0, 0
e2' = 0, 1, 0, 0
e3' = 0, 0, 1, 0
e4' = 0, 0, 0, 1

[map F: M -> N]
components x3, x4, 0, 0
vertical EM e1 e2
horizontal EM e3 e4
range EN e1' e2'
normal EN e3' e4'

[structure J on M]
coordinates
x1 -> x3
x3 -> -x1
x2 -> x4
x4 -> -x2

[structure J' on N]
coordinates
y1 -> y3
y3 -> -y1
y2 -> y4
y4 -> -y2

[function f on M]
expr 0

[function g on N]
expr 0

[soliton on M]
potential 0
lambda 0

[soliton on N]
potential 0
lambda 0

[check]
suite riemannian_map, anti_invariant, anti_invariant_target, kahler, kahler_target, clairaut_source, clairaut_target, oneill, vertical_ricci_decomposition, j_invariance, j_invariance_target
suite lag_ric_uv, lag_ric_ux, lag_ric_xy, lag_ric_fxfy, lag_ric_fxe, lag_ric_de
suite ric_uv, ric_ux, ric_xy, ric_bxby, ric_cxcy, ric_bxcy, ric_cxby, cor_ric_xy
suite ric_fxfy, ric_fxe, ric_de, ric_pdpe, ric_pdqe, ric_peqd, ric_qdqe
suite alpha_soliton_range, ric_lie_relation, scalar_range_source, scalar_kernel, scalar_normal_target, scalar_range_target
points 10
seed 1
)"},
  };
  return all;
}

const Entry& find(const std::string& name) {
  for (const auto& e : entries()) {
    if (e.name == name) return e;
  }
  throw SpecError("catalog", 0, "", "no catalog entry named '" + name + "'");
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : entries()) v.push_back(e.name);
    return v;
  }();
  return names;
}

const std::string& catalog_description(const std::string& name) { return find(name).description; }

const std::string& catalog_text(const std::string& name) { return find(name).text; }

Config catalog_config(const std::string& name) { return parse_spec(find(name).text, "catalog:" + name); }

}  // namespace dgeo::cli
