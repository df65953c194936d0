#pragma once

#include "capcover/caps.hpp"

namespace capcover {

struct PolarPair {
  Polytope primal;
  Polytope polar;  // about `center`, expressed with center moved to the origin
  Vec center;
};

PolarPair polar_body(const Polytope& P, const Vec& center);
// Polar of K about the origin: polytopes by vertex/facet swap, ellipsoids in closed form,
// other bodies through their polytopal proxy.
BodyPtr polar_of(const BodyPtr& K, double eps = 0.01);

// v -> {x : <v,x> <= 1}; hyperplane {<n,x> = b}, b != 0 -> n / b.
Halfspace polar_point(const Vec& v);
Vec polar_hyperplane(const Halfspace& h);

// vol(P) * vol(P*) with the polar taken about the centroid.
double mahler(const Polytope& P);

constexpr double kDefaultPiConstant = 8.0;

// Cap of K* through the point at depth eps/c on the ray along C's normal, of minimum volume.
Cap pi_map(const BodyPtr& Kstar, const Cap& C, double c = kDefaultPiConstant);

struct CapProductRecord {
  Vec direction;
  double cap_volume = 0.0;
  double polar_cap_volume = 0.0;
  double normalized_product = 0.0;  // product / eps^(d+1)
};

CapProductRecord mahler_cap_product(const BodyPtr& K, const BodyPtr& Kstar, const Vec& u, double eps,
                                    double c = kDefaultPiConstant);

struct DualCapPolar {
  Polytope G;          // in coordinates of the hyperplane z*, origin at its foot point
  Polytope expected;   // alpha * (projected base)^*, same coordinates
  Vec h_star;          // polar point of the base hyperplane, in those coordinates
  double alpha = 0.0;
  double max_vertex_error = 0.0;  // vertex matching of G - h* against expected
};

// base: vertices of a (d-1)-polytope lying on a hyperplane not through O; z on the ray
// from O normal to that hyperplane, beyond it; x = Oz ∩ hyperplane must be interior to base.
DualCapPolar dual_cap_polar(const Points& base, const Vec& z);

struct BaseSandwich {
  double c1 = 0.0;  // largest with c1 eps X* ⊆ base(C) - h*
  double c2 = 0.0;  // smallest with base(C) - h* ⊆ c2 eps X*
};

BaseSandwich base_sandwich(const BodyPtr& K, const BodyPtr& Kstar, const Vec& u, double eps,
                           double c = kDefaultPiConstant);

// Symmetric Hausdorff-style matching: max over vertices of A of the distance to the nearest
// vertex of B, and vice versa.
double vertex_match_error(const Polytope& A, const Polytope& B);

}  // namespace capcover
