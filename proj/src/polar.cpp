#include "capcover/polar.hpp"

#include <cmath>

namespace capcover {

PolarPair polar_body(const Polytope& P, const Vec& center) {
  if (!(P.violation(center) < -1e-12 * (1.0 + P.scale())))
    throw GeometryError(ErrorCode::CenterNotInterior, "polar center must be strictly interior");
  std::vector<Halfspace> hs;
  hs.reserve(P.num_vertices());
  for (int i = 0; i < P.num_vertices(); ++i) hs.push_back(polar_point(Vec(P.vertex(i)) - center));
  PolarPair pp;
  pp.primal = P;
  pp.center = center;
  pp.polar = halfspace_intersection(hs, Vec::Zero(P.dim()));
  return pp;
}

BodyPtr polar_of(const BodyPtr& K, double eps) {
  const int d = K->dim();
  if (const Ellipsoid* e = K->ellipsoid()) {
    // {y : <c,y> + |L^T y| <= 1} = ellipsoid with shape M / (1 + c^T M^{-1} c), M = L L^T - c c^T.
    if (!e->contains(Vec::Zero(d), -1e-12)) throw GeometryError(ErrorCode::CenterNotInterior, "origin not interior");
    Mat M = e->L * e->L.transpose() - e->center * e->center.transpose();
    Vec Mic = M.ldlt().solve(e->center);
    double k = 1.0 + e->center.dot(Mic);
    return make_ellipsoid(Ellipsoid::from_shape(-Mic, M / k));
  }
  BodyPtr R = realize(K, eps);
  return make_polytope_body(polar_body(*R->polytope(), Vec::Zero(d)).polar);
}

Halfspace polar_point(const Vec& v) {
  if (!(v.norm() > 0)) throw GeometryError(ErrorCode::OriginPolar, "polar of the origin");
  return Halfspace(v, 1.0);
}

Vec polar_hyperplane(const Halfspace& h) {
  if (!(std::abs(h.offset) > 0)) throw GeometryError(ErrorCode::OriginPolar, "hyperplane through the origin");
  return h.normal / h.offset;
}

double mahler(const Polytope& P) {
  Vec c = P.centroid();
  return P.volume() * polar_body(P, c).polar.volume();
}

Cap pi_map(const BodyPtr& Kstar, const Cap& C, double c) {
  Vec x = point_at_depth(*Kstar, C.normal, C.width / c);
  return minimal_cap(Kstar, x);
}

CapProductRecord mahler_cap_product(const BodyPtr& K, const BodyPtr& Kstar, const Vec& u, double eps, double c) {
  const int d = K->dim();
  Cap C = make_cap(K, u, eps);
  Cap P = pi_map(Kstar, C, c);
  CapProductRecord r;
  r.direction = C.normal;
  r.cap_volume = C.volume;
  r.polar_cap_volume = P.volume;
  r.normalized_product = C.volume * P.volume / std::pow(eps, d + 1);
  return r;
}

double vertex_match_error(const Polytope& A, const Polytope& B) {
  auto one_way = [](const Polytope& X, const Polytope& Y) {
    double worst = 0.0;
    for (int i = 0; i < X.num_vertices(); ++i) {
      double best = INFINITY;
      for (int j = 0; j < Y.num_vertices(); ++j) best = std::min(best, (Vec(X.vertex(i)) - Vec(Y.vertex(j))).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(A, B), one_way(B, A));
}

DualCapPolar dual_cap_polar(const Points& base, const Vec& z) {
  const int d = static_cast<int>(z.size());
  if (static_cast<int>(base.size()) < d) throw GeometryError(ErrorCode::GeometryInvalid, "base needs d vertices");
  double zn = z.norm();
  if (!(zn > 0)) throw GeometryError(ErrorCode::GeometryInvalid, "viewpoint at the origin");
  Vec n = z / zn;
  double eta = n.dot(base[0]);
  double spread = 0.0;
  for (const Vec& p : base) spread = std::max(spread, std::abs(n.dot(p) - eta));
  if (spread > 1e-9 * (1.0 + std::abs(eta)))
    throw GeometryError(ErrorCode::GeometryInvalid, "viewpoint not vertical to the base hyperplane");
  if (!(eta > 0 && zn > eta)) throw GeometryError(ErrorCode::GeometryInvalid, "viewpoint must lie beyond the base");
  Mat F = complement_basis(n);
  Points proj;
  for (const Vec& p : base) proj.push_back(F * p);
  Polytope Kbar = convex_hull(proj);
  Vec foot = F * (eta * n);
  if (!(Kbar.violation(foot) < -1e-12 * (1.0 + Kbar.scale())))
    throw GeometryError(ErrorCode::GeometryInvalid, "segment Oz misses the interior of the base");

  DualCapPolar out;
  out.alpha = (zn - eta) / zn;
  // G directly: points w = z/|z|^2 + F^T y of the hyperplane z* with <w,p> <= 1 for every base vertex.
  std::vector<Halfspace> hs;
  Vec w0 = z / (zn * zn);
  for (const Vec& p : base) hs.emplace_back(F * p, 1.0 - w0.dot(p));
  out.G = halfspace_intersection(hs, Vec::Zero(d - 1));
  out.h_star = F * (n / eta);
  // alpha times the polar of the projected base about the foot point.
  Polytope polar = polar_body(Kbar, foot).polar;
  out.expected = scale_about(polar, Vec::Zero(d - 1), out.alpha);
  Points shifted;
  for (int i = 0; i < out.G.num_vertices(); ++i) shifted.push_back(Vec(out.G.vertex(i)) - out.h_star);
  out.max_vertex_error = vertex_match_error(convex_hull(shifted), out.expected);
  return out;
}

BaseSandwich base_sandwich(const BodyPtr& K, const BodyPtr& Kstar, const Vec& u0, double eps, double c) {
  const int d = K->dim();
  Vec u = u0.normalized();
  Cap C = make_cap(K, u, eps);
  Cap P = pi_map(Kstar, C, c);
  Mat Fu = base_frame(u);
  // X: vertical projection of base(pi(C)).
  Polytope Bp = cap_base(P);
  Mat Fp = base_frame(P.normal);
  Points xs;
  for (int i = 0; i < Bp.num_vertices(); ++i) {
    Vec y = Fp.transpose() * Vec(Bp.vertex(i)) + P.offset * P.normal;
    xs.push_back(Fu * y);
  }
  Polytope X = convex_hull(xs);
  Polytope Xs = polar_body(X, X.centroid()).polar;
  // z: pole of the base hyperplane of C; h through z parallel to base(pi(C)).
  Vec z = u / C.offset;
  double beta = P.normal.dot(z);
  Vec hstar = P.normal / beta;
  Polytope Bc = cap_base(C);
  Vec hs2 = Fu * hstar;
  Points as;
  for (int i = 0; i < Bc.num_vertices(); ++i) as.push_back(Vec(Bc.vertex(i)) - hs2);
  Polytope A = convex_hull(as);
  auto gauge = [](const Polytope& Q, const Vec& y) {
    double g = 0.0;
    for (int f = 0; f < Q.num_facets(); ++f) g = std::max(g, Q.facet_normal(f).dot(y) / Q.facet_offset(f));
    return g;
  };
  BaseSandwich r;
  double g2 = 0.0;
  for (int i = 0; i < A.num_vertices(); ++i) g2 = std::max(g2, gauge(Xs, Vec(A.vertex(i))));
  r.c2 = g2 / eps;
  if (A.violation(Vec::Zero(d - 1)) < 0) {
    double g1 = 0.0;
    for (int i = 0; i < Xs.num_vertices(); ++i) g1 = std::max(g1, gauge(A, Vec(Xs.vertex(i))));
    r.c1 = 1.0 / (g1 * eps);
  }
  return r;
}

}  // namespace capcover
