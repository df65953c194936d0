#include "capcover/caps.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>

namespace capcover {

BodyPtr realize(const BodyPtr& K, double eps) {
  if (K->polytope() || K->ellipsoid()) return K;
  const int d = K->dim();
  double n = 64.0 * std::pow(10.0 / eps, (d - 1) / 2.0);
  int N = static_cast<int>(std::min(2e5, std::ceil(n)));
  return make_polytope_body(polytope_proxy(*K, N, 0));
}

double ball_cap_volume(int d, double h) {
  h = std::clamp(h, -1.0, 1.0);
  if (h < 0) return unit_ball_volume(d) - ball_cap_volume(d, -h);
  return 0.5 * unit_ball_volume(d) * boost::math::ibeta((d + 1) / 2.0, 0.5, 1.0 - h * h);
}

ClipResult clip_polytope(const Polytope& P, const Vec& u, double b) {
  ClipResult r;
  const int n = P.num_vertices();
  std::vector<double> s(n);
  const double tol = 1e-14 * (1.0 + P.scale());
  for (int i = 0; i < n; ++i) {
    s[i] = P.vertex(i).dot(u) - b;
    if (s[i] >= -tol) r.piece.push_back(P.vertex(i));
    if (std::abs(s[i]) <= tol) r.slice.push_back(P.vertex(i));
  }
  for (auto [i, j] : P.edges()) {
    if ((s[i] > tol && s[j] < -tol) || (s[i] < -tol && s[j] > tol)) {
      Vec p = Vec(P.vertex(i)) + (Vec(P.vertex(j)) - Vec(P.vertex(i))) * (s[i] / (s[i] - s[j]));
      r.piece.push_back(p);
      r.slice.push_back(p);
    }
  }
  return r;
}

namespace {

double safe_hull_volume(const Points& pts, Vec* centroid) {
  if (pts.empty()) return 0.0;
  const int d = static_cast<int>(pts[0].size());
  if (static_cast<int>(pts.size()) <= d) {
    if (centroid) {
      Vec m = Vec::Zero(d);
      for (const Vec& p : pts) m += p;
      *centroid = m / static_cast<double>(pts.size());
    }
    return 0.0;
  }
  try {
    auto [v, c] = hull_volume_centroid(pts);
    if (centroid) *centroid = c;
    return v;
  } catch (const GeometryError&) {
    if (centroid) {
      Vec m = Vec::Zero(d);
      for (const Vec& p : pts) m += p;
      *centroid = m / static_cast<double>(pts.size());
    }
    return 0.0;
  }
}

// Volume and base centroid of {x in K : <u,x> >= b}, u unit.
double cap_geometry(const Body& K, const Vec& u, double b, Vec* base_centroid) {
  const int d = K.dim();
  if (const Ellipsoid* e = K.ellipsoid()) {
    Vec w = e->L.transpose() * u;
    double s = w.norm();
    double h = (b - u.dot(e->center)) / s;
    if (base_centroid) *base_centroid = e->center + e->L * (w / s) * std::clamp(h, -1.0, 1.0);
    return std::abs(e->L.determinant()) * ball_cap_volume(d, h);
  }
  const Polytope* P = K.polytope();
  if (!P) throw GeometryError(ErrorCode::GeometryInvalid, "cap geometry needs a realized body");
  ClipResult cr = clip_polytope(*P, u, b);
  if (base_centroid) {
    Mat F = base_frame(u);
    Points proj;
    for (const Vec& p : cr.slice) proj.push_back(F * p);
    Vec c2;
    if (proj.empty()) {
      // Cut at a vertex or beyond the body: fall back to the apex.
      int arg = 0;
      P->support(u, &arg);
      *base_centroid = P->vertex(arg);
    } else {
      safe_hull_volume(proj, &c2);
      *base_centroid = F.transpose() * c2 + b * u;
    }
  }
  return safe_hull_volume(cr.piece, nullptr);
}

Cap build_cap(const BodyPtr& K, const Vec& u, double offset) {
  Cap C;
  C.body = K;
  C.normal = u;
  SupportResult top = K->support(u);
  double bottom = K->support_value(-u);
  C.apex = top.point;
  C.full_width = top.value + bottom;
  C.offset = offset;
  C.width = top.value - offset;
  BodyPtr R = realize(K, std::max(1e-3, std::min(0.1, C.width)));
  C.volume = cap_geometry(*R, u, offset, &C.base_centroid);
  return C;
}

}  // namespace

double cap_volume(const Body& K, const Vec& u, double offset) { return cap_geometry(K, u, offset, nullptr); }

Mat base_frame(const Vec& u) { return complement_basis(u); }

bool Cap::contains(const Vec& y, double tol) const { return in_halfspace(y, tol) && body->contains(y, tol); }

Cap make_cap(const BodyPtr& K, const Vec& u0, double w) {
  Vec u = u0.normalized();
  double h = K->support_value(u);
  double full = h + K->support_value(-u);
  if (!(w > 0)) throw GeometryError(ErrorCode::WidthTooLarge, "cap width must be positive");
  if (w > full * (1.0 + 1e-12)) throw GeometryError(ErrorCode::WidthTooLarge, "cap width exceeds body width");
  return build_cap(K, u, h - std::min(w, full));
}

Cap cap_through(const BodyPtr& K, const Vec& u0, const Vec& x) {
  Vec u = u0.normalized();
  return build_cap(K, u, u.dot(x));
}

Cap expand_cap(const Cap& C, double rho) {
  double w = std::min(rho * C.width, C.full_width);
  if (!(w > 0)) throw GeometryError(ErrorCode::WidthTooLarge, "expansion factor must be positive");
  return make_cap(C.body, C.normal, w);
}

Polytope cap_base(const Cap& C, int n_ellipse) {
  const int d = C.body->dim();
  Mat F = base_frame(C.normal);
  Points pts;
  if (const Ellipsoid* e = C.body->ellipsoid()) {
    Vec p0 = C.base_centroid;
    Mat As = F * e->shape * F.transpose();
    double rho2 = 1.0 - (p0 - e->center).dot(e->shape * (p0 - e->center));
    if (rho2 <= 0) throw GeometryError(ErrorCode::GeometryInvalid, "cap base is empty");
    Eigen::SelfAdjointEigenSolver<Mat> es(As);
    Mat Ainvh = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    Vec y0 = F * p0;
    Points dirs;
    if (d - 1 == 1) {
      dirs = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
    } else {
      dirs = sphere_directions(d - 1, n_ellipse, 0);
    }
    for (const Vec& v : dirs) pts.push_back(y0 + std::sqrt(rho2) * Ainvh * v);
  } else {
    BodyPtr R = realize(C.body, std::max(1e-3, std::min(0.1, C.width)));
    ClipResult cr = clip_polytope(*R->polytope(), C.normal, C.offset);
    for (const Vec& p : cr.slice) pts.push_back(F * p);
  }
  return convex_hull(pts);
}

Cap minimal_cap(const BodyPtr& K0, const Vec& x) {
  const int d = K0->dim();
  if (!K0->contains(x, 0.0)) throw GeometryError(ErrorCode::OutsideBody, "minimal cap query outside body");
  BodyPtr K = realize(K0, 0.01);
  // Volume, with a 1e-6 relative preference for narrower caps so flat minima resolve
  // to the symmetric choice (e.g. facet-parallel caps of a box).
  auto f = [&](const Vec& u) {
    double b = u.dot(x);
    return cap_volume(*K, u, b) * (1.0 + 1e-6 * (K->support_value(u) - b));
  };
  Points grid = sphere_directions(d, d <= 3 ? 2048 : 10000, 0);
  std::vector<double> vals(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);
  std::vector<int> ord(grid.size());
  for (size_t i = 0; i < ord.size(); ++i) ord[i] = static_cast<int>(i);
  auto lex_less = [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  };
  auto better = [&](double va, const Vec& a, double vb, const Vec& b) {
    double tol = 1e-12 * std::max(std::abs(va), std::abs(vb));
    if (va < vb - tol) return true;
    if (vb < va - tol) return false;
    return lex_less(a, b);
  };
  std::sort(ord.begin(), ord.end(), [&](int a, int b) { return better(vals[a], grid[a], vals[b], grid[b]); });
  Vec best_u = grid[ord[0]];
  double best_v = vals[ord[0]];
  const double step = d <= 3 ? 0.08 : 0.12;
  for (int k = 0; k < std::min<int>(4, static_cast<int>(ord.size())); ++k) {
    Vec u = sphere_nelder_mead(f, grid[ord[k]], step, 400, 1e-14);
    double v = f(u);
    if (better(v, u, best_v, best_u)) best_v = v, best_u = u;
  }
  return cap_through(K0, best_u, x);
}

int cap_type(double vol, double eps, int d) {
  if (!(vol > 0)) throw GeometryError(ErrorCode::GeometryInvalid, "cap type needs positive volume");
  double r = std::log2(vol) - 0.5 * (d + 1) * std::log2(eps);
  // Snap ties produced by rounding at exact dyadic multiples.
  double fr = std::round(r);
  if (std::abs(r - fr) < 1e-12) return static_cast<int>(fr);
  return static_cast<int>(std::floor(r));
}

}  // namespace capcover
