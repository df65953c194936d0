#include "capcover/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace capcover {

// ---------------------------------------------------------------- Ellipsoid

Ellipsoid Ellipsoid::from_shape(const Vec& c, const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw GeometryError(ErrorCode::GeometryInvalid, "ellipsoid shape matrix not positive definite");
  Vec isq = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return from_map(c, es.eigenvectors() * isq.asDiagonal() * es.eigenvectors().transpose());
}

Ellipsoid Ellipsoid::from_map(const Vec& c, const Mat& L) {
  Ellipsoid e;
  e.center = c;
  e.L = L;
  if (!(std::abs(L.determinant()) > 1e-300)) throw GeometryError(ErrorCode::GeometryInvalid, "degenerate ellipsoid");
  e.Linv = L.inverse();
  e.shape = e.Linv.transpose() * e.Linv;
  return e;
}

bool Ellipsoid::contains(const Vec& x, double tol) const { return (Linv * (x - center)).squaredNorm() <= 1.0 + tol; }

SupportResult Ellipsoid::support(const Vec& u) const {
  Vec w = L.transpose() * u;
  double n = w.norm();
  SupportResult r;
  r.value = u.dot(center) + n;
  r.point = n > 0 ? Vec(center + L * w / n) : center;
  return r;
}

Ellipsoid Ellipsoid::transformed(const AffineMap& T) const { return from_map(T.apply(center), T.linear() * L); }

double Ellipsoid::volume() const { return unit_ball_volume(dim()) * std::abs(L.determinant()); }

Vec Ellipsoid::semi_axes() const {
  Eigen::JacobiSVD<Mat> svd(L);
  Vec s = svd.singularValues();
  std::sort(s.data(), s.data() + s.size());
  return s;
}

// ---------------------------------------------------------------- Body defaults

Vec Body::bisect_boundary(const Vec& x0, const Vec& u) const {
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 200 && contains(x0 + hi * u, 0.0); ++k) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 80; ++it) {
    if (hi - lo <= 1e-12 * (1.0 + hi)) break;
    double mid = 0.5 * (lo + hi);
    if (contains(x0 + mid * u, 0.0)) lo = mid;
    else hi = mid;
  }
  return x0 + lo * u;
}

Vec Body::boundary_ray(const Vec& x0, const Vec& u) const { return bisect_boundary(x0, u); }

double Body::generic_delta(const Vec& x) const {
  const int d = dim();
  const int n = d == 2 ? 360 : (d == 3 ? 1000 : 2000);
  Points dirs = sphere_directions(d, n, 7);
  auto f = [&](const Vec& u) { return support_value(u) - u.dot(x); };
  std::vector<std::pair<double, int>> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = {f(dirs[i]), i};
  std::partial_sort(vals.begin(), vals.begin() + 3, vals.end());
  double best = vals[0].first;
  for (int k = 0; k < 3; ++k) {
    Vec u = sphere_nelder_mead(f, dirs[vals[k].second], 0.05, 600, 1e-15);
    best = std::min(best, f(u));
  }
  return std::max(0.0, best);
}

double Body::delta_unchecked(const Vec& x) const { return generic_delta(x); }

double Body::gauge(const Vec& y) const {
  double n = y.norm();
  if (n == 0.0) return 0.0;
  Vec p = boundary_ray(Vec::Zero(dim()), y / n);
  return n / p.norm();
}

// ---------------------------------------------------------------- EllipsoidBody

EllipsoidBody::EllipsoidBody(const Ellipsoid& e, std::string kind) : e_(e), kind_(std::move(kind)) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (e_.shape + e_.shape.transpose()));
  Q_ = es.eigenvectors();
  axes_ = es.eigenvalues().cwiseSqrt().cwiseInverse();
}

Vec EllipsoidBody::boundary_ray(const Vec& x0, const Vec& u) const {
  Vec a = e_.Linv * u, b = e_.Linv * (x0 - e_.center);
  double A = a.squaredNorm(), B = a.dot(b), C = b.squaredNorm() - 1.0;
  double disc = std::max(0.0, B * B - A * C);
  // Larger root of A t^2 + 2B t + C = 0, written to avoid cancellation.
  double t = B <= 0 ? (-B + std::sqrt(disc)) / A : -C / (B + std::sqrt(disc));
  return x0 + t * u;
}

double EllipsoidBody::delta_unchecked(const Vec& x) const {
  const int d = dim();
  Vec y = Q_.transpose() * (x - e_.center);
  Vec e = axes_;
  for (int i = 0; i < d; ++i) y[i] = std::abs(y[i]);
  double emin = e.minCoeff(), emax = e.maxCoeff();
  const double tie = 1e-12 * emax;
  // Closest boundary point z_i = e_i^2 y_i / (t + e_i^2) with sum (z_i/e_i)^2 = 1, t in (-emin^2, 0].
  auto F = [&](double t) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      double q = e[i] * y[i] / (t + e[i] * e[i]);
      s += q * q;
    }
    return s;
  };
  bool degenerate = true;
  for (int i = 0; i < d; ++i)
    if (e[i] - emin <= tie && y[i] > 1e-14 * emax) degenerate = false;
  Vec z(d);
  if (degenerate) {
    double flim = 0.0;
    for (int i = 0; i < d; ++i) {
      if (e[i] - emin <= tie) continue;
      double q = e[i] * y[i] / (e[i] * e[i] - emin * emin);
      flim += q * q;
    }
    if (flim <= 1.0) {
      // Closest point sits above the minor axis.
      double rest = 0.0;
      int k = -1;
      for (int i = 0; i < d; ++i) {
        if (e[i] - emin <= tie) {
          z[i] = 0.0;
          if (k < 0) k = i;
        } else {
          z[i] = e[i] * e[i] * y[i] / (e[i] * e[i] - emin * emin);
          rest += (z[i] / e[i]) * (z[i] / e[i]);
        }
      }
      z[k] = e[k] * std::sqrt(std::max(0.0, 1.0 - rest));
      return (z - y).norm();
    }
  }
  double lo = -emin * emin, hi = 0.0;
  if (F(hi) >= 1.0) return 0.0;
  for (int it = 0; it < 300; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (F(mid) > 1.0) lo = mid;
    else hi = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < d; ++i) z[i] = e[i] * e[i] * y[i] / (t + e[i] * e[i]);
  return (z - y).norm();
}

// ---------------------------------------------------------------- PolytopeBody

PolytopeBody::PolytopeBody(Polytope P, std::string kind) : P_(std::move(P)), kind_(std::move(kind)) {}

bool PolytopeBody::contains(const Vec& x, double tol) const { return P_.violation(x) <= tol; }

SupportResult PolytopeBody::support(const Vec& u) const {
  int arg = 0;
  SupportResult r;
  r.value = P_.support(u, &arg);
  r.point = P_.vertex(arg);
  return r;
}

Vec PolytopeBody::boundary_ray(const Vec& x0, const Vec& u) const {
  double t = std::numeric_limits<double>::infinity();
  for (int f = 0; f < P_.num_facets(); ++f) {
    double au = P_.facet_normal(f).dot(u);
    if (au <= 0) continue;
    t = std::min(t, (P_.facet_offset(f) - P_.facet_normal(f).dot(x0)) / au);
  }
  return x0 + std::max(0.0, t) * u;
}

double PolytopeBody::delta_unchecked(const Vec& x) const { return std::max(0.0, -P_.violation(x)); }

double PolytopeBody::gauge(const Vec& y) const {
  double g = 0.0;
  for (int f = 0; f < P_.num_facets(); ++f) g = std::max(g, P_.facet_normal(f).dot(y) / P_.facet_offset(f));
  return g;
}

// ---------------------------------------------------------------- LpBody

LpBody::LpBody(int d, double p, double radius) : d_(d), p_(p), r_(radius) {
  check_dim(d);
  if (!(p >= 1.0)) throw GeometryError(ErrorCode::ConfigError, "lp ball needs p >= 1");
  if (!(radius > 0)) throw GeometryError(ErrorCode::ConfigError, "lp ball needs positive radius");
}

double LpBody::norm(const Vec& x) const {
  if (std::isinf(p_)) return x.cwiseAbs().maxCoeff();
  if (p_ == 1.0) return x.cwiseAbs().sum();
  double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < d_; ++i) s += std::pow(std::abs(x[i]) / m, p_);
  return m * std::pow(s, 1.0 / p_);
}

bool LpBody::contains(const Vec& x, double tol) const { return norm(x) <= r_ * (1.0 + tol); }

SupportResult LpBody::support(const Vec& u) const {
  SupportResult r;
  r.point = Vec::Zero(d_);
  if (std::isinf(p_)) {
    for (int i = 0; i < d_; ++i) r.point[i] = u[i] >= 0 ? r_ : -r_;
  } else if (p_ == 1.0) {
    int k = 0;
    u.cwiseAbs().maxCoeff(&k);
    r.point[k] = u[k] >= 0 ? r_ : -r_;
  } else {
    double q = p_ / (p_ - 1.0);
    double m = u.cwiseAbs().maxCoeff();
    if (m > 0) {
      Vec w(d_);
      double s = 0.0;
      for (int i = 0; i < d_; ++i) {
        w[i] = std::pow(std::abs(u[i]) / m, q - 1.0);
        s += std::pow(std::abs(u[i]) / m, q);
      }
      double qn = std::pow(s, 1.0 / q);  // |u/m|_q
      for (int i = 0; i < d_; ++i) r.point[i] = r_ * (u[i] >= 0 ? 1.0 : -1.0) * w[i] / std::pow(qn, q - 1.0);
    }
  }
  r.value = u.dot(r.point);
  return r;
}

// ---------------------------------------------------------------- TransformedBody

TransformedBody::TransformedBody(AffineMap T, BodyPtr base) : T_(std::move(T)), base_(std::move(base)) {
  if (T_.dim() != base_->dim()) throw GeometryError(ErrorCode::GeometryInvalid, "map/body dimension mismatch");
}

bool TransformedBody::contains(const Vec& x, double tol) const { return base_->contains(T_.apply_inverse(x), tol); }

SupportResult TransformedBody::support(const Vec& u) const {
  SupportResult b = base_->support(T_.linear().transpose() * u);
  SupportResult r;
  r.point = T_.apply(b.point);
  r.value = u.dot(r.point);
  return r;
}

Vec TransformedBody::boundary_ray(const Vec& x0, const Vec& u) const {
  Vec v = T_.linear_inverse() * u;
  double nv = v.norm();
  Vec p = base_->boundary_ray(T_.apply_inverse(x0), v / nv);
  return T_.apply(p);
}

// ---------------------------------------------------------------- factories

BodyPtr make_ball(int d, double radius, const Vec* center) {
  check_dim(d);
  if (!(radius > 0)) throw GeometryError(ErrorCode::ConfigError, "ball radius must be positive");
  Vec c = center ? *center : Vec(Vec::Zero(d));
  return std::make_shared<EllipsoidBody>(Ellipsoid::from_map(c, radius * Mat::Identity(d, d)), "ball");
}

BodyPtr make_ellipsoid(const Vec& center, const Vec& semi_axes) {
  const int d = static_cast<int>(center.size());
  check_dim(d);
  if (semi_axes.size() != d || semi_axes.minCoeff() <= 0)
    throw GeometryError(ErrorCode::ConfigError, "ellipsoid needs d positive semi-axes");
  return std::make_shared<EllipsoidBody>(Ellipsoid::from_map(center, Mat(semi_axes.asDiagonal())), "ellipsoid");
}

BodyPtr make_ellipsoid(const Ellipsoid& e) { return std::make_shared<EllipsoidBody>(e, "ellipsoid"); }

BodyPtr make_box(const Vec& h) {
  const int d = static_cast<int>(h.size());
  check_dim(d);
  if (h.minCoeff() <= 0) throw GeometryError(ErrorCode::ConfigError, "box half-widths must be positive");
  Points V;
  for (int m = 0; m < (1 << d); ++m) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = (m >> i & 1) ? h[i] : -h[i];
    V.push_back(v);
  }
  std::vector<Halfspace> F;
  std::vector<std::vector<int>> inc;
  for (int i = 0; i < d; ++i)
    for (int s = 0; s < 2; ++s) {
      Vec n = Vec::Zero(d);
      n[i] = s ? -1.0 : 1.0;
      F.emplace_back(n, h[i]);
      std::vector<int> vi;
      for (int m = 0; m < (1 << d); ++m)
        if (((m >> i & 1) != 0) == (s == 0)) vi.push_back(m);
      inc.push_back(vi);
    }
  Polytope P(d, V, F, inc);
  double vol = 1.0;
  for (int i = 0; i < d; ++i) vol *= 2.0 * h[i];
  P.set_volume_centroid(vol, Vec::Zero(d));
  return std::make_shared<PolytopeBody>(P, "box");
}

BodyPtr make_lp(int d, double p, double radius) { return std::make_shared<LpBody>(d, p, radius); }

BodyPtr make_polytope_body(const Polytope& P) {
  check_dim(P.dim());
  return std::make_shared<PolytopeBody>(P, "polytope");
}

BodyPtr make_hull_body(const Points& pts) {
  if (pts.empty()) throw GeometryError(ErrorCode::DegenerateInput, "empty point set");
  check_dim(static_cast<int>(pts[0].size()));
  return make_polytope_body(convex_hull(pts));
}

BodyPtr make_random_polytope(int d, int n, uint64_t seed) {
  check_dim(d);
  if (n < d + 1) throw GeometryError(ErrorCode::ConfigError, "random polytope needs at least d+1 vertices");
  std::mt19937_64 rng(seed);
  Points pts;
  for (int i = 0; i < n; ++i) pts.push_back(random_unit(rng, d));
  return make_hull_body(pts);
}

BodyPtr make_transformed(const AffineMap& T, BodyPtr base) { return std::make_shared<TransformedBody>(T, std::move(base)); }

BodyPtr simplify(BodyPtr K) {
  auto* tb = dynamic_cast<const TransformedBody*>(K.get());
  if (!tb) return K;
  BodyPtr base = simplify(tb->base());
  const AffineMap& T = tb->map();
  if (const Ellipsoid* e = base->ellipsoid()) return std::make_shared<EllipsoidBody>(e->transformed(T), "ellipsoid");
  if (const Polytope* P = base->polytope()) return std::make_shared<PolytopeBody>(apply_map(T, *P), "polytope");
  if (auto* inner = dynamic_cast<const TransformedBody*>(base.get()))
    return std::make_shared<TransformedBody>(T.compose(inner->map()), inner->base());
  return std::make_shared<TransformedBody>(T, base);
}

Polytope polytope_proxy(const Body& K, int n_points, uint64_t seed) {
  if (const Polytope* P = K.polytope()) return *P;
  Points dirs = sphere_directions(K.dim(), n_points, seed);
  Points pts;
  pts.reserve(dirs.size());
  for (const Vec& u : dirs) pts.push_back(K.support(u).point);
  return convex_hull(pts);
}

// ---------------------------------------------------------------- distances

double delta(const Body& K, const Vec& x) {
  if (!K.contains(x, 1e-12)) throw GeometryError(ErrorCode::OutsideBody, "delta query outside body");
  return K.delta_unchecked(x);
}

double ray_distance(const Body& K, const Vec& x) {
  double n = x.norm();
  if (n <= 1e-15) throw GeometryError(ErrorCode::OriginQuery, "ray distance undefined at the origin");
  if (!K.contains(x, 1e-12)) throw GeometryError(ErrorCode::OutsideBody, "ray distance query outside body");
  Vec p = K.boundary_ray(Vec::Zero(K.dim()), x / n);
  return (p - x).norm();
}

Vec point_at_depth(const Body& K, const Vec& u, double depth) {
  const int d = K.dim();
  Vec O = Vec::Zero(d);
  double d0 = delta(K, O);
  if (!(depth > 0) || depth >= d0)
    throw GeometryError(ErrorCode::DepthTooLarge, "requested depth not below the depth of the origin");
  Vec un = u.normalized();
  double hi = K.boundary_ray(O, un).norm(), lo = 0.0;
  // delta is concave along the ray, so {delta >= depth} is an initial segment.
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (K.delta_unchecked(mid * un) >= depth) lo = mid;
    else hi = mid;
  }
  return lo * un;
}

}  // namespace capcover
