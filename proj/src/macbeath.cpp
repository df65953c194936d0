#include "capcover/caps.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace capcover {

namespace {

int lens_points(int d) { return d == 2 ? 32 : (d == 3 ? 64 : 32 * d - 32); }

const Points& lens_directions(int d) {
  static thread_local std::vector<Points> cache(kMaxDim + 1);
  Points& base = cache[d];
  if (base.empty()) {
    if (d == 2) {
      // Half circle plus its negation: the two sets interleave instead of repeating.
      const int n = lens_points(2) / 2;
      for (int i = 0; i < n; ++i) {
        double a = M_PI * (i + 0.5) / n;
        Vec v = (Vec(2) << std::cos(a), std::sin(a)).finished();
        base.push_back(v);
        base.push_back(-v);
      }
    } else {
      // No antipodal pairs: symmetric pairs of pairs are coplanar and stall the hull.
      base = sphere_directions(d, lens_points(d), 1);
    }
  }
  return base;
}

// Lens B ∩ (2 r e_0 - B) of the unit ball, points spread evenly in the lens' own frame.
const Polytope& standard_lens(int d, double r) {
  static thread_local std::map<std::pair<int, double>, Polytope> cache;
  auto it = cache.find({d, r});
  if (it != cache.end()) return it->second;
  if (cache.size() > 256) cache.clear();
  double tau = 1.0 - r, rho = std::sqrt(std::max(0.0, 1.0 - r * r));
  Points pts;
  for (const Vec& w : lens_directions(d)) {
    Vec v = w;
    v[0] *= tau;
    for (int k = 1; k < d; ++k) v[k] *= rho;
    v.normalize();
    double zv = r * v[0];
    double t = std::sqrt(zv * zv + 1.0 - r * r) - std::abs(zv);
    Vec p = t * v;
    p[0] += r;
    pts.push_back(p);
  }
  return cache.emplace(std::make_pair(d, r), convex_hull(pts)).first->second;
}

// Inner polytope of E ∩ (2x - E): the standard lens carried by the frame [a, B] and E's map.
Polytope lens_polytope(const Ellipsoid& e, const Vec& x) {
  const int d = e.dim();
  Vec z = e.Linv * (x - e.center);
  double r = z.norm();
  Vec a = r > 1e-14 ? Vec(z / r) : unit(d, 0);
  Mat B = complement_basis(a);
  Mat Q(d, d);
  Q.col(0) = a;
  for (int k = 1; k < d; ++k) Q.col(k) = B.row(k - 1).transpose();
  return apply_map(AffineMap(e.L * Q, e.center), standard_lens(d, r));
}

double min_along(const Polytope& P, const Vec& n) {
  double m = INFINITY;
  for (int i = 0; i < P.num_vertices(); ++i) m = std::min(m, n.dot(P.vertex(i)));
  return m;
}

// Sufficient test for interior-disjointness: the center axis and the facet normals of
// either region most aligned with it.
bool separated_cheaply(const Polytope& A, const Polytope& B, const Vec& axis) {
  if (A.support(axis) <= min_along(B, axis)) return true;
  auto best_facets = [](const Polytope& P, const Vec& n, int k) {
    std::vector<std::pair<double, int>> s;
    for (int f = 0; f < P.num_facets(); ++f) s.emplace_back(-P.facet_normal(f).dot(n), f);
    k = std::min<int>(k, static_cast<int>(s.size()));
    std::partial_sort(s.begin(), s.begin() + k, s.end());
    s.resize(static_cast<size_t>(k));
    return s;
  };
  for (auto [score, f] : best_facets(A, axis, 3)) {
    Vec n = A.facet_normal(f);
    if (A.facet_offset(f) <= min_along(B, n)) return true;
  }
  for (auto [score, f] : best_facets(B, -axis, 3)) {
    Vec n = B.facet_normal(f);
    if (B.facet_offset(f) <= min_along(A, n)) return true;
  }
  return false;
}

}  // namespace

MacbeathRegion macbeath(const BodyPtr& K0, const Vec& x, double lambda) {
  const int d = K0->dim();
  if (!(lambda > 0 && lambda <= 1)) throw GeometryError(ErrorCode::GeometryInvalid, "macbeath scale must lie in (0,1]");
  if (!K0->contains(x, 0.0)) throw GeometryError(ErrorCode::OutsideBody, "macbeath center outside body");
  BodyPtr K = realize(K0, 0.01);
  MacbeathRegion M;
  M.center = x;
  M.scale = lambda;
  M.depth = K->delta_unchecked(x);
  if (M.depth < 1e-9) throw GeometryError(ErrorCode::BoundaryPoint, "macbeath center on the boundary");
  Polytope full;
  double vol1;
  if (const Ellipsoid* e = K->ellipsoid()) {
    full = lens_polytope(*e, x);
    double r = (e->Linv * (x - e->center)).norm();
    vol1 = 2.0 * ball_cap_volume(d, r) * std::abs(e->L.determinant());
  } else {
    const Polytope& P = *K->polytope();
    std::vector<Halfspace> hs;
    hs.reserve(2 * P.num_facets());
    for (int f = 0; f < P.num_facets(); ++f) {
      Vec a = P.facet_normal(f);
      double b = P.facet_offset(f);
      hs.emplace_back(a, b);
      hs.emplace_back(-a, b - 2.0 * a.dot(x));
    }
    full = halfspace_intersection(hs, x);
    vol1 = full.volume();
  }
  M.region = lambda == 1.0 ? full : scale_about(full, x, lambda);
  M.volume = std::pow(lambda, d) * vol1;
  double rad = 0.0;
  for (int i = 0; i < M.region.num_vertices(); ++i) rad = std::max(rad, (Vec(M.region.vertex(i)) - x).norm());
  M.radius = rad;
  return M;
}

bool in_macbeath(const Body& K, const Vec& x, double lambda, const Vec& y, double tol) {
  Vec yp = x + (y - x) / lambda;
  return K.contains(yp, tol) && K.contains(2.0 * x - yp, tol);
}

// ---------------------------------------------------------------- DisjointIndex

DisjointIndex::DisjointIndex(int d, double cell) : d_(d), cell_(cell) {
  if (!(cell > 0)) throw GeometryError(ErrorCode::GeometryInvalid, "index cell size must be positive");
}

uint64_t DisjointIndex::key(const Vec& c, double cell) const {
  uint64_t h = 1469598103934665603ULL;
  for (int i = 0; i < d_; ++i) {
    auto q = static_cast<int64_t>(std::floor(c[i] / cell));
    h ^= static_cast<uint64_t>(q) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

template <class F>
bool DisjointIndex::any_near(const Vec& c, double radius, F f) const {
  for (const auto& [lv, L] : levels_) {
    // Stored radii are at most L.cell; centers within radius + cell can clash.
    double reach_f = std::ceil((radius + L.cell) / L.cell);
    double cells = std::pow(2.0 * reach_f + 1.0, d_);
    if (cells >= static_cast<double>(L.items.size())) {
      for (int idx : L.items)
        if (f(items_[idx])) return true;
      continue;
    }
    int reach = static_cast<int>(reach_f);
    std::vector<int> off(d_, -reach);
    std::vector<int64_t> base(d_);
    for (int i = 0; i < d_; ++i) base[i] = static_cast<int64_t>(std::floor(c[i] / L.cell));
    Vec probe(d_);
    for (;;) {
      for (int i = 0; i < d_; ++i) probe[i] = (static_cast<double>(base[i] + off[i]) + 0.5) * L.cell;
      auto itc = L.grid.find(key(probe, L.cell));
      if (itc != L.grid.end())
        for (int idx : itc->second)
          if (f(items_[idx])) return true;
      int k = 0;
      while (k < d_ && ++off[k] > reach) off[k++] = -reach;
      if (k == d_) break;
    }
  }
  return false;
}

bool DisjointIndex::is_free(const Polytope& R, const Vec& c, double radius) const {
  return !any_near(c, radius, [&](const Item& it) {
    double dist = (it.c - c).norm();
    if (dist >= radius + it.r) return false;
    // A center strictly inside the other region already settles it.
    if (it.R->violation(c) < -1e-9 * it.r || R.violation(it.c) < -1e-9 * radius) return true;
    if (separated_cheaply(R, *it.R, it.c - c)) return false;
    ++lp_calls_;
    return !interior_disjoint(R, c, *it.R, it.c);
  });
}

bool DisjointIndex::covers_point(const Vec& x) const {
  return any_near(x, 0.0, [&](const Item& it) {
    if ((it.c - x).norm() > it.r) return false;
    return it.R->violation(x) <= 0.0;
  });
}

void DisjointIndex::add(std::shared_ptr<const Polytope> R, const Vec& c, double radius) {
  int idx = static_cast<int>(items_.size());
  items_.push_back({std::move(R), c, radius});
  int lv = static_cast<int>(std::ceil(std::log2(std::max(radius, 1e-300) / cell_)));
  lv = std::max(lv, -60);
  auto it = levels_.find(lv);
  if (it == levels_.end()) it = levels_.emplace(lv, Level{std::ldexp(cell_, lv), {}, {}}).first;
  it->second.items.push_back(idx);
  it->second.grid[key(c, it->second.cell)].push_back(idx);
}

}  // namespace capcover
