#include "capcover/geom.hpp"
#include "hull_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <unordered_map>

namespace capcover {
namespace detail {

namespace {

double factorial(int d) {
  double f = 1.0;
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

struct RidgeKey {
  std::array<int, kMaxDim> v{};
  bool operator==(const RidgeKey& o) const { return v == o.v; }
};

struct RidgeHash {
  size_t operator()(const RidgeKey& k) const {
    size_t h = 1469598103934665603ull;
    for (int x : k.v) h = (h ^ static_cast<size_t>(x + 1)) * 1099511628211ull;
    return h;
  }
};

double small_det(const Mat& m) {
  switch (m.rows()) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      return m.determinant();
  }
}

}  // namespace

HullCore::HullCore(const Points& pts) : pts_(pts) {
  if (pts_.empty()) throw GeometryError(ErrorCode::DegenerateInput, "no points");
  d_ = static_cast<int>(pts_[0].size());
  Vec lo = pts_[0], hi = pts_[0];
  for (const auto& p : pts_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  scale_ = std::max((hi - lo).norm(), 1e-300);
  run();
}

Vec HullCore::plane_normal(const std::array<int, kMaxDim>& v) const {
  const int d = d_;
  Vec n(d);
  if (d == 1) {
    n[0] = 1.0;
    return n;
  }
  Mat m(d - 1, d);
  for (int i = 1; i < d; ++i) m.row(i - 1) = (pts_[v[i]] - pts_[v[0]]).transpose();
  Mat minor(d - 1, d - 1);
  for (int k = 0; k < d; ++k) {
    for (int c = 0, cc = 0; c < d; ++c) {
      if (c == k) continue;
      minor.col(cc++) = m.col(c);
    }
    double det = small_det(minor);
    n[k] = ((d - 1 + k) % 2 == 0 ? 1.0 : -1.0) * det;
  }
  return n;
}

int HullCore::orient(const Facet& f, int q) const {
  // Float filter against the stored plane, exact fallback otherwise.
  double dist = f.n.dot(pts_[q]) - f.off;
  if (std::abs(dist) > f.filt) return dist > 0 ? 1 : -1;
  std::vector<const double*> rows(d_ + 1);
  for (int i = 0; i < d_; ++i) rows[i] = pts_[f.v[i]].data();
  rows[d_] = pts_[q].data();
  return orientation(rows, d_) * f.flip;
}

void HullCore::set_plane(Facet& f) {
  Vec n = plane_normal(f.v);
  // Sign convention of the cofactor normal matches orientation(v..., q).
  double len = n.norm();
  double had = 1.0;
  for (int i = 1; i < d_; ++i) had *= (pts_[f.v[i]] - pts_[f.v[0]]).norm();
  f.flip = 1;
  f.raw_area = len;
  f.quality = had > 0 ? len / had : 0.0;
  // Rounding in the cofactor normal grows with the Hadamard bound of its rows.
  f.filt = len > 0 ? 1e-11 * scale_ * std::max(1.0, had / len) : 1e300;
  // Degenerate simplices get a zero plane; orient() then always takes the exact path.
  // Scaling by the largest cofactor first keeps subnormal normals finite.
  const double big = n.cwiseAbs().maxCoeff();
  f.n = big > 0 ? Vec(n / big) : Vec(Vec::Zero(d_));
  if (big > 0) f.n /= f.n.norm();
  if (!f.n.allFinite()) f.n = Vec::Zero(d_);
  f.off = f.n.dot(pts_[f.v[0]]);
  std::vector<const double*> rows(d_ + 1);
  for (int i = 0; i < d_; ++i) rows[i] = pts_[f.v[i]].data();
  rows[d_] = interior_.data();
  double dist = f.n.dot(interior_) - f.off;
  int s = std::abs(dist) > f.filt ? (dist > 0 ? 1 : -1) : orientation(rows, d_);
  if (s > 0) {
    std::swap(f.v[0], f.v[1]);
    std::swap(f.nb[0], f.nb[1]);
    f.n = -f.n;
    f.off = -f.off;
  }
}

void HullCore::initial_simplex(std::vector<int>& simplex) {
  const int n = static_cast<int>(pts_.size());
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (pts_[i][0] < pts_[i0][0]) i0 = i;
  simplex.push_back(i0);
  std::vector<Vec> basis;
  for (int k = 1; k <= d_; ++k) {
    int best = -1;
    double bd = -1.0;
    for (int i = 0; i < n; ++i) {
      Vec r = pts_[i] - pts_[i0];
      for (const auto& b : basis) r -= r.dot(b) * b;
      double dist = r.norm();
      if (dist > bd) {
        bd = dist;
        best = i;
      }
    }
    if (!(bd > 1e-13 * scale_)) throw GeometryError(ErrorCode::DegenerateInput, "points are not full-dimensional");
    Vec r = pts_[best] - pts_[i0];
    for (const auto& b : basis) r -= r.dot(b) * b;
    basis.push_back(r / r.norm());
    simplex.push_back(best);
  }
  std::vector<const double*> rows;
  for (int i : simplex) rows.push_back(pts_[i].data());
  if (orientation(rows, d_) == 0) throw GeometryError(ErrorCode::DegenerateInput, "points are not full-dimensional");
}

void HullCore::run() {
  const int d = d_;
  const int n = static_cast<int>(pts_.size());
  if (n < d + 1) throw GeometryError(ErrorCode::DegenerateInput, "fewer than d+1 points");
  std::vector<int> simplex;
  initial_simplex(simplex);
  interior_ = Vec::Zero(d);
  for (int i : simplex) interior_ += pts_[i];
  interior_ /= (d + 1);

  // Facet i of the simplex omits simplex vertex i; its neighbour across the ridge
  // without vertex k is the facet omitting that vertex.
  for (int i = 0; i <= d; ++i) {
    Facet f;
    int pos = 0;
    std::array<int, kMaxDim> omit{};
    for (int j = 0; j <= d; ++j)
      if (j != i) {
        f.v[pos] = simplex[j];
        omit[pos] = j;
        ++pos;
      }
    for (int k = 0; k < d; ++k) f.nb[k] = omit[k];
    set_plane(f);
    facets_.push_back(std::move(f));
  }

  std::vector<char> in_simplex(n, 0);
  for (int i : simplex) in_simplex[i] = 1;
  for (int q = 0; q < n; ++q) {
    if (in_simplex[q]) continue;
    for (int fi = 0; fi <= d; ++fi)
      if (orient(facets_[fi], q) > 0) {
        facets_[fi].outside.push_back(q);
        break;
      }
  }

  std::vector<int> stamp;
  std::vector<char> vis;
  int round = 0;
  std::unordered_map<RidgeKey, std::pair<int, int>, RidgeHash> ridges;
  for (size_t fi = 0; fi < facets_.size(); ++fi) {
    if (!facets_[fi].alive || facets_[fi].outside.empty()) continue;
    ++round;
    // Apex: furthest outside point.
    // Sliver planes can put an exactly-outside point at negative float distance.
    int apex = facets_[fi].outside.front();
    double best = -INFINITY;
    for (int q : facets_[fi].outside) {
      double dist = facets_[fi].n.dot(pts_[q]) - facets_[fi].off;
      if (dist > best) {
        best = dist;
        apex = q;
      }
    }
    if (stamp.size() < facets_.size()) {
      stamp.resize(facets_.size() * 2, 0);
      vis.resize(facets_.size() * 2, 0);
    }
    std::vector<int> visible{static_cast<int>(fi)};
    stamp[fi] = round;
    vis[fi] = 1;
    std::vector<std::pair<int, int>> horizon;
    for (size_t k = 0; k < visible.size(); ++k) {
      int g = visible[k];
      for (int r = 0; r < d; ++r) {
        int nb = facets_[g].nb[r];
        if (stamp[nb] != round) {
          stamp[nb] = round;
          vis[nb] = orient(facets_[nb], apex) > 0 ? 1 : 0;
          if (vis[nb]) visible.push_back(nb);
        }
        if (!vis[nb]) horizon.emplace_back(g, r);
      }
    }
    std::vector<int> created;
    ridges.clear();
    for (auto [g, r] : horizon) {
      Facet h;
      h.v = facets_[g].v;
      h.v[r] = apex;
      int outer = facets_[g].nb[r];
      for (int k = 0; k < d; ++k) h.nb[k] = -1;
      h.nb[r] = outer;
      set_plane(h);
      int hid = static_cast<int>(facets_.size());
      for (int k = 0; k < d; ++k)
        if (facets_[outer].nb[k] == g) facets_[outer].nb[k] = hid;
      facets_.push_back(std::move(h));
      created.push_back(hid);
    }
    for (int hid : created) {
      Facet& h = facets_[hid];
      for (int k = 0; k < d; ++k) {
        if (h.v[k] == apex) continue;
        RidgeKey key;
        key.v.fill(-1);
        int pos = 0;
        for (int m = 0; m < d; ++m)
          if (m != k) key.v[pos++] = h.v[m];
        std::sort(key.v.begin(), key.v.begin() + pos);
        auto it = ridges.find(key);
        if (it == ridges.end()) {
          ridges.emplace(key, std::make_pair(hid, k));
        } else {
          auto [other, ok] = it->second;
          h.nb[k] = other;
          facets_[other].nb[ok] = hid;
          ridges.erase(it);
        }
      }
    }
    for (int g : visible) {
      Facet& f = facets_[g];
      f.alive = false;
      for (int q : f.outside) {
        if (q == apex) continue;
        for (int hid : created)
          if (orient(facets_[hid], q) > 0) {
            facets_[hid].outside.push_back(q);
            break;
          }
      }
      std::vector<int>().swap(f.outside);
    }
  }
}

long HullCore::count_violations() const {
  long bad = 0;
  for (const auto& f : facets_) {
    if (!f.alive) continue;
    for (int q = 0; q < static_cast<int>(pts_.size()); ++q)
      if (orient(f, q) > 0) ++bad;
  }
  return bad;
}

std::pair<double, Vec> HullCore::volume_centroid() const {
  double vol = 0.0;
  Vec c = Vec::Zero(d_);
  const double fact = factorial(d_);
  Mat m(d_, d_);
  for (const auto& f : facets_) {
    if (!f.alive) continue;
    Vec s = interior_;
    for (int i = 0; i < d_; ++i) {
      m.row(i) = (pts_[f.v[i]] - interior_).transpose();
      s += pts_[f.v[i]];
    }
    double v = std::abs(small_det(m)) / fact;
    vol += v;
    c += v * s / (d_ + 1);
  }
  return {vol, c / vol};
}

Polytope HullCore::to_polytope(std::vector<int>* src) const {
  const int d = d_;
  std::vector<int> alive;
  std::unordered_map<int, int> slot;
  for (int i = 0; i < static_cast<int>(facets_.size()); ++i)
    if (facets_[i].alive) {
      slot[i] = static_cast<int>(alive.size());
      alive.push_back(i);
    }
  const double tol = 1e-9 * scale_;
  // Group coplanar simplices against the seed plane.
  std::vector<int> group(alive.size(), -1);
  std::vector<std::vector<int>> members;
  // Well-shaped simplices seed first; slivers only join a group whose plane holds them.
  std::vector<int> seeds(alive.size());
  for (size_t s = 0; s < alive.size(); ++s) seeds[s] = static_cast<int>(s);
  std::stable_sort(seeds.begin(), seeds.end(),
                   [&](int a, int b) { return facets_[alive[a]].quality > facets_[alive[b]].quality; });
  constexpr double kSliver = 1e-7;
  for (int s : seeds) {
    if (group[s] >= 0) continue;
    int gid = static_cast<int>(members.size());
    members.emplace_back();
    const Facet& seed = facets_[alive[s]];
    std::vector<int> stack{s};
    group[s] = gid;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      members[gid].push_back(a);
      const Facet& fa = facets_[alive[a]];
      for (int k = 0; k < d; ++k) {
        int b = slot.at(fa.nb[k]);
        if (group[b] >= 0) continue;
        const Facet& fb = facets_[alive[b]];
        if (fb.quality > kSliver && fb.n.dot(seed.n) <= 0) continue;
        bool coplanar = true;
        for (int m = 0; m < d && coplanar; ++m)
          if (std::abs(seed.n.dot(pts_[fb.v[m]]) - seed.off) > tol) coplanar = false;
        if (!coplanar) continue;
        group[b] = gid;
        stack.push_back(b);
      }
    }
  }
  const int ng = static_cast<int>(members.size());
  std::vector<Vec> gn(ng);
  std::vector<std::vector<int>> gverts(ng);
  std::vector<double> goff(ng);
  std::vector<char> real(ng, 0);
  for (int g = 0; g < ng; ++g)
    for (int a : members[g])
      if (facets_[alive[a]].quality > kSliver) real[g] = 1;
  for (int g = 0; g < ng; ++g) {
    Vec n = Vec::Zero(d);
    for (int a : members[g])
      if (facets_[alive[a]].raw_area > 0) n += facets_[alive[a]].raw_area * facets_[alive[a]].n;
    gn[g] = n / n.norm();
    for (int a : members[g])
      for (int m = 0; m < d; ++m) gverts[g].push_back(facets_[alive[a]].v[m]);
    std::sort(gverts[g].begin(), gverts[g].end());
    gverts[g].erase(std::unique(gverts[g].begin(), gverts[g].end()), gverts[g].end());
    double off = -1e300;
    for (int v : gverts[g]) off = std::max(off, gn[g].dot(pts_[v]));
    goff[g] = off;
  }
  // A hull point is a vertex when its incident facet normals span R^d.
  std::map<int, std::vector<int>> incident;
  for (int g = 0; g < ng; ++g)
    if (real[g])
      for (int v : gverts[g]) incident[v].push_back(g);
  std::unordered_map<int, int> vid;
  Points verts;
  for (auto& [v, gs] : incident) {
    if (static_cast<int>(gs.size()) < d) continue;
    // Rank test by Gram-Schmidt on the unit facet normals.
    Points basis;
    for (int g : gs) {
      Vec r = gn[g];
      for (const Vec& b : basis) r -= r.dot(b) * b;
      double len = r.norm();
      if (len > 1e-9) basis.push_back(r / len);
      if (static_cast<int>(basis.size()) == d) break;
    }
    if (static_cast<int>(basis.size()) == d) {
      vid[v] = static_cast<int>(verts.size());
      verts.push_back(pts_[v]);
      if (src) src->push_back(v);
    }
  }
  std::vector<Halfspace> hs;
  std::vector<std::vector<int>> inc;
  for (int g = 0; g < ng; ++g) {
    if (!real[g]) continue;
    std::vector<int> fv;
    for (int v : gverts[g]) {
      auto it = vid.find(v);
      if (it != vid.end()) fv.push_back(it->second);
    }
    std::sort(fv.begin(), fv.end());
    Halfspace h;
    h.normal = gn[g];
    h.offset = goff[g];
    hs.push_back(h);
    inc.push_back(std::move(fv));
  }
  Polytope P(d, verts, hs, inc);
  auto [vol, c] = volume_centroid();
  P.set_volume_centroid(vol, c);
  return P;
}

}  // namespace detail

namespace {

Polytope hull_1d(const Points& pts) {
  double lo = pts[0][0], hi = pts[0][0];
  for (const auto& p : pts) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  if (!(hi > lo)) throw GeometryError(ErrorCode::DegenerateInput, "1-d points coincide");
  Vec a(1), b(1), n(1);
  a[0] = lo;
  b[0] = hi;
  n[0] = 1.0;
  Polytope P(1, {a, b}, {Halfspace(n, hi), Halfspace(-n, -lo)}, {{1}, {0}});
  Vec c(1);
  c[0] = 0.5 * (lo + hi);
  P.set_volume_centroid(hi - lo, c);
  return P;
}

}  // namespace

Polytope convex_hull(const Points& pts) {
  if (pts.empty()) throw GeometryError(ErrorCode::DegenerateInput, "no points");
  const int d = static_cast<int>(pts[0].size());
  if (d < 1 || d > 5) throw GeometryError(ErrorCode::DimensionUnsupported, "hull dimension");
  if (d == 1) return hull_1d(pts);
  detail::HullCore core(pts);
  return core.to_polytope();
}

std::pair<double, Vec> hull_volume_centroid(const Points& pts) {
  const int d = static_cast<int>(pts[0].size());
  if (d == 1) {
    Polytope P = hull_1d(pts);
    return {P.volume(), P.centroid()};
  }
  detail::HullCore core(pts);
  return core.volume_centroid();
}

}  // namespace capcover
