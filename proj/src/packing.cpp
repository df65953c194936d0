#include "capcover/caps.hpp"
#include "capcover/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace capcover {

int Packing::accepted_count() const {
  int n = 0;
  for (const auto& e : entries) n += e.accepted;
  return n;
}

namespace {

// Does the ray {t v : t >= 0} meet R?
bool ray_hits(const Polytope& R, const Vec& v) {
  double lo = 0.0, hi = INFINITY;
  for (int f = 0; f < R.num_facets(); ++f) {
    double av = R.facet_normal(f).dot(v), b = R.facet_offset(f);
    if (std::abs(av) < 1e-300) {
      if (b < 0) return false;
      continue;
    }
    double t = b / av;
    if (av > 0) hi = std::min(hi, t);
    else lo = std::max(lo, t);
    if (lo > hi) return false;
  }
  return lo <= hi;
}

}  // namespace

Packing boundary_packing(const BodyPtr& K0, double eps, uint64_t seed, int n_dirs, int n_rays) {
  const int d = K0->dim();
  BodyPtr K = realize(K0, eps);
  double inr = K->delta_unchecked(Vec::Zero(d));
  if (!(eps > 0) || eps >= inr / 4.0)
    throw GeometryError(ErrorCode::EpsilonTooLarge, "packing depth must be below a quarter of the inradius");
  Packing pack;
  pack.eps = eps;
  pack.seed = seed;
  pack.n_dirs = n_dirs;
  Points dirs = sphere_directions(d, n_dirs, seed);
  pack.entries.resize(dirs.size());
  const double scale1 = std::pow(20.0, d);
  parallel_for(dirs.size(), [&](std::size_t i) {
    PackingEntry& e = pack.entries[i];
    e.direction = dirs[i];
    e.center = point_at_depth(*K, dirs[i], eps);
    e.depth = K->delta_unchecked(e.center);
    MacbeathRegion full = macbeath(K, e.center, 1.0);
    e.region.center = e.center;
    e.region.scale = 1.0 / 20.0;
    e.region.depth = e.depth;
    e.region.region = scale_about(full.region, e.center, 1.0 / 20.0);
    e.region.volume = full.volume / scale1;
    e.region.radius = full.radius / 20.0;
    e.expanded = scale_about(full.region, e.center, 1.0 / 5.0);
    e.volume = e.region.volume;
    e.cls = cap_type(scale1 * e.volume, eps, d);
  });
  std::vector<double> radii;
  for (const auto& e : pack.entries) radii.push_back(e.region.radius);
  std::nth_element(radii.begin(), radii.begin() + radii.size() / 2, radii.end());
  double cell = std::max(1e-9, 2.0 * radii[radii.size() / 2]);
  DisjointIndex index(d, cell);
  for (auto& e : pack.entries) {
    if (!index.is_free(e.region.region, e.center, e.region.radius)) continue;
    e.accepted = true;
    index.add(e.region.region, e.center, e.region.radius);
  }
  // Coverage of fresh rays by the expanded regions.
  std::mt19937_64 rng(seed ^ 0xC0FFEE1234567ULL);
  std::vector<int> acc;
  for (size_t i = 0; i < pack.entries.size(); ++i)
    if (pack.entries[i].accepted) acc.push_back(static_cast<int>(i));
  int hits = 0;
  for (int k = 0; k < n_rays; ++k) {
    Vec v = random_unit(rng, d);
    for (int i : acc) {
      const PackingEntry& e = pack.entries[i];
      double along = e.center.dot(v);
      double perp2 = e.center.squaredNorm() - along * along;
      double rr = 4.0 * e.region.radius;
      if (along < -rr || perp2 > rr * rr) continue;
      if (ray_hits(e.expanded, v)) {
        ++hits;
        break;
      }
    }
  }
  pack.coverage = n_rays > 0 ? static_cast<double>(hits) / n_rays : 0.0;
  return pack;
}

std::map<int, int> volume_histogram(const Packing& pack, double eps) {
  std::map<int, int> h;
  if (pack.entries.empty()) return h;
  const int d = static_cast<int>(pack.entries[0].center.size());
  const double scale1 = std::pow(20.0, d);
  for (const auto& e : pack.entries)
    if (e.accepted) ++h[cap_type(scale1 * e.volume, eps, d)];
  return h;
}

}  // namespace capcover
