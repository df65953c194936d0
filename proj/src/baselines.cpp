#include "capcover/construction.hpp"
#include "capcover/metrics.hpp"
#include "capcover/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace capcover {

namespace {

double min_singular(const AffineMap& T) {
  Eigen::JacobiSVD<Mat> svd(T.linear());
  return svd.singularValues().minCoeff();
}

// Number of quasi-uniform directions with spacing about `step` on S^{d-1}.
int net_size(int d, double step) {
  double area = 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
  return static_cast<int>(std::ceil(area / std::pow(step, d - 1)));
}

}  // namespace

// Outer approximation: tangent halfspaces at the nearest points of K to a net on a larger sphere.
Polytope dudley(const BodyPtr& K, double eps) {
  const int d = K->dim();
  CanonicalForm cf = to_canonical(K);
  double ec = eps * min_singular(cf.map);
  BodyPtr Kh = realize(cf.body, ec);
  AffineMap back = cf.map.inverse();
  double R = 0.0;
  for (const Vec& u : sphere_directions(d, 720, 0)) R = std::max(R, Kh->support_value(u));
  R *= 2.0;
  double step = std::sqrt(2.0 * ec);
  for (int round = 0; round < 30; ++round, step *= 0.85) {
    Points net = sphere_directions(d, net_size(d, step), 0);
    std::vector<Vec> normals(net.size());
    parallel_for(net.size(), [&](size_t i) {
      Vec p = R * net[i];
      // Outward normal at the nearest point: argmax_u <u,p> - h(u).
      normals[i] = sphere_nelder_mead([&](const Vec& u) { return Kh->support_value(u) - u.dot(p); }, net[i], 0.1, 300, 1e-15);
    });
    std::vector<Halfspace> hs;
    for (const Vec& u : normals) {
      bool dup = false;
      for (size_t k = hs.size(); k-- > 0 && hs.size() - k < 8;)
        if ((hs[k].normal - u).norm() < 1e-9) dup = true;
      if (!dup) hs.emplace_back(u, Kh->support_value(u));
    }
    Polytope P = apply_map(back, halfspace_intersection(hs, Vec::Zero(d)));
    if (hausdorff_outer(P, *K) <= eps) return P;
  }
  throw GeometryError(ErrorCode::NotConverged, "dudley approximation did not reach eps");
}

// Inner approximation: hull of a greedy net on the boundary with spacing about sqrt(eps).
Polytope bronshteyn_ivanov(const BodyPtr& K, double eps) {
  const int d = K->dim();
  CanonicalForm cf = to_canonical(K);
  double ec = eps * min_singular(cf.map);
  BodyPtr Kh = realize(cf.body, ec);
  AffineMap back = cf.map.inverse();
  double delta = std::sqrt(2.0 * ec);
  for (int round = 0; round < 30; ++round, delta *= 0.85) {
    Points dirs = sphere_directions(d, net_size(d, delta / 6.0), 0);
    Points dense(dirs.size());
    parallel_for(dirs.size(), [&](size_t i) { dense[i] = Kh->boundary_ray(Vec::Zero(d), dirs[i]); });
    std::map<std::vector<int64_t>, std::vector<int>> grid;
    Points net;
    auto cell_of = [&](const Vec& y) {
      std::vector<int64_t> c(static_cast<size_t>(d));
      for (int i = 0; i < d; ++i) c[static_cast<size_t>(i)] = static_cast<int64_t>(std::floor(y[i] / delta));
      return c;
    };
    for (const Vec& y : dense) {
      std::vector<int64_t> c = cell_of(y), cur(c);
      bool near = false;
      std::vector<int> off(static_cast<size_t>(d), -1);
      for (;;) {
        for (int i = 0; i < d; ++i) cur[static_cast<size_t>(i)] = c[static_cast<size_t>(i)] + off[static_cast<size_t>(i)];
        auto it = grid.find(cur);
        if (it != grid.end())
          for (int k : it->second)
            if ((net[static_cast<size_t>(k)] - y).norm() < delta) near = true;
        int i = 0;
        while (i < d && ++off[static_cast<size_t>(i)] > 1) off[static_cast<size_t>(i++)] = -1;
        if (i == d || near) break;
      }
      if (near) continue;
      grid[c].push_back(static_cast<int>(net.size()));
      net.push_back(y);
    }
    Points S;
    for (const Vec& y : net) S.push_back(back.apply(y));
    Polytope P = convex_hull(S);
    try {
      if (hausdorff_inner(P, *K) <= eps) return P;
    } catch (const GeometryError&) {
    }
  }
  throw GeometryError(ErrorCode::NotConverged, "net approximation did not reach eps");
}

}  // namespace capcover
