#pragma once
// Independent reference computations for the tests. Nothing here calls the hull,
// face lattice or volume code that it is used to check.

#include "capcover/geom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <functional>
#include <set>

namespace oracle {

using capcover::Mat;
using capcover::Points;
using capcover::Polytope;
using capcover::Vec;

inline Points random_points_in_cube(std::mt19937_64& rng, int d, int n) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Points pts;
  for (int k = 0; k < n; ++k) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = U(rng);
    pts.push_back(v);
  }
  return pts;
}

// Facets of a point set in general position in R^3: triples with all points on one side.
inline int brute_force_facet_count(const Points& pts) {
  const int n = static_cast<int>(pts.size());
  int count = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        Eigen::Vector3d p = pts[a].head<3>(), q = pts[b].head<3>(), r = pts[c].head<3>();
        Eigen::Vector3d nrm = (q - p).cross(r - p);
        int pos = 0, neg = 0;
        for (int k = 0; k < n; ++k) {
          if (k == a || k == b || k == c) continue;
          double s = nrm.dot(pts[k].head<3>() - p);
          pos += s > 1e-12;
          neg += s < -1e-12;
        }
        if (pos == 0 || neg == 0) ++count;
      }
  return count;
}

inline int affine_rank(const Points& pts) {
  if (pts.size() < 2) return 0;
  const int d = static_cast<int>(pts[0].size());
  Eigen::MatrixXd M(d, static_cast<int>(pts.size()) - 1);
  for (size_t i = 1; i < pts.size(); ++i) M.col(static_cast<int>(i) - 1) = pts[i] - pts[0];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

// Subset oracle. Facet hyperplanes come from vertex d-subsets with all other vertices on
// one side. A nonempty vertex subset is a proper face iff it equals the intersection of the
// facets containing it.
inline std::vector<long> brute_force_f_vector(const Polytope& P) {
  const int d = P.dim(), n = P.num_vertices();
  Points V = P.vertices();
  // Facets: d-subsets spanning a supporting hyperplane; record the full on-plane vertex set.
  std::set<std::vector<int>> facets;
  std::vector<int> idx(static_cast<size_t>(d));
  std::function<void(int, int)> rec = [&](int start, int k) {
    if (k == d) {
      Eigen::MatrixXd A(d, d + 1);
      for (int r = 0; r < d; ++r) {
        A.block(r, 0, 1, d) = V[idx[r]].transpose();
        A(r, d) = -1.0;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      lu.setThreshold(1e-10);
      if (lu.rank() != d) return;
      Eigen::VectorXd h = lu.kernel().col(0);
      Eigen::VectorXd a = h.head(d);
      double b = h[d], s = a.norm();
      a /= s, b /= s;
      int pos = 0, neg = 0;
      std::vector<int> on;
      for (int i = 0; i < n; ++i) {
        double v = a.dot(V[i]) - b;
        if (std::abs(v) <= 1e-9) on.push_back(i);
        else (v > 0 ? pos : neg)++;
      }
      if (pos == 0 || neg == 0) facets.insert(on);
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  std::vector<std::vector<int>> faces;
  for (long mask = 1; mask < (1L << n) - 1; ++mask) {
    std::vector<bool> cut(static_cast<size_t>(n), true);
    bool any = false;
    for (const auto& f : facets) {
      bool holds = true;
      for (int i = 0; i < n && holds; ++i)
        if ((mask >> i & 1) && !std::binary_search(f.begin(), f.end(), i)) holds = false;
      if (!holds) continue;
      any = true;
      for (int i = 0; i < n; ++i)
        if (!std::binary_search(f.begin(), f.end(), i)) cut[static_cast<size_t>(i)] = false;
    }
    if (!any) continue;
    bool equal = true;
    for (int i = 0; i < n; ++i)
      if (cut[static_cast<size_t>(i)] != static_cast<bool>(mask >> i & 1)) equal = false;
    if (!equal) continue;
    std::vector<int> f;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) f.push_back(i);
    faces.push_back(f);
  }
  std::vector<long> fv(static_cast<size_t>(d), 0);
  for (const auto& f : faces) {
    Points pts;
    for (int i : f) pts.push_back(V[i]);
    int r = affine_rank(pts);
    if (r < d) fv[static_cast<size_t>(r)]++;
  }
  return fv;
}

struct MonteCarlo {
  double volume = 0.0, volume_sigma = 0.0;
  Vec centroid, centroid_sigma;
};

// Rejection sampling in the bounding box of the vertices; membership by the H-representation.
inline MonteCarlo monte_carlo_volume(const Polytope& P, int n, uint64_t seed) {
  const int d = P.dim();
  Vec lo = Vec::Constant(d, INFINITY), hi = Vec::Constant(d, -INFINITY);
  for (int i = 0; i < P.num_vertices(); ++i) {
    lo = lo.cwiseMin(Vec(P.vertex(i)));
    hi = hi.cwiseMax(Vec(P.vertex(i)));
  }
  double box = (hi - lo).prod();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  long in = 0;
  Vec s = Vec::Zero(d), s2 = Vec::Zero(d);
  for (int k = 0; k < n; ++k) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = lo[i] + U(rng) * (hi[i] - lo[i]);
    if (P.violation(x) <= 0) {
      ++in;
      s += x;
      s2 += x.cwiseProduct(x);
    }
  }
  MonteCarlo mc;
  double p = static_cast<double>(in) / n;
  mc.volume = p * box;
  mc.volume_sigma = box * std::sqrt(p * (1 - p) / n);
  mc.centroid = s / static_cast<double>(in);
  Vec var = s2 / static_cast<double>(in) - mc.centroid.cwiseProduct(mc.centroid);
  mc.centroid_sigma = (var / static_cast<double>(in)).cwiseSqrt();
  return mc;
}

// Symmetric nearest-vertex matching distance.
inline double vertex_set_distance(const Polytope& A, const Polytope& B) {
  auto one = [](const Polytope& X, const Polytope& Y) {
    double worst = 0.0;
    for (int i = 0; i < X.num_vertices(); ++i) {
      double best = INFINITY;
      for (int j = 0; j < Y.num_vertices(); ++j) best = std::min(best, (Vec(X.vertex(i)) - Vec(Y.vertex(j))).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one(A, B), one(B, A));
}

// Vertices of {y : <a_i,y> <= b_i} by solving every m-subset of constraints.
inline Points brute_force_vertices(const std::vector<Vec>& a, const std::vector<double>& b) {
  const int m = static_cast<int>(a[0].size()), n = static_cast<int>(a.size());
  Points out;
  std::vector<int> idx(static_cast<size_t>(m));
  std::function<void(int, int)> rec = [&](int start, int k) {
    if (k == m) {
      Eigen::MatrixXd A(m, m);
      Eigen::VectorXd r(m);
      for (int i = 0; i < m; ++i) {
        A.row(i) = a[idx[i]].transpose();
        r[i] = b[idx[i]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (!lu.isInvertible()) return;
      Vec y = lu.solve(r);
      for (int j = 0; j < n; ++j)
        if (a[j].dot(y) > b[j] + 1e-10) return;
      for (const Vec& q : out)
        if ((q - y).norm() < 1e-10) return;
      out.push_back(y);
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  return out;
}

inline double point_set_distance(const Points& A, const Points& B) {
  auto one = [](const Points& X, const Points& Y) {
    double worst = 0.0;
    for (const Vec& x : X) {
      double best = INFINITY;
      for (const Vec& y : Y) best = std::min(best, (x - y).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  if (A.empty() || B.empty()) return INFINITY;
  return std::max(one(A, B), one(B, A));
}

// Both sides of the dual cap identity from scratch, in the coordinates y = F w of the
// hyperplane orthogonal to n = z/|z| (rows of F orthonormal, F n = 0). Returns the vertex
// matching error between G - h* and alpha times the polar of the projected base.
inline double dual_cap_identity_error(const Points& base, const Vec& z, const Mat& F) {
  const double zn = z.norm();
  const Vec n = z / zn, w0 = z / (zn * zn);
  const double eta = n.dot(base[0]), alpha = (zn - eta) / zn;
  // G: w = w0 + F^T y with <w,p> <= 1 for every base vertex p.
  std::vector<Vec> a;
  std::vector<double> b;
  for (const Vec& p : base) {
    a.push_back(F * p);
    b.push_back(1.0 - w0.dot(p));
  }
  Points G = brute_force_vertices(a, b);  // h* projects to the origin of these coordinates
  // Polar of the projected base about the foot point (the origin here): one vertex per facet.
  const int m = static_cast<int>(F.rows());
  Points proj;
  for (const Vec& p : base) proj.push_back(F * p);
  Points expected;
  std::vector<int> idx(static_cast<size_t>(m));
  std::function<void(int, int)> rec = [&](int start, int k) {
    if (k == m) {
      Eigen::MatrixXd A(m, m);
      for (int i = 0; i < m; ++i) A.row(i) = proj[idx[i]].transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (!lu.isInvertible()) return;
      // Hyperplane <c,y> = 1 through the chosen points.
      Vec c = lu.solve(Eigen::VectorXd::Ones(m));
      for (const Vec& q : proj)
        if (c.dot(q) > 1.0 + 1e-10) return;
      Vec v = alpha * c;
      for (const Vec& q : expected)
        if ((q - v).norm() < 1e-10) return;
      expected.push_back(v);
      return;
    }
    for (int i = start; i < static_cast<int>(proj.size()); ++i) {
      idx[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  return point_set_distance(G, expected);
}

}  // namespace oracle
