#include "capcover/bodies.hpp"

#include <cmath>

namespace capcover {

namespace {

// Symmetric basis matrices E_p for the upper triangle.
struct SymBasis {
  int d;
  std::vector<std::pair<int, int>> idx;
  explicit SymBasis(int dd) : d(dd) {
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) idx.emplace_back(i, j);
  }
  int size() const { return static_cast<int>(idx.size()); }
  // E_p v
  Vec apply(int p, const Vec& v) const {
    Vec r = Vec::Zero(d);
    auto [i, j] = idx[p];
    r[i] += v[j];
    if (i != j) r[j] += v[i];
    return r;
  }
  Mat matrix(const Eigen::VectorXd& th) const {
    Mat B = Mat::Zero(d, d);
    for (int p = 0; p < size(); ++p) {
      auto [i, j] = idx[p];
      B(i, j) = th[p];
      B(j, i) = th[p];
    }
    return B;
  }
};

struct Barrier {
  const std::vector<Halfspace>& hs;
  SymBasis sb;
  int d, np, nv;

  Barrier(const std::vector<Halfspace>& h, int dd) : hs(h), sb(dd), d(dd), np(sb.size()), nv(sb.size() + dd) {}

  // Returns +inf outside the domain.
  double value(const Eigen::VectorXd& z, double t) const {
    Mat B = sb.matrix(z.head(np));
    Eigen::LLT<Mat> llt(B);
    if (llt.info() != Eigen::Success) return INFINITY;
    Vec c = z.tail(d);
    double logdet = 0.0;
    for (int i = 0; i < d; ++i) {
      double l = llt.matrixL()(i, i);
      if (!(l > 0)) return INFINITY;
      logdet += 2.0 * std::log(l);
    }
    double f = -t * logdet;
    for (const Halfspace& h : hs) {
      double g = h.offset - h.normal.dot(c) - (B * h.normal).norm();
      if (!(g > 0)) return INFINITY;
      f -= std::log(g);
    }
    return f;
  }

  void grad_hess(const Eigen::VectorXd& z, double t, Eigen::VectorXd& g, Eigen::MatrixXd& H) const {
    Mat B = sb.matrix(z.head(np));
    Vec c = z.tail(d);
    Mat Bi = B.inverse();
    g = Eigen::VectorXd::Zero(nv);
    H = Eigen::MatrixXd::Zero(nv, nv);
    std::vector<Mat> BiE(np);
    for (int p = 0; p < np; ++p) {
      Mat E = Mat::Zero(d, d);
      auto [i, j] = sb.idx[p];
      E(i, j) = 1.0;
      E(j, i) = 1.0;
      BiE[p] = Bi * E;
      g[p] -= t * BiE[p].trace();
    }
    for (int p = 0; p < np; ++p)
      for (int q = p; q < np; ++q) {
        double v = t * (BiE[p] * BiE[q]).trace();
        H(p, q) += v;
        if (p != q) H(q, p) += v;
      }
    Eigen::VectorXd dg(nv);
    std::vector<Vec> Ea(np);
    for (const Halfspace& h : hs) {
      const Vec& a = h.normal;
      Vec Ba = B * a;
      double n = Ba.norm();
      double gi = h.offset - a.dot(c) - n;
      for (int p = 0; p < np; ++p) {
        Ea[p] = sb.apply(p, a);
        dg[p] = -Ba.dot(Ea[p]) / n;
      }
      for (int k = 0; k < d; ++k) dg[np + k] = -a[k];
      g -= dg / gi;
      H += dg * dg.transpose() / (gi * gi);
      // Second derivative of -n only touches the B block.
      for (int p = 0; p < np; ++p)
        for (int q = p; q < np; ++q) {
          double d2n = Ea[q].dot(Ea[p]) / n - (Ba.dot(Ea[p])) * (Ba.dot(Ea[q])) / (n * n * n);
          double v = d2n / gi;
          H(p, q) += v;
          if (p != q) H(q, p) += v;
        }
    }
  }
};

}  // namespace

Ellipsoid mvie(const std::vector<Halfspace>& hs, const Vec& interior) {
  const int d = static_cast<int>(interior.size());
  Barrier bar(hs, d);
  double slack = INFINITY;
  for (const Halfspace& h : hs) slack = std::min(slack, h.offset - h.normal.dot(interior));
  if (!(slack > 0)) throw GeometryError(ErrorCode::GeometryInvalid, "mvie start point not interior");
  Eigen::VectorXd z(bar.nv);
  z.head(bar.np) = Eigen::VectorXd::Zero(bar.np);
  {
    Eigen::VectorXd th = Eigen::VectorXd::Zero(bar.np);
    for (int p = 0; p < bar.np; ++p)
      if (bar.sb.idx[p].first == bar.sb.idx[p].second) th[p] = 0.5 * slack;
    z.head(bar.np) = th;
  }
  z.tail(d) = interior;
  const double m = static_cast<double>(hs.size());
  double t = 1.0;
  Eigen::VectorXd g;
  Eigen::MatrixXd H;
  for (int outer = 0; outer < 200; ++outer) {
    for (int it = 0; it < 200; ++it) {
      bar.grad_hess(z, t, g, H);
      Eigen::VectorXd step = -H.ldlt().solve(g);
      double dec = -g.dot(step);
      if (!(dec > 2e-12)) break;
      double f0 = bar.value(z, t), s = 1.0;
      while (s > 1e-16) {
        double f1 = bar.value(z + s * step, t);
        if (std::isfinite(f1) && f1 <= f0 - 0.25 * s * dec) break;
        s *= 0.5;
      }
      if (s <= 1e-16) break;
      z += s * step;
    }
    // Duality gap of the log-det barrier is m / t in relative log-volume.
    if (m / t < 1e-9) break;
    t *= 8.0;
  }
  Mat B = bar.sb.matrix(z.head(bar.np));
  return Ellipsoid::from_map(z.tail(d), B);
}

namespace {

std::vector<Halfspace> tangent_halfspaces(const Body& K, const Points& dirs) {
  std::vector<Halfspace> hs;
  hs.reserve(dirs.size());
  for (const Vec& u : dirs) hs.emplace_back(u, K.support_value(u));
  return hs;
}

}  // namespace

Ellipsoid john_ellipsoid(const Body& K) {
  const int d = K.dim();
  check_dim(d);
  if (const Ellipsoid* e = K.ellipsoid()) return *e;
  if (const Polytope* P = K.polytope()) return mvie(P->facets(), P->centroid());

  // Oracle body: outer polytope from tangent halfspaces, refined by the most violated direction.
  Points seeds = sphere_directions(d, 4 * d + 16, 3);
  for (int i = 0; i < d; ++i) {
    seeds.push_back(unit(d, i));
    seeds.push_back(-unit(d, i));
  }
  std::vector<Halfspace> hs = tangent_halfspaces(K, seeds);
  const int ntest = d <= 3 ? 2000 : 4000;
  Points test = sphere_directions(d, ntest, 11);
  std::vector<double> htest(ntest);
  double scale = 0.0;
  for (int i = 0; i < ntest; ++i) {
    htest[i] = K.support_value(test[i]);
    scale = std::max(scale, std::abs(htest[i]));
  }
  Vec interior = Vec::Zero(d);
  for (const Vec& u : seeds) interior += K.support(u).point;
  interior /= static_cast<double>(seeds.size());
  const double tol = 1e-6 * scale;
  for (int round = 0; round < 10000; ++round) {
    Ellipsoid E = mvie(hs, interior);
    int worst = -1;
    double wv = tol;
    for (int i = 0; i < ntest; ++i) {
      double v = E.support(test[i]).value - htest[i];
      if (v > wv) wv = v, worst = i;
    }
    if (worst < 0) {
      // Shrink about the center so the sampled sandwich is strict.
      return Ellipsoid::from_map(E.center, (1.0 - 1e-6) * E.L);
    }
    // Refine the violated direction locally before adding its tangent.
    auto f = [&](const Vec& u) { return K.support_value(u) - E.support(u).value; };
    Vec u = sphere_nelder_mead(f, test[worst], 0.02, 200, 1e-14);
    hs.emplace_back(u, K.support_value(u));
    hs.emplace_back(test[worst], htest[worst]);
    interior = E.center;
  }
  throw GeometryError(ErrorCode::NotConverged, "john ellipsoid did not converge in 10^4 rounds");
}

}  // namespace capcover
