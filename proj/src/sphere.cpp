#include "capcover/bodies.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace capcover {

Vec random_unit(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(d);
  do {
    for (int i = 0; i < d; ++i) v[i] = g(rng);
  } while (v.norm() < 1e-9);
  return v.normalized();
}

Mat random_rotation(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

Points sphere_directions(int d, int n, uint64_t seed) {
  Points out;
  out.reserve(n);
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (d == 2) {
    double off = unif(rng);
    for (int i = 0; i < n; ++i) {
      double a = 2.0 * M_PI * (i + off) / n;
      Vec v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
    }
    return out;
  }
  if (d == 3) {
    Mat R = random_rotation(rng, 3);
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      double z = 1.0 - (2.0 * i + 1.0) / n;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec v(3);
      v << r * std::cos(ga * i), r * std::sin(ga * i), z;
      out.push_back(R * v);
    }
    return out;
  }
  // Generalized golden-ratio low-discrepancy sequence pushed through the normal quantile.
  double phi = 2.0;
  for (int it = 0; it < 60; ++it) phi = std::pow(1.0 + phi, 1.0 / (d + 1));
  Vec alpha(d), shift(d);
  for (int k = 0; k < d; ++k) {
    alpha[k] = std::fmod(std::pow(1.0 / phi, k + 1), 1.0);
    shift[k] = unif(rng);
  }
  for (int i = 0; i < n; ++i) {
    Vec v(d);
    for (int k = 0; k < d; ++k) {
      double p = std::fmod(shift[k] + alpha[k] * (i + 1), 1.0);
      p = std::clamp(p, 1e-12, 1.0 - 1e-12);
      v[k] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * p - 1.0);
    }
    double nv = v.norm();
    if (nv < 1e-12) v = unit(d, 0), nv = 1.0;
    out.push_back(v / nv);
  }
  return out;
}

Vec sphere_nelder_mead(const std::function<double(const Vec&)>& f, const Vec& u0, double step, int max_iter,
                       double ftol) {
  const int d = static_cast<int>(u0.size());
  const int m = d - 1;
  Mat B = complement_basis(u0);  // rows span the tangent space
  auto chart = [&](const Eigen::VectorXd& z) {
    Vec u = u0;
    for (int k = 0; k < m; ++k) u += z[k] * B.row(k).transpose();
    return Vec(u.normalized());
  };
  std::vector<Eigen::VectorXd> s(m + 1, Eigen::VectorXd::Zero(m));
  std::vector<double> fv(m + 1);
  for (int k = 0; k < m; ++k) s[k + 1][k] = step;
  for (int k = 0; k <= m; ++k) fv[k] = f(chart(s[k]));
  std::vector<int> ord(m + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = ord[0], worst = ord[m], second = ord[m > 0 ? m - 1 : 0];
    double spread = fv[worst] - fv[best];
    double size = 0.0;
    for (int k = 0; k <= m; ++k) size = std::max(size, (s[k] - s[best]).norm());
    if (spread <= ftol * (1.0 + std::abs(fv[best])) && size < 1e-9) break;
    if (size < 1e-13) break;
    Eigen::VectorXd cen = Eigen::VectorXd::Zero(m);
    for (int k = 0; k <= m; ++k)
      if (k != worst) cen += s[k];
    cen /= m;
    Eigen::VectorXd xr = cen + (cen - s[worst]);
    double fr = f(chart(xr));
    if (fr < fv[best]) {
      Eigen::VectorXd xe = cen + 2.0 * (cen - s[worst]);
      double fe = f(chart(xe));
      if (fe < fr) s[worst] = xe, fv[worst] = fe;
      else s[worst] = xr, fv[worst] = fr;
    } else if (fr < fv[second]) {
      s[worst] = xr, fv[worst] = fr;
    } else {
      bool outside = fr < fv[worst];
      Eigen::VectorXd xc = outside ? Eigen::VectorXd(cen + 0.5 * (xr - cen)) : Eigen::VectorXd(cen + 0.5 * (s[worst] - cen));
      double fc = f(chart(xc));
      if (fc < std::min(fr, fv[worst])) {
        s[worst] = xc, fv[worst] = fc;
      } else {
        for (int k = 0; k <= m; ++k) {
          if (k == best) continue;
          s[k] = s[best] + 0.5 * (s[k] - s[best]);
          fv[k] = f(chart(s[k]));
        }
      }
    }
  }
  int best = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  return chart(s[best]);
}

}  // namespace capcover
