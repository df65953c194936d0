#include "capcover/geom.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>

namespace capcover {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// Doubles are dyadic, so scaling by a common power of two makes every entry an
// exact integer; Bareiss elimination then stays in the integers.
int exact_det_sign(const std::vector<const double*>& pts, int d) {
  int emin = 0;
  bool any = false;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j < d; ++j) {
      double x = pts[i][j];
      if (x == 0.0) continue;
      int e;
      std::frexp(x, &e);
      e -= 53;
      if (!any || e < emin) emin = e;
      any = true;
    }
  auto to_int = [&](double x) {
    if (x == 0.0) return BigInt(0);
    int e;
    double m = std::frexp(x, &e);
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    BigInt v = mant;
    int shift = e - 53 - emin;
    return shift >= 0 ? BigInt(v << shift) : BigInt(v >> (-shift));
  };
  std::vector<std::vector<BigInt>> m(d, std::vector<BigInt>(d));
  std::vector<BigInt> base(d);
  for (int j = 0; j < d; ++j) base[j] = to_int(pts[0][j]);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m[i][j] = to_int(pts[i + 1][j]) - base[j];
  int sign = 1;
  BigInt prev = 1;
  for (int k = 0; k < d; ++k) {
    int piv = -1;
    for (int r = k; r < d; ++r)
      if (m[r][k] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < d; ++i) {
      for (int j = k + 1; j < d; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return m[d - 1][d - 1] > 0 ? sign : -sign;
}

}  // namespace

int orientation(const std::vector<const double*>& pts, int d) {
  Mat m(d, d);
  double hadamard = 1.0;
  for (int i = 0; i < d; ++i) {
    double rn = 0.0;
    for (int j = 0; j < d; ++j) {
      m(i, j) = pts[i + 1][j] - pts[0][j];
      rn += m(i, j) * m(i, j);
    }
    hadamard *= std::sqrt(rn);
  }
  if (hadamard == 0.0) return 0;
  double det = m.partialPivLu().determinant();
  if (std::abs(det) > 1e-10 * hadamard) return det > 0 ? 1 : -1;
  return exact_det_sign(pts, d);
}

}  // namespace capcover
