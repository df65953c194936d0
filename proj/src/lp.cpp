#include "capcover/geom.hpp"

#include <cmath>

namespace capcover::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-12;

// Tableau rows 0..m-1 are constraints, row m is the reduced-cost row; last column is rhs.
struct Tableau {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> T;
  std::vector<int> basis;
  int m = 0, n = 0;  // n excludes rhs

  void pivot(int r, int c) {
    T.row(r) /= T(r, c);
    for (int i = 0; i <= m; ++i) {
      if (i == r) continue;
      double f = T(i, c);
      if (f != 0.0) T.row(i) -= f * T.row(r);
    }
    basis[r] = c;
  }

  // Dantzig's rule, falling back to Bland's after a run of degenerate pivots;
  // columns >= limit may not enter. Returns false on unboundedness.
  bool optimize(int limit) {
    bool bland = false;
    int stalled = 0;
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      double most = -kCostTol;
      for (int j = 0; j < limit; ++j) {
        if (T(m, j) < most) {
          enter = j;
          if (bland) break;
          most = T(m, j);
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (T(i, enter) > kPivotTol) {
          double ratio = T(i, n) / T(i, enter);
          if (leave < 0 || ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;
      if (best <= 1e-15) {
        if (++stalled > 2 * m + 10) bland = true;
      } else {
        stalled = 0;
      }
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

Result solve_standard(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
  Tableau tab;
  tab.m = m;
  tab.n = n + m;
  tab.T.setZero(m + 1, n + m + 1);
  tab.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    double s = b[i] < 0 ? -1.0 : 1.0;
    tab.T.row(i).head(n) = s * A.row(i);
    tab.T(i, n + i) = 1.0;
    tab.T(i, n + m) = s * b[i];
    tab.basis[i] = n + i;
  }
  // Phase 1 objective: sum of artificials, expressed in non-basic terms.
  for (int i = 0; i < m; ++i) tab.T.row(m) -= tab.T.row(i);
  for (int i = 0; i < m; ++i) tab.T(m, n + i) = 0.0;
  tab.optimize(n + m);
  Result res;
  double bscale = 1.0 + b.cwiseAbs().maxCoeff();
  if (-tab.T(m, n + m) > 1e-9 * bscale) {
    res.status = Status::Infeasible;
    return res;
  }
  // Drive artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n) continue;
    int c = -1;
    for (int j = 0; j < n; ++j)
      if (std::abs(tab.T(i, j)) > 1e-9) {
        c = j;
        break;
      }
    if (c >= 0) tab.pivot(i, c);
  }
  // Phase 2.
  tab.T.row(m).setZero();
  tab.T.row(m).head(n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    int bj = tab.basis[i];
    if (bj < n && c[bj] != 0.0) tab.T.row(m) -= c[bj] * tab.T.row(i);
  }
  // Artificials still basic sit on redundant rows at value zero; forbid their re-entry.
  if (!tab.optimize(n)) {
    res.status = Status::Unbounded;
    return res;
  }
  res.status = Status::Optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] < n) res.x[tab.basis[i]] = std::max(0.0, tab.T(i, n + m));
  res.value = c.dot(res.x);
  return res;
}

}  // namespace capcover::lp
