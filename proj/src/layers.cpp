#include "capcover/construction.hpp"

#include <algorithm>
#include <cmath>

namespace capcover {

double type_width(int j, double eps) { return eps / std::max(1.0, static_cast<double>(j) * j); }

double type_volume(int j, double eps, int d) { return std::ldexp(std::pow(eps, 0.5 * (d + 1)), j); }

int layer_count(double eps) {
  if (!(eps > 0 && eps < 1)) throw GeometryError(ErrorCode::GeometryInvalid, "layer count needs 0 < eps < 1");
  return std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / eps) - 1e-12)));
}

int LayerSystem::layer_of(double g) const {
  if (g > 1.0 + 1e-12) return t + 1;
  // First r with g <= s_r.
  auto it = std::lower_bound(scales.begin(), scales.end(), g);
  if (it == scales.end()) return t;
  return static_cast<int>(it - scales.begin()) - t - 1;
}

LayerSystem build_layers(const BodyPtr& K, double eps, double c1, double gamma, double gap_limit) {
  LayerSystem L;
  L.eps = eps;
  L.c1 = c1;
  L.gamma = gamma;
  L.t = layer_count(eps);
  const int t = L.t;
  L.scales.assign(static_cast<size_t>(2 * t + 2), 1.0);
  for (int j = t - 1; j >= -t - 1; --j) {
    double f = 1.0 - c1 * L.w(j + 1);
    if (!(f > 0)) throw GeometryError(ErrorCode::ConstantsInfeasible, "layer factor 1 - c1 w_j is not positive");
    L.scales[static_cast<size_t>(j + t + 1)] = L.scales[static_cast<size_t>(j + t + 2)] * f;
  }
  L.min_scale = L.scales.front();

  const int d = K->dim();
  double hmin = INFINITY, hmax = 0.0;
  for (const Vec& u : sphere_directions(d, d == 2 ? 720 : 4000, 0)) {
    double h = K->support_value(u);
    hmin = std::min(hmin, h);
    hmax = std::max(hmax, h);
  }
  L.total_gap = (1.0 - L.min_scale) * hmax;
  double sg = std::sqrt(gamma);
  L.min_layer_gap_ratio = INFINITY;
  L.max_layer_gap_ratio = 0.0;
  for (int j = -t; j <= t; ++j) {
    double step = L.s(j) - L.s(j - 1);
    L.min_layer_gap_ratio = std::min(L.min_layer_gap_ratio, hmin * step / (sg * c1 * L.w(j) / 2.0));
    L.max_layer_gap_ratio = std::max(L.max_layer_gap_ratio, hmax * step / (c1 * L.w(j) / sg));
  }
  if (L.total_gap > gap_limit * (1.0 + 1e-12))
    throw GeometryError(ErrorCode::ConstantsInfeasible, "total layer gap exceeds eps");
  return L;
}

}  // namespace capcover
