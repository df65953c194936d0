#include "capcover/bodies.hpp"

#include <cmath>

namespace capcover {

CanonicalForm to_canonical(const BodyPtr& K0) {
  BodyPtr K = simplify(K0);
  const int d = K->dim();
  check_dim(d);
  Ellipsoid E = john_ellipsoid(*K);
  // T0 sends the inscribed ellipsoid to the unit ball at the origin.
  AffineMap T0(E.Linv, -(E.Linv * E.center));
  BodyPtr B0 = simplify(make_transformed(T0, K));
  double rmin, rmax;
  if (B0->ellipsoid()) {
    Vec ax = B0->ellipsoid()->semi_axes();
    rmin = ax.minCoeff();
    rmax = ax.maxCoeff();
  } else if (const Polytope* P = B0->polytope()) {
    rmin = INFINITY;
    rmax = 0.0;
    for (int f = 0; f < P->num_facets(); ++f) rmin = std::min(rmin, P->facet_offset(f));
    for (int i = 0; i < P->num_vertices(); ++i) rmax = std::max(rmax, P->vertex(i).norm());
  } else {
    // Sampled bounds, widened so the reported gamma stays conservative.
    Points dirs = sphere_directions(d, d <= 3 ? 4096 : 8192, 5);
    rmin = INFINITY;
    rmax = 0.0;
    for (const Vec& u : dirs) {
      double h = B0->support_value(u);
      rmin = std::min(rmin, h);
      rmax = std::max(rmax, h);
    }
    rmin *= 1.0 - 1e-3;
    rmax *= 1.0 + 1e-3;
  }
  double s = 1.0 / std::sqrt(rmin * rmax);
  CanonicalForm cf;
  cf.map = AffineMap::scaling(d, s).compose(T0);
  cf.body = simplify(make_transformed(cf.map, K));
  cf.r_min = s * rmin;
  cf.r_max = s * rmax;
  cf.gamma = std::min(1.0, rmin / rmax);
  return cf;
}

}  // namespace capcover
