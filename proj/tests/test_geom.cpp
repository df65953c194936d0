#include "capcover/bodies.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace capcover;

namespace {

Points cube_corners(int d) {
  Points pts;
  for (int m = 0; m < (1 << d); ++m) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = (m >> i & 1) ? 1.0 : -1.0;
    pts.push_back(v);
  }
  return pts;
}

Points simplex_corners(int d) {
  Points pts{Vec::Zero(d)};
  for (int i = 0; i < d; ++i) pts.push_back(unit(d, i));
  return pts;
}

}  // namespace

TEST_CASE("hull of square and cube corners") {
  Polytope sq = convex_hull(cube_corners(2));
  CHECK(sq.num_vertices() == 4);
  CHECK(sq.num_facets() == 4);
  Polytope cube = convex_hull(cube_corners(3));
  CHECK(cube.num_vertices() == 8);
  CHECK(cube.num_facets() == 6);
  CHECK(cube.volume() == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("hull of points on the sphere matches facet brute force") {
  std::mt19937_64 rng(7);
  Points pts;
  for (int i = 0; i < 20; ++i) pts.push_back(random_unit(rng, 3));
  Polytope P = convex_hull(pts);
  for (const Vec& p : pts) CHECK(P.contains(p, 1e-9));
  CHECK(P.num_facets() == oracle::brute_force_facet_count(pts));
  CHECK(P.num_vertices() == 20);
}

TEST_CASE("hull rejects flat input") {
  Points flat{Vec::Zero(3), unit(3, 0), unit(3, 1), Vec(unit(3, 0) + unit(3, 1))};
  CHECK_THROWS_AS(convex_hull(flat), GeometryError);
}

TEST_CASE("halfspace intersection of slabs and simplex") {
  for (int d = 2; d <= 4; ++d) {
    std::vector<Halfspace> hs;
    for (int i = 0; i < d; ++i) {
      hs.emplace_back(unit(d, i), 1.0);
      hs.emplace_back(Vec(-unit(d, i)), 1.0);
    }
    Polytope P = halfspace_intersection(hs, Vec::Zero(d));
    CHECK(P.num_vertices() == (1 << d));
    CHECK(P.volume() == doctest::Approx(std::ldexp(1.0, d)).epsilon(1e-10));
  }
  const int d = 3;
  std::vector<Halfspace> hs;
  for (int i = 0; i < d; ++i) hs.emplace_back(Vec(-unit(d, i)), 0.0);
  hs.emplace_back(Vec::Ones(d), 1.0);
  Polytope S = halfspace_intersection(hs, Vec::Constant(d, 0.1));
  CHECK(S.num_vertices() == 4);
  CHECK(S.volume() == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("tangent halfspaces of the ball contain the ball") {
  std::mt19937_64 rng(11);
  std::vector<Halfspace> hs;
  for (int i = 0; i < 50; ++i) hs.emplace_back(random_unit(rng, 3), 1.0);
  Polytope P = halfspace_intersection(hs, Vec::Zero(3));
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int outside = 0;
  for (int k = 0; k < 100000; ++k) {
    Vec x(3);
    for (int i = 0; i < 3; ++i) x[i] = U(rng);
    if (x.norm() <= 1.0 && !P.contains(x, 1e-9)) ++outside;
  }
  CHECK(outside == 0);
}

TEST_CASE("unbounded intersection is reported") {
  std::vector<Halfspace> hs{{unit(2, 0), 1.0}, {unit(2, 1), 1.0}, {Vec(-unit(2, 0)), 1.0}};
  CHECK_THROWS_AS(halfspace_intersection(hs, Vec::Zero(2)), GeometryError);
}

TEST_CASE("face lattice of cube and simplex") {
  const ComplexityProfile c = convex_hull(cube_corners(3)).profile();
  CHECK(c.f_vector == std::vector<long>{8, 12, 6});
  CHECK(c.total == 26);
  const ComplexityProfile s = convex_hull(simplex_corners(3)).profile();
  CHECK(s.f_vector == std::vector<long>{4, 6, 4});
  CHECK(s.total == 14);
  CHECK(convex_hull(cube_corners(4)).profile().f_vector == std::vector<long>{16, 32, 24, 8});
}

TEST_CASE("face lattice equals subset oracle on random polytopes") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    int d = 2 + trial % 3;
    Points pts = oracle::random_points_in_cube(rng, d, 10);
    Polytope P = convex_hull(pts);
    if (P.num_vertices() > 12) continue;
    CHECK(P.profile().f_vector == oracle::brute_force_f_vector(P));
  }
}

TEST_CASE("Euler relation holds in three dimensions") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Polytope P = convex_hull(oracle::random_points_in_cube(rng, 3, 8 + trial));
    const auto& f = P.profile().f_vector;
    CHECK(f[0] - f[1] + f[2] == 2);
  }
}

TEST_CASE("volume and centroid of simplex and cube") {
  for (int d = 2; d <= 5; ++d) {
    Polytope S = convex_hull(simplex_corners(d));
    CHECK(S.volume() == doctest::Approx(1.0 / std::tgamma(d + 1.0)).epsilon(1e-10));
    CHECK((S.centroid() - Vec::Constant(d, 1.0 / (d + 1))).norm() < 1e-10);
    CHECK(convex_hull(cube_corners(d)).centroid().norm() < 1e-12);
  }
}

TEST_CASE("volume and centroid agree with Monte Carlo") {
  std::mt19937_64 rng(17);
  for (int d = 2; d <= 3; ++d) {
    Polytope P = convex_hull(oracle::random_points_in_cube(rng, d, 12));
    oracle::MonteCarlo mc = oracle::monte_carlo_volume(P, 200000, 99 + d);
    CHECK(std::abs(P.volume() - mc.volume) <= 3.0 * mc.volume_sigma);
    for (int i = 0; i < d; ++i) CHECK(std::abs(P.centroid()[i] - mc.centroid[i]) <= 3.0 * mc.centroid_sigma[i] + 1e-12);
  }
}

TEST_CASE("disjointness semantics") {
  Points sq = cube_corners(2);
  Polytope A = convex_hull(sq);
  Points shifted, touching;
  for (const Vec& p : sq) {
    shifted.push_back(p + Vec(3.0 * unit(2, 0)));
    touching.push_back(p + Vec(2.0 * unit(2, 0)));
  }
  Polytope B = convex_hull(shifted), T = convex_hull(touching);
  Separation s = disjoint(A, B);
  REQUIRE(s.disjoint);
  REQUIRE(s.separator.has_value());
  for (int i = 0; i < 4; ++i) {
    CHECK(s.separator->eval(Vec(A.vertex(i))) <= 1e-9);
    CHECK(s.separator->eval(Vec(B.vertex(i))) > 0);
  }
  CHECK(disjoint(B, A).disjoint);
  CHECK_FALSE(disjoint(A, A).disjoint);
  CHECK_FALSE(disjoint(A, T).disjoint);
  CHECK_FALSE(disjoint(T, A).disjoint);
  CHECK(interior_disjoint(A, Vec::Zero(2), T, Vec(2.0 * unit(2, 0))));
}

TEST_CASE("affine maps scale volume by the determinant") {
  Polytope cube = convex_hull(cube_corners(3));
  Polytope same = apply_map(AffineMap::identity(3), cube);
  CHECK(same.volume() == doctest::Approx(8.0));
  CHECK(apply_map(AffineMap::scaling(3, 0.5), cube).volume() == doctest::Approx(1.0).epsilon(1e-12));
  std::mt19937_64 rng(23);
  std::normal_distribution<double> N;
  for (int d = 2; d <= 5; ++d) {
    Polytope P = convex_hull(oracle::random_points_in_cube(rng, d, 3 * d));
    Mat L(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) L(i, j) = N(rng);
    Vec t(d);
    for (int i = 0; i < d; ++i) t[i] = N(rng);
    AffineMap T(L, t);
    Polytope Q = apply_map(T, P);
    CHECK(std::abs(Q.volume() - std::abs(T.det()) * P.volume()) <= 1e-9 * Q.volume());
    for (int f = 0; f < Q.num_facets(); ++f)
      for (int k = 0; k < Q.facet_size(f); ++k) CHECK(std::abs(Q.facet(f).eval(Vec(Q.vertex(Q.facet_begin(f)[k])))) < 1e-9);
  }
}

TEST_CASE("hull and dual round trip") {
  std::mt19937_64 rng(29);
  for (int d = 2; d <= 4; ++d) {
    for (int trial = 0; trial < 5; ++trial) {
      Polytope P = convex_hull(oracle::random_points_in_cube(rng, d, 4 * d));
      Polytope Q = halfspace_intersection(P.facets(), P.centroid());
      CHECK(Q.num_vertices() == P.num_vertices());
      CHECK(oracle::vertex_set_distance(P, Q) < 1e-9);
    }
  }
}

TEST_CASE("orientation falls back to exact arithmetic") {
  double a[2] = {0.0, 0.0}, b[2] = {1.0, 1.0}, c[2] = {3.0, 3.0 + 1e-15}, e[2] = {2.0, 2.0};
  CHECK(orientation({a, b, c}, 2) == 1);
  CHECK(orientation({a, b, e}, 2) == 0);
  CHECK(orientation({a, c, b}, 2) == -1);
}

TEST_CASE("dimension contract") {
  CHECK_THROWS_AS(check_dim(6), GeometryError);
  CHECK_NOTHROW(check_dim(5));
}
