#include "capcover/construction.hpp"
#include "capcover/metrics.hpp"

#include <doctest.h>

using namespace capcover;

TEST_CASE("type widths and volumes") {
  CHECK(type_width(0, 0.1) == doctest::Approx(0.1));
  CHECK(type_width(1, 0.1) == doctest::Approx(0.1));
  CHECK(type_width(-3, 0.1) == doctest::Approx(0.1 / 9));
  CHECK(type_volume(2, 0.01, 3) == doctest::Approx(4.0 * 1e-4));
  CHECK(layer_count(0.01) == 7);
  CHECK(layer_count(0.5) == 1);
  CHECK_THROWS_AS(layer_count(1.5), GeometryError);
}

TEST_CASE("balanced caps") {
  const double eps = 0.05;
  const int t = layer_count(eps);
  BodyPtr B = make_ball(3);
  Cap F = make_cap(B, unit(3, 2), eps);
  TypedCap A = balance_cap(B, F, eps, t, 2.0);
  CHECK(std::abs(A.type_F) <= 1);
  CHECK(A.cap.width == doctest::Approx(eps));
  CHECK(B->contains(A.base_centroid));

  BodyPtr C = make_box(Vec::Ones(3));
  TypedCap facet = balance_cap(C, make_cap(C, unit(3, 0), eps), eps, t, 2.0);
  CHECK(facet.type_F > 0);
  CHECK(facet.cap.width == doctest::Approx(eps / std::max(facet.type_F * facet.type_F, 1)));
  TypedCap corner = balance_cap(C, make_cap(C, Vec::Ones(3).normalized(), eps), eps, t, 2.0);
  CHECK(corner.type_F < 0);
  CHECK(corner.cap.width == doctest::Approx(eps / (corner.type_F * corner.type_F)));
  CHECK(corner.cap.volume < facet.cap.volume);
}

TEST_CASE("cover size scales like eps^(-1/2) on the disk") {
  BodyPtr B = make_ball(2);
  Cover c1 = build_balanced_cover(B, 0.04, 2.0, 2000, 1);
  Cover c2 = build_balanced_cover(B, 0.01, 2.0, 2000, 1);
  double ratio = static_cast<double>(c2.caps.size()) / c1.caps.size();
  CHECK(ratio >= 1.0);
  CHECK(ratio <= 3.0);
  for (size_t i = 0; i < c1.caps.size(); ++i)
    for (size_t j = i + 1; j < c1.caps.size(); ++j)
      CHECK(interior_disjoint(*c1.caps[i].shrunken, c1.caps[i].base_centroid, *c1.caps[j].shrunken, c1.caps[j].base_centroid));
}

TEST_CASE("layer system") {
  BodyPtr B = make_ball(2);
  const double eps = 0.01;
  LayerSystem L = build_layers(B, eps, 0.2, 1.0, eps);
  CHECK(L.t == 7);
  CHECK(L.total_gap <= eps);
  for (double s : L.scales) {
    CHECK(s >= 0.5);
    CHECK(s <= 1.0);
  }
  CHECK(L.s(L.t) == doctest::Approx(1.0));
  for (int j = -L.t; j <= L.t; ++j) {
    double gap = L.s(j) - L.s(j - 1);
    CHECK(gap == doctest::Approx(L.s(j) * 0.2 * type_width(j, eps)).epsilon(1e-9));
    // Thickness follows w_j relative to layer 0 within a factor 4.
    double rel = gap / (L.s(0) - L.s(-1)) / (type_width(j, eps) / eps);
    CHECK(rel >= 0.25);
    CHECK(rel <= 4.0);
  }
  CHECK(L.layer_of(1.0) == L.t);
  CHECK(L.layer_of(L.s(-L.t - 1) * 0.5) == -L.t - 1);
  CHECK(L.layer_of(1.5) == L.t + 1);
  CHECK_THROWS_AS(build_layers(B, eps, 50.0, 1.0, eps), GeometryError);
}

TEST_CASE("approximation of the disk") {
  BodyPtr B = make_ball(2);
  ApproximationResult r = approximate(B, 0.05);
  for (const Vec& s : r.S) CHECK(B->contains(s, 1e-9));
  CHECK(r.hausdorff_est <= 0.05);
  CHECK(r.witness_count == static_cast<int>(r.S.size()));
  double ref = 1.0 / std::sqrt(0.05);
  // The layer gap forces a small c0, so the count sits well above the optimum.
  CHECK(r.profile.total <= 100.0 * ref);
  CHECK(r.profile.total >= ref / 20.0);
  CHECK(r.layer_violations == 0);
  // Witnesses of the ball are type 0: the layered region is a scaled copy of M'(x).
  for (int i = 0; i < r.system->size(); ++i) {
    double s = r.system->witness_scale[static_cast<size_t>(i)];
    double ratio = std::pow(s, 2);
    CHECK(ratio <= 1.0);
    CHECK(ratio >= 0.25);
  }
}

TEST_CASE("approximation of the square keeps corners close") {
  BodyPtr C = make_box(Vec::Ones(2));
  ApproximationResult r = approximate(C, 0.05);
  for (const Vec& s : r.S) CHECK(C->contains(s, 1e-9));
  for (int m = 0; m < 4; ++m) {
    Vec v(2);
    v << (m & 1 ? 1.0 : -1.0), (m & 2 ? 1.0 : -1.0);
    Vec u = v.normalized();
    CHECK(C->support_value(u) - r.P.support(u) <= 0.05);
  }
}

TEST_CASE("witness collector verification on the disk and square") {
  for (BodyPtr K : {make_ball(2), make_box(Vec::Ones(2))}) {
    ApproximationResult r = approximate(K, 0.05);
    VerifyReport v = verify_witness_collector(*r.system, r.S_canonical, r.eps_canonical, 400, 3);
    CHECK(v.failures == 0);
    CHECK(v.property1);
    CHECK(v.width_eps_with_witness == v.width_eps_samples);
    CHECK(v.collector_max_points <= 64);
    CHECK(v.collector_max_points == collector_max_points(*r.system, r.S_canonical));
  }
}

TEST_CASE("witnesses stay disjoint after layering") {
  ApproximationResult r = approximate(make_box(Vec::Ones(2)), 0.1);
  const WitnessCollectorSystem& sys = *r.system;
  for (int i = 0; i < sys.size(); ++i)
    for (int j = i + 1; j < sys.size(); ++j) {
      double gap = (sys.witness_center[i] - sys.witness_center[j]).norm();
      if (gap > sys.witness_radius[i] + sys.witness_radius[j]) continue;
      CHECK(interior_disjoint(sys.witness(i), sys.witness_center[i], sys.witness(j), sys.witness_center[j]));
    }
}

TEST_CASE("collector pieces") {
  ApproximationResult r = approximate(make_ball(2), 0.05);
  const WitnessCollectorSystem& sys = *r.system;
  for (const Collector& c : sys.collectors) CHECK(c.pieces <= sys.layers->t - c.j + 1);
  const LayerSystem& L = *sys.layers;
  int claimed = 0;
  for (int i = 0; i < sys.size(); ++i) {
    const Collector& c = sys.collectors[static_cast<size_t>(i)];
    const double h = sys.body->support_value(c.normal);
    for (const Vec& s : r.S_canonical) {
      const double g = sys.body->gauge(s);
      // Direct test: some shell layer r >= j with the sigma-expanded cap of K_r.
      bool direct = false;
      for (int k = c.j; k <= L.t; ++k) {
        bool in_layer = g <= L.s(k) && g > L.s(k - 1);
        double sh = L.s(k) * h;
        if (in_layer && c.normal.dot(s) >= sh - sys.sigma * (sh - L.s(c.j) * c.offset) - 1e-12) direct = true;
      }
      bool pred = sys.in_collector(i, s, g);
      CHECK(pred == direct);
      claimed += pred;
    }
  }
  CHECK(claimed >= sys.size());
}

TEST_CASE("oversized eps is rejected") {
  CHECK_THROWS_AS(approximate(make_ball(2), 0.9), GeometryError);
  CHECK_THROWS_AS(approximate(make_ball(2), -0.1), GeometryError);
}

TEST_CASE("baselines on the disk") {
  BodyPtr B = make_ball(2);
  Polytope D = dudley(B, 0.05);
  Polytope I = bronshteyn_ivanov(B, 0.05);
  CHECK(hausdorff_outer(D, *B) <= 0.05);
  CHECK(hausdorff_inner(I, *B) <= 0.05);
  double r = static_cast<double>(D.num_facets()) / I.num_vertices();
  CHECK(r <= 4.0);
  CHECK(r >= 0.25);
}
