#include "capcover/caps.hpp"
#include "lemma_suite.hpp"

#include <doctest.h>

using namespace capcover;

namespace {

BodyPtr cube(int d) { return make_box(Vec::Ones(d)); }

}  // namespace

TEST_CASE("cap examples") {
  Cap c = make_cap(make_ball(2), unit(2, 1), 0.1);
  Polytope base = cap_base(c);
  double len = 0.0;
  for (int i = 0; i < base.num_vertices(); ++i) len = std::max(len, 2.0 * std::abs(base.vertex(i)[0]));
  CHECK(len == doctest::Approx(2.0 * std::sqrt(0.19)).epsilon(1e-9));
  CHECK(c.width == doctest::Approx(0.1));
  CHECK(c.apex[1] == doctest::Approx(1.0));

  for (int d = 2; d <= 3; ++d) {
    Cap s = make_cap(cube(d), unit(d, 0), 0.05);
    CHECK(s.volume == doctest::Approx(0.05 * std::ldexp(1.0, d - 1)).epsilon(1e-9));
    double eps = 0.05;
    Cap corner = make_cap(cube(d), Vec::Ones(d).normalized(), eps);
    CHECK(corner.volume == doctest::Approx(std::pow(eps * std::sqrt(d), d) / std::tgamma(d + 1.0)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(make_cap(make_ball(2), unit(2, 0), 2.5), GeometryError);
}

TEST_CASE("ball cap volume matches the closed form") {
  for (int d = 2; d <= 3; ++d)
    for (double w : {0.01, 0.1, 0.7}) {
      Cap c = make_cap(make_ball(d), unit(d, 0), w);
      double h = 1.0 - w;
      double exact = d == 2 ? std::acos(h) - h * std::sqrt(1 - h * h) : M_PI * w * w * (3.0 - w) / 3.0;
      CHECK(c.volume == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("cap expansion") {
  Cap s = make_cap(cube(3), unit(3, 0), 0.05);
  Cap same = expand_cap(s, 1.0);
  CHECK(same.width == doctest::Approx(s.width));
  CHECK(same.volume == doctest::Approx(s.volume));
  Cap twice = expand_cap(s, 2.0);
  CHECK(twice.width == doctest::Approx(0.1));
  CHECK(twice.volume == doctest::Approx(2.0 * s.volume));
  Cap all = expand_cap(s, 100.0);
  CHECK(all.width == doctest::Approx(2.0));
  CHECK(all.volume == doctest::Approx(8.0));
  lemmas::Tally t = lemmas::cap_expansion(make_ball(3), 100, 1);
  CHECK(t.violations == 0);
}

TEST_CASE("Macbeath region examples") {
  for (int d = 2; d <= 3; ++d) {
    MacbeathRegion M = macbeath(cube(d), Vec::Zero(d), 1.0);
    CHECK(M.volume == doctest::Approx(std::ldexp(1.0, d)));
    double eps = 0.1;
    Vec x = Vec::Zero(d);
    x[0] = 1.0 - eps;
    MacbeathRegion B = macbeath(cube(d), x, 1.0);
    CHECK(B.volume == doctest::Approx(2.0 * eps * std::ldexp(1.0, d - 1)).epsilon(1e-9));
    for (int i = 0; i < B.region.num_vertices(); ++i) {
      Vec v = B.region.vertex(i);
      CHECK(v[0] >= 1.0 - 2.0 * eps - 1e-12);
      CHECK(v[0] <= 1.0 + 1e-12);
    }
  }
  MacbeathRegion E = macbeath(make_ball(2), Vec::Zero(2), 1.0);
  CHECK(E.volume == doctest::Approx(M_PI).epsilon(1e-9));
  CHECK_THROWS_AS(macbeath(cube(2), unit(2, 0), 1.0), GeometryError);
}

TEST_CASE("Macbeath regions are symmetric and inside the body") {
  BodyPtr K = make_random_polytope(3, 30, 3);
  std::mt19937_64 rng(12);
  for (int k = 0; k < 10; ++k) {
    Vec x = lemmas::random_point_at_depth(rng, *K, 0.02, 0.3);
    MacbeathRegion M = macbeath(K, x, 1.0);
    for (int i = 0; i < M.region.num_vertices(); ++i) {
      Vec v = M.region.vertex(i);
      CHECK(K->contains(v, 1e-9));
      double best = INFINITY;
      for (int j = 0; j < M.region.num_vertices(); ++j) best = std::min(best, (Vec(M.region.vertex(j)) - (2.0 * x - v)).norm());
      CHECK(best < 1e-9);
    }
  }
}

TEST_CASE("Macbeath membership is the reflection test") {
  BodyPtr K = make_random_polytope(3, 30, 9);
  std::mt19937_64 rng(14);
  for (int k = 0; k < 5; ++k) {
    lemmas::Tally t = lemmas::membership(K, lemmas::random_point_at_depth(rng, *K, 0.02, 0.3), 2000, k);
    CHECK(t.violations == 0);
  }
}

TEST_CASE("minimal cap examples") {
  double eps = 0.05;
  for (int d = 2; d <= 3; ++d) {
    Vec x = Vec::Zero(d);
    x[0] = 1.0 - eps;
    Cap b = minimal_cap(make_ball(d), x);
    CHECK(b.width == doctest::Approx(eps).epsilon(1e-5));
    CHECK(b.normal[0] == doctest::Approx(1.0).epsilon(1e-6));
    Cap c = minimal_cap(cube(d), x);
    CHECK(c.width == doctest::Approx(eps).epsilon(1e-4));
    CHECK(c.normal[0] == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("minimal cap beats a dense direction grid") {
  CanonicalForm cf = to_canonical(make_random_polytope(3, 30, 4));
  BodyPtr K = cf.body;
  std::mt19937_64 rng(5);
  for (int k = 0; k < 4; ++k) {
    Vec x = lemmas::random_point_at_depth(rng, *K, 0.02, 0.1);
    Cap C = minimal_cap(K, x);
    double brute = INFINITY;
    for (const Vec& u : sphere_directions(3, 10000, 77)) brute = std::min(brute, cap_volume(*K, u, u.dot(x)));
    CHECK(C.volume <= brute * 1.01);
    CHECK((C.base_centroid - x).norm() <= 0.02 * C.width + 1e-9);
  }
}

TEST_CASE("cap type classes") {
  double eps = 0.01;
  for (int d = 2; d <= 4; ++d) {
    double v0 = std::pow(eps, 0.5 * (d + 1));
    CHECK(cap_type(v0, eps, d) == 0);
    CHECK(cap_type(8.0 * v0, eps, d) == 3);
    CHECK(cap_type(0.999 * v0, eps, d) == -1);
  }
}

TEST_CASE("boundary packing on the disk") {
  Packing p1 = boundary_packing(make_ball(2), 0.1, 1, 2048);
  Packing p2 = boundary_packing(make_ball(2), 0.025, 1, 2048);
  double ratio = static_cast<double>(p2.accepted_count()) / p1.accepted_count();
  CHECK(ratio >= 1.0);
  CHECK(ratio <= 3.0);
  std::vector<const PackingEntry*> acc;
  for (const auto& e : p1.entries) {
    CHECK(e.depth == doctest::Approx(0.1).epsilon(1e-6));
    if (e.accepted) acc.push_back(&e);
  }
  for (size_t i = 0; i < acc.size(); ++i)
    for (size_t j = i + 1; j < acc.size(); ++j)
      CHECK(interior_disjoint(acc[i]->region.region, acc[i]->center, acc[j]->region.region, acc[j]->center));
  CHECK_THROWS_AS(boundary_packing(make_ball(2), 1.0, 1, 64), GeometryError);
}

TEST_CASE("packing histograms") {
  Packing c = boundary_packing(cube(2), 0.05, 1, 4096);
  CHECK(c.coverage == doctest::Approx(1.0));
  std::map<int, int> hb = volume_histogram(boundary_packing(make_ball(2), 0.01, 1, 4096), 0.01);
  int mode = 0, best = 0;
  for (auto [j, n] : hb)
    if (n > best) best = n, mode = j;
  CHECK(std::abs(mode) <= 2);
  std::map<int, int> hc = volume_histogram(boundary_packing(cube(2), 0.01, 1, 4096), 0.01);
  CHECK(hc.rbegin()->first - hc.begin()->first >= 3);
  CHECK(volume_histogram(Packing{}, 0.01).empty());
}

TEST_CASE("Macbeath lemma samples") {
  for (BodyPtr K : {make_ball(2), cube(3), make_random_polytope(2, 30, 1)}) {
    BodyPtr Kc = to_canonical(K).body;
    CHECK(lemmas::mac_mac(Kc, 10, 1, 200).violations == 0);
    CHECK(lemmas::mac_cap(Kc, 10, 2).violations == 0);
    CHECK(lemmas::cap_in_mac(Kc, 10, 3).violations == 0);
    CHECK(lemmas::core_delta(Kc, 10, 4).violations == 0);
  }
}
