#pragma once
// Property checks for caps and Macbeath regions, shared by the unit tests (few samples)
// and the acceptance binary (at least 100 configurations per body).

#include "capcover/caps.hpp"

#include <random>
#include <string>

namespace lemmas {

using namespace capcover;

struct Tally {
  int checked = 0;
  int violations = 0;
  int skipped = 0;  // configurations outside the stated hypotheses
  double worst = 0.0;
  void add(bool ok) {
    ++checked;
    violations += !ok;
  }
};

inline Vec random_convex_combination(std::mt19937_64& rng, const Polytope& P) {
  std::exponential_distribution<double> E(1.0);
  Vec x = Vec::Zero(P.dim());
  double s = 0.0;
  for (int i = 0; i < P.num_vertices(); ++i) {
    double w = E(rng);
    x += w * Vec(P.vertex(i));
    s += w;
  }
  return x / s;
}

inline Vec random_point_at_depth(std::mt19937_64& rng, const Body& K, double lo, double hi) {
  std::uniform_real_distribution<double> U(std::log(lo), std::log(hi));
  return point_at_depth(K, random_unit(rng, K.dim()), std::exp(U(rng)));
}

// Cap expansion volume bound: vol(C^2) <= 2^d vol(C).
inline Tally cap_expansion(const BodyPtr& K, int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> W(std::log(0.005), std::log(0.5));
  Tally t;
  for (int k = 0; k < n; ++k) {
    Vec u = random_unit(rng, K->dim());
    Cap C = make_cap(K, u, std::min(std::exp(W(rng)), 0.9 * K->width_along(u)));
    Cap C2 = expand_cap(C, 2.0);
    double r = C2.volume / (std::ldexp(1.0, K->dim()) * C.volume);
    t.worst = std::max(t.worst, r);
    t.add(r <= 1.0 + 1e-9);
  }
  return t;
}

// Overlapping shrunken regions: M'(y) inside M^{4/5}(x), on sampled points of M'(y).
inline Tally mac_mac(const BodyPtr& K, int n, uint64_t seed, int samples = 1000) {
  std::mt19937_64 rng(seed);
  Tally t;
  int attempts = 0;
  while (t.checked < n && attempts++ < 50 * n) {
    Vec x = random_point_at_depth(rng, *K, 0.01, 0.3);
    MacbeathRegion Mx = macbeath(K, x, 0.4);
    Vec y = random_convex_combination(rng, Mx.region);
    MacbeathRegion My = macbeath(K, y, 0.2), Mx1 = macbeath(K, x, 0.2);
    if (disjoint(My.region, Mx1.region).disjoint) {
      ++t.skipped;
      continue;
    }
    bool ok = true;
    for (int i = 0; i < My.region.num_vertices() && ok; ++i) ok = in_macbeath(*K, x, 0.8, Vec(My.region.vertex(i)), 1e-9);
    for (int s = 0; s < samples && ok; ++s) ok = in_macbeath(*K, x, 0.8, random_convex_combination(rng, My.region), 1e-9);
    t.add(ok);
  }
  return t;
}

// A cap meeting M'(x) contains all of M'(x) after doubling.
inline Tally mac_cap(const BodyPtr& K, int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> W(std::log(0.005), std::log(0.3));
  Tally t;
  int attempts = 0;
  while (t.checked < n && attempts < 50 * n) {
    ++attempts;
    Vec u = random_unit(rng, K->dim());
    Cap C = make_cap(K, u, std::exp(W(rng)));
    // Centers near the cap: perturb the direction and pick a depth around the cap width.
    Vec v = (u + 0.3 * random_unit(rng, K->dim())).normalized();
    Vec x = point_at_depth(*K, v, std::min(0.3, C.width * std::exp(W(rng) - std::log(0.04))));
    MacbeathRegion M = macbeath(K, x, 0.2);
    double top = -INFINITY;
    for (int i = 0; i < M.region.num_vertices(); ++i) top = std::max(top, u.dot(Vec(M.region.vertex(i))));
    if (top < C.offset) {
      ++t.skipped;
      continue;
    }
    double off2 = C.support_value() - 2.0 * C.width;
    bool ok = true;
    for (int i = 0; i < M.region.num_vertices(); ++i) ok = ok && u.dot(Vec(M.region.vertex(i))) >= off2 - 1e-9;
    t.add(ok);
  }
  return t;
}

// Extreme points of a cap: boundary rays from the base centroid into the cap, base rim
// directions, and the exact clip vertices for polytopes.
inline Points cap_extreme_samples(const Cap& C, int n) {
  const Body& K = *C.body;
  const int d = K.dim();
  Points out;
  for (const Vec& v : sphere_directions(d, n, 17)) {
    double a = v.dot(C.normal);
    Vec w = a < 0 ? Vec(v - 2.0 * a * C.normal) : v;
    out.push_back(K.boundary_ray(C.base_centroid, w));
  }
  if (const Polytope* P = K.polytope()) {
    ClipResult cr = clip_polytope(*P, C.normal, C.offset);
    for (const Vec& p : cr.piece) out.push_back(p);
  }
  return out;
}

// Small caps lie in M^{3d} of their base centroid.
inline Tally cap_in_mac(const BodyPtr& K, int n, uint64_t seed, double delta0 = kDefaultDelta0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> W(std::log(0.002), std::log(delta0));
  Tally t;
  for (int k = 0; k < n; ++k) {
    Cap C = make_cap(K, random_unit(rng, K->dim()), std::exp(W(rng)));
    const double lam = 3.0 * K->dim();
    bool ok = true;
    for (const Vec& p : cap_extreme_samples(C, 400)) ok = ok && in_macbeath(*K, C.base_centroid, lam, p, 1e-9);
    t.add(ok);
  }
  return t;
}

// delta(x) <= width(C(x)) <= c delta(x); `worst` records the largest observed c.
inline Tally width_delta(const BodyPtr& K, double gamma, int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Tally t;
  for (int k = 0; k < n; ++k) {
    Vec x = random_point_at_depth(rng, *K, 0.005, 0.05);
    double dl = delta(*K, x);
    Cap C = minimal_cap(K, x);
    double c = C.width / dl;
    t.worst = std::max(t.worst, c);
    t.add(C.width >= dl * (1.0 - 1e-6) && c <= 100.0 / gamma);
  }
  return t;
}

// Points of M'(x) have comparable depth.
inline Tally core_delta(const BodyPtr& K, int n, uint64_t seed, int samples = 50) {
  std::mt19937_64 rng(seed);
  Tally t;
  for (int k = 0; k < n; ++k) {
    Vec x = random_point_at_depth(rng, *K, 0.005, 0.3);
    double dx = delta(*K, x);
    MacbeathRegion M = macbeath(K, x, 0.2);
    bool ok = true;
    for (int s = 0; s < samples; ++s) {
      Vec y = s < M.region.num_vertices() ? Vec(M.region.vertex(s)) : random_convex_combination(rng, M.region);
      double dy = delta(*K, y);
      ok = ok && dy >= 0.8 * dx * (1 - 1e-9) && dy <= dx * 4.0 / 3.0 * (1 + 1e-9);
    }
    t.add(ok);
  }
  return t;
}

// y in M(x) iff y and its reflection 2x - y are in K, on samples around x.
inline Tally membership(const BodyPtr& K, const Vec& x, int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  MacbeathRegion M = macbeath(K, x, 1.0);
  double r = M.radius * 1.3;
  std::uniform_real_distribution<double> U(-r, r);
  Tally t;
  for (int k = 0; k < n; ++k) {
    Vec y = x;
    for (int i = 0; i < K->dim(); ++i) y[i] += U(rng);
    double v = M.region.violation(y);
    if (std::abs(v) < 1e-9) {
      ++t.skipped;
      continue;
    }
    bool oracle = K->contains(y, 0.0) && K->contains(Vec(2.0 * x - y), 0.0);
    t.add(oracle == (v < 0));
  }
  return t;
}

}  // namespace lemmas
