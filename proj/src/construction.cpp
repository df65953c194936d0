#include "capcover/construction.hpp"

#include "capcover/metrics.hpp"
#include "capcover/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>

namespace capcover {

TypedCap balance_cap(const BodyPtr& K, const Cap& F, double eps, int t, double beta) {
  const int d = K->dim();
  TypedCap tc;
  tc.type_F = cap_type(F.volume, eps, d);
  double a = std::max(1.0, static_cast<double>(tc.type_F) * tc.type_F);
  tc.cap = a == 1.0 ? F : expand_cap(F, 1.0 / a);
  int j = cap_type(tc.cap.volume, eps, d);
  tc.type_j = std::clamp(j, -t, t);
  Cap inner = expand_cap(tc.cap, 1.0 / beta);
  tc.base_centroid = inner.base_centroid;
  double h = tc.cap.offset + tc.cap.width;
  tc.outer_width = std::min(beta * tc.cap.width, tc.cap.full_width);
  tc.outer_offset = h - tc.outer_width;
  return tc;
}

Cover build_balanced_cover(const BodyPtr& K, double eps, double beta, int n_dirs, uint64_t seed, double delta0) {
  if (!(eps > 0) || eps > delta0) throw GeometryError(ErrorCode::EpsilonTooLarge, "cover width exceeds Delta0");
  const int d = K->dim();
  Cover cover;
  cover.eps = eps;
  cover.t = layer_count(eps);
  Points dirs = sphere_directions(d, n_dirs, seed);
  std::unique_ptr<DisjointIndex> index;
  const size_t chunk = 2048;
  std::vector<std::optional<TypedCap>> cand;
  for (size_t lo = 0; lo < dirs.size(); lo += chunk) {
    size_t n = std::min(chunk, dirs.size() - lo);
    cand.assign(n, std::nullopt);
    std::vector<char> pre(n, 0);
    parallel_for(n, [&](size_t i) {
      try {
        Cap F = make_cap(K, dirs[lo + i], eps);
        TypedCap tc = balance_cap(K, F, eps, cover.t, beta);
        if (index && index->covers_point(tc.base_centroid)) {
          pre[i] = 1;
          return;
        }
        MacbeathRegion M = macbeath(K, tc.base_centroid, 0.2);
        tc.shrunken = std::make_shared<const Polytope>(std::move(M.region));
        tc.shrunken_volume = M.volume;
        tc.shrunken_radius = M.radius;
        cand[i] = std::move(tc);
      } catch (const GeometryError&) {
      }
    });
    if (!index) {
      std::vector<double> radii;
      for (auto& c : cand)
        if (c) radii.push_back(c->shrunken_radius);
      if (radii.empty()) continue;
      std::nth_element(radii.begin(), radii.begin() + radii.size() / 2, radii.end());
      index = std::make_unique<DisjointIndex>(d, 2.0 * radii[radii.size() / 2]);
    }
    for (size_t i = 0; i < n; ++i) {
      ++cover.stats.candidates;
      if (pre[i]) {
        ++cover.stats.prefiltered;
        continue;
      }
      if (!cand[i]) continue;
      TypedCap& tc = *cand[i];
      if (index->covers_point(tc.base_centroid)) {
        ++cover.stats.prefiltered;
        continue;
      }
      if (!index->is_free(*tc.shrunken, tc.base_centroid, tc.shrunken_radius)) continue;
      index->add(tc.shrunken, tc.base_centroid, tc.shrunken_radius);
      cover.caps.push_back(std::move(tc));
    }
  }
  if (index) cover.stats.lp_calls = index->lp_calls();
  if (cover.caps.empty()) throw GeometryError(ErrorCode::GeometryInvalid, "cover is empty");
  cover.stats.min_width_ratio = INFINITY;
  for (const TypedCap& tc : cover.caps) {
    int j = cap_type(tc.cap.volume, eps, d);
    if (j != tc.type_j) ++cover.stats.clamped;
    double r = tc.cap.width / type_width(tc.type_j, eps);
    cover.stats.max_width_ratio = std::max(cover.stats.max_width_ratio, r);
    cover.stats.min_width_ratio = std::min(cover.stats.min_width_ratio, r);
  }
  return cover;
}

// ---------------------------------------------------------------- witnesses and collectors

Polytope WitnessCollectorSystem::witness(int i) const {
  return scale_about(*sources[static_cast<size_t>(i)], Vec::Zero(d), witness_scale[static_cast<size_t>(i)]);
}

double WitnessCollectorSystem::piece_offset(int i, int r) const {
  const Collector& c = collectors[static_cast<size_t>(i)];
  double sr = layers->s(r);
  return sr * c.h - sigma * (sr * c.h - layers->s(c.j) * c.offset);
}

bool WitnessCollectorSystem::in_collector(int i, const Vec& y, double gauge) const {
  const Collector& c = collectors[static_cast<size_t>(i)];
  int r = layers->layer_of(gauge);
  if (r < c.j || r > layers->t) return false;
  return c.normal.dot(y) >= piece_offset(i, r) - 1e-12;
}

WitnessCollectorSystem assemble(const BodyPtr& K, const Cover& cover, std::shared_ptr<const LayerSystem> layers,
                                double sigma) {
  WitnessCollectorSystem sys;
  sys.d = K->dim();
  sys.sigma = sigma;
  sys.layers = layers;
  sys.body = K;
  const size_t n = cover.caps.size();
  sys.sources.resize(n);
  sys.witness_scale.resize(n);
  sys.witness_center.resize(n);
  sys.witness_radius.resize(n);
  sys.collectors.resize(n);
  std::vector<char> bad(n, 0);
  parallel_for(n, [&](size_t i) {
    const TypedCap& tc = cover.caps[i];
    int j = tc.type_j;
    double s = layers->s(j);
    sys.sources[i] = tc.shrunken;
    sys.witness_scale[i] = s;
    sys.witness_center[i] = s * tc.base_centroid;
    sys.witness_radius[i] = s * tc.shrunken_radius;
    Collector& c = sys.collectors[i];
    c.normal = tc.cap.normal;
    c.h = tc.cap.offset + tc.cap.width;
    c.offset = tc.outer_offset;
    c.j = j;
    c.pieces = layers->t - j + 1;
    // Every witness vertex must sit between K_{j-1} and K_j.
    double lo = layers->s(j - 1) / s;
    for (int v = 0; v < tc.shrunken->num_vertices(); ++v) {
      double g = K->gauge(Vec(tc.shrunken->vertex(v)));
      if (g > 1.0 + 1e-9 || g < lo * (1.0 - 1e-9)) {
        bad[i] = 1;
        break;
      }
    }
  });
  for (char b : bad) sys.layer_violations += b;
  return sys;
}

namespace {

std::vector<double> gauges(const WitnessCollectorSystem& sys, const Points& S) {
  std::vector<double> g(S.size());
  parallel_for(S.size(), [&](size_t k) { g[k] = sys.body->gauge(S[k]); });
  return g;
}

// Hashed grid over unit vectors for cone range queries.
class DirectionGrid {
 public:
  DirectionGrid(const Points& pts, double cell) : cell_(cell) {
    for (size_t k = 0; k < pts.size(); ++k) {
      double n = pts[k].norm();
      Vec y = n > 0 ? Vec(pts[k] / n) : pts[k];
      unit_.push_back(y);
      grid_[cells(y)].push_back(static_cast<int>(k));
    }
  }
  template <class F>
  void query(const Vec& u, double chord, F f) const {
    const int d = static_cast<int>(u.size());
    int reach = static_cast<int>(std::ceil(chord / cell_));
    std::vector<int64_t> base = cells(u);
    std::vector<int64_t> cur(d);
    std::vector<int> off(d, -reach);
    for (;;) {
      for (int i = 0; i < d; ++i) cur[i] = base[i] + off[i];
      auto it = grid_.find(cur);
      if (it != grid_.end())
        for (int k : it->second)
          if ((unit_[k] - u).norm() <= chord) f(k);
      int i = 0;
      while (i < d && ++off[i] > reach) off[i++] = -reach;
      if (i == d) break;
    }
  }

 private:
  std::vector<int64_t> cells(const Vec& y) const {
    std::vector<int64_t> c(y.size());
    for (int i = 0; i < y.size(); ++i) c[i] = static_cast<int64_t>(std::floor(y[i] / cell_));
    return c;
  }
  double cell_;
  Points unit_;
  std::map<std::vector<int64_t>, std::vector<int>> grid_;
};

}  // namespace

int collector_max_points(const WitnessCollectorSystem& sys, const Points& S) {
  if (S.empty() || sys.collectors.empty()) return 0;
  std::vector<double> g = gauges(sys, S);
  double rho = 0.0;
  for (const Vec& y : S) rho = std::max(rho, y.norm());
  const int t = sys.layers->t;
  std::vector<double> chord(sys.collectors.size());
  for (size_t i = 0; i < chord.size(); ++i) {
    double tau = sys.piece_offset(static_cast<int>(i), t);
    chord[i] = tau <= 0 ? 2.0 : std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(1.0, tau / rho)));
  }
  std::vector<double> sorted = chord;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  double cell = std::clamp(sorted[sorted.size() / 2], 1e-4, 2.0);
  DirectionGrid grid(S, cell);
  std::vector<int> count(sys.collectors.size(), 0);
  parallel_for(sys.collectors.size(), [&](size_t i) {
    const Collector& c = sys.collectors[i];
    int n = 0;
    auto test = [&](int k) {
      if (sys.in_collector(static_cast<int>(i), S[k], g[k])) ++n;
    };
    if (chord[i] >= 2.0) {
      for (size_t k = 0; k < S.size(); ++k) test(static_cast<int>(k));
    } else {
      grid.query(c.normal, chord[i], test);
    }
    count[i] = n;
  });
  return *std::max_element(count.begin(), count.end());
}

VerifyReport verify_witness_collector(const WitnessCollectorSystem& sys, const Points& S, double eps,
                                      int n_halfspaces, uint64_t seed) {
  VerifyReport rep;
  const int d = sys.d;
  const int n = sys.size();
  if (static_cast<int>(S.size()) != n) throw GeometryError(ErrorCode::GeometryInvalid, "one point per witness");
  std::vector<double> g = gauges(sys, S);
  for (int i = 0; i < n; ++i) {
    const Polytope& R = *sys.sources[static_cast<size_t>(i)];
    // S_i scaled back must lie in the source region.
    if (R.violation(S[static_cast<size_t>(i)] / sys.witness_scale[static_cast<size_t>(i)]) > 1e-9) rep.property1 = false;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int t = sys.layers->t;
  std::vector<double> min_offset(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) min_offset[static_cast<size_t>(i)] = sys.piece_offset(i, t);
  for (int k = 0; k < n_halfspaces; ++k) {
    Vec u = random_unit(rng, d);
    double w = (k % 4 == 0) ? eps : std::exp(std::log(eps / 4.0) + U(rng) * std::log(4.0 / eps));
    double b = sys.body->support_value(u) - w;
    ++rep.halfspaces;
    bool branch1 = false;
    for (int i = 0; i < n && !branch1; ++i) {
      const Vec& c = sys.witness_center[static_cast<size_t>(i)];
      double r = sys.witness_radius[static_cast<size_t>(i)];
      double cu = u.dot(c);
      if (cu + r < b) continue;
      if (cu - r >= b) {
        branch1 = true;
        break;
      }
      const Polytope& R = *sys.sources[static_cast<size_t>(i)];
      double s = sys.witness_scale[static_cast<size_t>(i)];
      double m = INFINITY;
      for (int v = 0; v < R.num_vertices(); ++v) m = std::min(m, u.dot(R.vertex(v)));
      if (s * m >= b) branch1 = true;
    }
    if (k % 4 == 0) {
      ++rep.width_eps_samples;
      if (branch1) ++rep.width_eps_with_witness;
    }
    if (branch1) {
      ++rep.branch_witness;
      continue;
    }
    std::vector<int> inside;
    for (int q = 0; q < n; ++q)
      if (u.dot(S[static_cast<size_t>(q)]) >= b) inside.push_back(q);
    bool branch2 = inside.empty();
    for (int i = 0; i < n && !branch2; ++i) {
      const Collector& c = sys.collectors[static_cast<size_t>(i)];
      bool all = true;
      for (int q : inside) {
        const Vec& y = S[static_cast<size_t>(q)];
        if (c.normal.dot(y) < min_offset[static_cast<size_t>(i)] - 1e-12 || !sys.in_collector(i, y, g[static_cast<size_t>(q)])) {
          all = false;
          break;
        }
      }
      branch2 = all;
    }
    if (branch2) {
      ++rep.branch_collector;
    } else {
      ++rep.failures;
      rep.failing_indices.push_back(k);
    }
  }
  rep.collector_max_points = collector_max_points(sys, S);
  return rep;
}

// ---------------------------------------------------------------- driver

namespace {

int auto_dirs(int d, double alpha) {
  double n = d == 2 ? 67.0 / std::sqrt(alpha) : 300.0 * std::pow(alpha, -0.5 * (d - 1));
  return static_cast<int>(std::clamp(std::ceil(n), 256.0, 2e6));
}

double gap_bound(double c0, double c1, double eps_c, double hmax) {
  double alpha = c0 * eps_c;
  int t = layer_count(alpha);
  double prod = 1.0;
  for (int i = -t; i <= t; ++i) {
    double f = 1.0 - c1 * type_width(i, alpha);
    if (!(f > 0)) return INFINITY;
    prod *= f;
  }
  return (1.0 - prod) * hmax;
}

}  // namespace

ApproximationResult approximate(const BodyPtr& K, double eps, const ConstructionConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  const int d = K->dim();
  check_dim(d);
  if (!(eps > 0)) throw GeometryError(ErrorCode::ConfigError, "eps must be positive");
  if (!(cfg.beta > 1 && cfg.sigma > 1 && cfg.c > 0)) throw GeometryError(ErrorCode::ConfigError, "bad constants");
  CanonicalForm cf = to_canonical(K);
  Eigen::JacobiSVD<Mat> svd(cf.map.linear());
  double eps_c = eps * svd.singularValues().minCoeff();
  if (eps_c > 0.5 * std::sqrt(cf.gamma)) throw GeometryError(ErrorCode::EpsilonTooLarge, "eps too large for the body");
  BodyPtr Kh = realize(cf.body, eps_c);
  double hmax = 0.0;
  for (const Vec& u : sphere_directions(d, d == 2 ? 720 : 4000, 0)) hmax = std::max(hmax, Kh->support_value(u));

  ApproximationResult res;
  res.constants = cfg;
  res.gamma = cf.gamma;
  res.eps = eps;
  res.eps_canonical = eps_c;
  res.b1 = cfg.b1;
  res.to_canonical = cf.map;
  AffineMap back = cf.map.inverse();
  const double sg = std::sqrt(cf.gamma);
  double b2 = cfg.b2;
  bool done = false;
  for (int attempt = 0; attempt <= cfg.max_retries && !done; ++attempt) {
    double c0 = 0, c1 = 0, alpha = 0;
    int n_dirs = 0;
    Cover cover;
    for (int iter = 0; iter < 4; ++iter) {
      c1 = 2.0 * b2 / sg;
      if (cfg.c0 > 0) {
        c0 = cfg.c0;
      } else {
        c0 = 1.0;
        while (gap_bound(c0, c1, eps_c, hmax) > eps_c) c0 *= 0.95;
      }
      c0 *= std::pow(0.75, attempt);
      alpha = c0 * eps_c;
      n_dirs = static_cast<int>((cfg.n_dirs > 0 ? cfg.n_dirs : auto_dirs(d, alpha)) * std::pow(1.5, attempt));
      cover = build_balanced_cover(Kh, alpha, cfg.beta, n_dirs, cfg.seed, cfg.delta0);
      if (!cfg.adapt_b2 || cover.stats.max_width_ratio <= b2 * (1.0 + 1e-9)) break;
      b2 = cover.stats.max_width_ratio;
    }
    auto layers = std::make_shared<LayerSystem>(build_layers(Kh, alpha, c1, cf.gamma, eps_c));
    auto sys = std::make_shared<WitnessCollectorSystem>(assemble(Kh, cover, layers, cfg.sigma));
    Points Sh = sys->witness_center;
    Points S;
    S.reserve(Sh.size());
    for (const Vec& y : Sh) S.push_back(back.apply(y));
    Polytope P = convex_hull(S);
    double hd = hausdorff_inner(P, *K);

    res.S = std::move(S);
    res.P = std::move(P);
    res.hausdorff_est = hd;
    res.witness_count = sys->size();
    res.c0 = c0;
    res.c1 = c1;
    res.b2 = b2;
    res.alpha = alpha;
    res.n_dirs = n_dirs;
    res.retries = attempt;
    res.t = layers->t;
    res.cover_stats = cover.stats;
    res.layers = *layers;
    res.layer_violations = sys->layer_violations;
    res.per_type.clear();
    for (const TypedCap& tc : cover.caps) ++res.per_type[tc.type_j];
    res.per_layer.clear();
    for (const Vec& y : Sh) ++res.per_layer[layers->layer_of(Kh->gauge(y))];
    res.S_canonical = std::move(Sh);
    res.system = sys;
    done = hd <= 0.98 * eps;
  }
  res.profile = res.P.profile();
  res.collector_max_points = collector_max_points(*res.system, res.S_canonical);
  res.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace capcover
