#pragma once

#include "capcover/caps.hpp"

#include <map>
#include <memory>

namespace capcover {

// Balancing constants fitted on the unit ball at eps = 0.05 (see tests) and frozen.
constexpr double kFittedB1 = 1.0;
constexpr double kFittedB2 = 1.0;

struct ConstructionConfig {
  double beta = 2.0;
  double sigma = 4.0;
  double c = 8.0;
  double b1 = kFittedB1;
  double b2 = kFittedB2;
  double c0 = 0.0;      // 0: derived from the layer gap bound
  int n_dirs = 0;       // 0: scaled with eps
  uint64_t seed = 1;
  double delta0 = kDefaultDelta0;
  int max_retries = 6;
  // Raise b2 to the observed width ratio of the cover (keeps witnesses inside their layers
  // at the price of a smaller c0). Off: b2 stays at the ball-fitted value.
  bool adapt_b2 = false;
};

struct TypedCap {
  Cap cap;            // balanced cap A
  int type_F = 0;     // type of the eps-width cap it came from
  int type_j = 0;     // type of A, clamped to [-t, t]
  Vec base_centroid;  // x: base centroid of A^{1/beta}
  std::shared_ptr<const Polytope> shrunken;  // M'(x)
  double shrunken_volume = 0.0;
  double shrunken_radius = 0.0;
  double outer_offset = 0.0;  // offset of the cut of A^beta
  double outer_width = 0.0;
};

struct CoverStats {
  int candidates = 0;
  int prefiltered = 0;  // rejected because x already lies inside an accepted region
  long lp_calls = 0;
  double max_width_ratio = 0.0;  // max width(A) / w_j over accepted caps
  double min_width_ratio = 0.0;
  int clamped = 0;
};

struct Cover {
  double eps = 0.0;
  int t = 0;
  std::vector<TypedCap> caps;
  CoverStats stats;
};

// w_j = eps / max(j^2, 1); v_j = 2^j eps^((d+1)/2)
double type_width(int j, double eps);
double type_volume(int j, double eps, int d);
int layer_count(double eps);  // t = ceil(log2(1/eps))

// eps-width cap F along u -> A = F^{1/a_j}, typed and with M'(x).
TypedCap balance_cap(const BodyPtr& K, const Cap& F, double eps, int t, double beta);

Cover build_balanced_cover(const BodyPtr& K, double eps, double beta, int n_dirs, uint64_t seed,
                           double delta0 = kDefaultDelta0);

struct LayerSystem {
  double eps = 0.0;
  double c1 = 0.0;
  double gamma = 1.0;
  int t = 0;
  std::vector<double> scales;  // s_j for j = -t-1 .. t
  double s(int j) const { return scales[static_cast<size_t>(j + t + 1)]; }
  double w(int j) const { return type_width(j, eps); }
  // r with s_{r-1} < g <= s_r; -t-1 for g <= s_{-t-1}; t+1 for g > 1.
  int layer_of(double gauge) const;

  // Verified by support sampling.
  double min_layer_gap_ratio = 0.0;  // min over j,u of gap_j(u) / (sqrt(gamma) c1 w_j / 2)
  double max_layer_gap_ratio = 0.0;  // max over j,u of gap_j(u) / (c1 w_j / sqrt(gamma))
  double total_gap = 0.0;            // max_u h_K(u) - h_{K_{-t-1}}(u)
  double min_scale = 1.0;
};

LayerSystem build_layers(const BodyPtr& K, double eps, double c1, double gamma, double gap_limit);

struct Collector {
  Vec normal;
  double h = 0.0;        // h_K(normal)
  double offset = 0.0;   // b' of the source cap A^beta
  int j = 0;
  int pieces = 0;        // t - j + 1
};

struct WitnessCollectorSystem {
  int d = 0;
  double sigma = 4.0;
  std::shared_ptr<const LayerSystem> layers;
  BodyPtr body;  // canonical body
  std::vector<std::shared_ptr<const Polytope>> sources;  // R'_i
  std::vector<double> witness_scale;                      // s_j applied to R'_i
  std::vector<Vec> witness_center;
  std::vector<double> witness_radius;
  std::vector<Collector> collectors;
  int layer_violations = 0;  // witnesses not inside their layer

  int size() const { return static_cast<int>(sources.size()); }
  Polytope witness(int i) const;
  // Membership in collector i for a point with precomputed gauge.
  bool in_collector(int i, const Vec& y, double gauge) const;
  // Piece-wise threshold for layer r of collector i.
  double piece_offset(int i, int r) const;
};

WitnessCollectorSystem assemble(const BodyPtr& K, const Cover& cover, std::shared_ptr<const LayerSystem> layers,
                                double sigma);

struct VerifyReport {
  int halfspaces = 0;
  int branch_witness = 0;
  int branch_collector = 0;
  int failures = 0;
  int width_eps_samples = 0;
  int width_eps_with_witness = 0;
  int collector_max_points = 0;
  bool property1 = true;  // every witness contains its point
  std::vector<int> failing_indices;
};

// Points S are in the canonical frame, one per witness.
VerifyReport verify_witness_collector(const WitnessCollectorSystem& sys, const Points& S, double eps,
                                      int n_halfspaces, uint64_t seed);
// max over collectors of |collector ∩ S|
int collector_max_points(const WitnessCollectorSystem& sys, const Points& S);

struct ApproximationResult {
  Points S;                 // original frame
  Polytope P;               // conv(S), original frame
  ComplexityProfile profile;
  double hausdorff_est = 0.0;
  int witness_count = 0;
  int collector_max_points = 0;
  double runtime_ms = 0.0;
  ConstructionConfig constants;
  double c0 = 0.0, c1 = 0.0, b1 = 0.0, b2 = 0.0;
  double gamma = 1.0;
  double eps = 0.0;
  double eps_canonical = 0.0;
  double alpha = 0.0;  // cap width of the cover
  int n_dirs = 0;
  int retries = 0;
  int t = 0;
  std::map<int, int> per_type;
  std::map<int, int> per_layer;
  CoverStats cover_stats;
  LayerSystem layers;
  int layer_violations = 0;
  // Retained for verification.
  std::shared_ptr<WitnessCollectorSystem> system;
  Points S_canonical;
  AffineMap to_canonical;
};

ApproximationResult approximate(const BodyPtr& K, double eps, const ConstructionConfig& cfg = {});

// Baselines on canonical bodies (any body accepted; results in the input frame).
Polytope dudley(const BodyPtr& K, double eps);
Polytope bronshteyn_ivanov(const BodyPtr& K, double eps);

}  // namespace capcover
