#pragma once

#include "capcover/bodies.hpp"

#include <map>
#include <memory>
#include <unordered_map>

namespace capcover {

// Default width threshold below which caps count as small.
constexpr double kDefaultDelta0 = 0.1;

// Bodies without an exact cap/Macbeath implementation are replaced by the hull of
// support points; N = 64 (10/eps)^((d-1)/2), capped at 2e5. Polytopes and ellipsoids pass through.
BodyPtr realize(const BodyPtr& K, double eps);

// {x in K : <u,x> >= offset}
struct Cap {
  BodyPtr body;
  Vec normal;
  double offset = 0.0;
  double width = 0.0;
  double full_width = 0.0;  // width of K along normal
  Vec apex;
  double volume = 0.0;
  Vec base_centroid;

  bool contains(const Vec& y, double tol = 1e-12) const;
  bool in_halfspace(const Vec& y, double tol = 0.0) const { return normal.dot(y) >= offset - tol; }
  double support_value() const { return offset + width; }
};

Cap make_cap(const BodyPtr& K, const Vec& u, double w);
// Cap with base hyperplane through x.
Cap cap_through(const BodyPtr& K, const Vec& u, const Vec& x);
Cap expand_cap(const Cap& C, double rho);
// Volume and base centroid only (no Cap object); cheaper inside searches.
double cap_volume(const Body& K, const Vec& u, double offset);

// Orthonormal rows spanning the base hyperplane, and the base as a (d-1)-polytope in those
// coordinates (ellipsoid bases are inscribed polytopes with n points).
Mat base_frame(const Vec& u);
Polytope cap_base(const Cap& C, int n_ellipse = 256);

// Clip of a polytope by {<u,x> >= b}: points spanning the piece, and the points on the cut.
struct ClipResult {
  Points piece;
  Points slice;
};
ClipResult clip_polytope(const Polytope& P, const Vec& u, double b);

// Volume of the unit-ball cap {z in B : z_1 >= h}, h in [-1, 1].
double ball_cap_volume(int d, double h);

struct MacbeathRegion {
  Vec center;
  double scale = 1.0;
  Polytope region;
  double volume = 0.0;  // exact for polytopes and ellipsoids (lens)
  double depth = 0.0;
  double radius = 0.0;  // max vertex distance from center
};

MacbeathRegion macbeath(const BodyPtr& K, const Vec& x, double lambda);
// Exact membership y in M^lambda(x).
bool in_macbeath(const Body& K, const Vec& x, double lambda, const Vec& y, double tol = 1e-12);

// Minimum-volume cap with base through x.
Cap minimal_cap(const BodyPtr& K, const Vec& x);

// Spatial hash over stored convex regions for interior-disjointness queries.
class DisjointIndex {
 public:
  DisjointIndex(int d, double cell);
  // True if R is interior-disjoint from every stored region.
  bool is_free(const Polytope& R, const Vec& c, double radius) const;
  // True if x lies in some stored region (so any region with interior point x clashes).
  bool covers_point(const Vec& x) const;
  void add(std::shared_ptr<const Polytope> R, const Vec& c, double radius);
  void add(const Polytope& R, const Vec& c, double radius) { add(std::make_shared<const Polytope>(R), c, radius); }
  int size() const { return static_cast<int>(items_.size()); }
  long lp_calls() const { return lp_calls_; }

 private:
  struct Item {
    std::shared_ptr<const Polytope> R;
    Vec c;
    double r;
  };
  // Items of radius in (cell/2, cell] live in the level with that cell size.
  struct Level {
    double cell;
    std::vector<int> items;
    std::unordered_map<uint64_t, std::vector<int>> grid;
  };
  uint64_t key(const Vec& c, double cell) const;
  template <class F>
  bool any_near(const Vec& c, double radius, F f) const;

  int d_;
  double cell_;
  std::vector<Item> items_;
  std::map<int, Level> levels_;
  mutable long lp_calls_ = 0;
};

struct PackingEntry {
  Vec direction;
  Vec center;
  double depth = 0.0;
  MacbeathRegion region;   // M^{1/20}(x)
  Polytope expanded;       // 4x expansion, M^{1/5}(x)
  double volume = 0.0;     // volume of the stored 1/20 region
  int cls = 0;             // dyadic class of the scale-1 volume 20^d * volume
  bool accepted = false;
};

struct Packing {
  double eps = 0.0;
  uint64_t seed = 0;
  int n_dirs = 0;
  std::vector<PackingEntry> entries;
  double coverage = 0.0;  // fraction of fresh rays meeting an expanded region
  int accepted_count() const;
};

Packing boundary_packing(const BodyPtr& K, double eps, uint64_t seed, int n_dirs, int n_rays = 10000);
std::map<int, int> volume_histogram(const Packing& pack, double eps);

// floor(log2(vol / eps^((d+1)/2)))
int cap_type(double vol, double eps, int d);

}  // namespace capcover
