#pragma once

#include "capcover/core.hpp"

#include <memory>
#include <optional>
#include <utility>

namespace capcover {

using ConstMapVec = Eigen::Map<const Eigen::VectorXd>;

struct ComplexityProfile {
  std::vector<long> f_vector;  // f_0 .. f_{d-1}
  long total = 0;
};

struct Triangulation;

// Bounded full-dimensional polytope with both representations and incidence.
// Storage is flat; immutable after construction; derived data is cached lazily.
class Polytope {
 public:
  Polytope() = default;
  Polytope(int d, const Points& vertices, const std::vector<Halfspace>& facets,
           const std::vector<std::vector<int>>& incidence);

  int dim() const { return d_; }
  int num_vertices() const { return d_ ? static_cast<int>(V_.size()) / d_ : 0; }
  int num_facets() const { return d_ ? static_cast<int>(H_.size()) / (d_ + 1) : 0; }
  bool empty() const { return V_.empty(); }

  ConstMapVec vertex(int i) const { return ConstMapVec(V_.data() + static_cast<size_t>(i) * d_, d_); }
  ConstMapVec facet_normal(int f) const { return ConstMapVec(H_.data() + static_cast<size_t>(f) * (d_ + 1), d_); }
  double facet_offset(int f) const { return H_[static_cast<size_t>(f) * (d_ + 1) + d_]; }
  Halfspace facet(int f) const;

  Points vertices() const;
  std::vector<Halfspace> facets() const;
  std::vector<int> facet_vertices(int f) const;
  int facet_size(int f) const { return inc_ptr_[f + 1] - inc_ptr_[f]; }
  const int* facet_begin(int f) const { return inc_idx_.data() + inc_ptr_[f]; }

  // max over facets of <a,x> - b; <= 0 inside.
  double violation(const Vec& x) const;
  bool contains(const Vec& x, double tol = 1e-9) const { return violation(x) <= tol; }
  double support(const Vec& u, int* arg = nullptr) const;

  Vec vertex_mean() const;
  // Bounding radius of the vertex set about its mean; used to scale tolerances.
  double scale() const;

  double volume() const;
  Vec centroid() const;
  const ComplexityProfile& profile() const;
  const std::vector<std::pair<int, int>>& edges() const;

  // Seed exact triangulation-derived quantities when the producer already knows them.
  void set_volume_centroid(double vol, const Vec& c) const;

 private:
  struct Cache;
  Cache& cache() const;

  int d_ = 0;
  std::vector<double> V_;
  std::vector<double> H_;
  std::vector<int> inc_ptr_;
  std::vector<int> inc_idx_;
  mutable std::shared_ptr<Cache> cache_;
};

// Convex hull of a point set; dim-generic for 1 <= d <= 5 (d = 1 is used for base slices).
Polytope convex_hull(const Points& pts);

// Volume and centroid of conv(pts) without building the polytope.
std::pair<double, Vec> hull_volume_centroid(const Points& pts);

Polytope halfspace_intersection(const std::vector<Halfspace>& hs, const Vec& interior);

ComplexityProfile face_lattice(const Polytope& P);
inline double volume(const Polytope& P) { return P.volume(); }
inline Vec centroid(const Polytope& P) { return P.centroid(); }

struct Separation {
  bool disjoint = false;
  std::optional<Halfspace> separator;  // P on the inner side, Q strictly outside
  double depth = 0.0;                   // LP optimum: max_x min_i (b_i - <a_i,x>)
};

Separation disjoint(const Polytope& P, const Polytope& Q);
// Interior-disjointness: shrink both by 1 - 1e-9 about the given centers first.
bool interior_disjoint(const Polytope& P, const Vec& cp, const Polytope& Q, const Vec& cq);

Polytope apply_map(const AffineMap& T, const Polytope& P);
// Homothety about c by factor s (s > 0).
Polytope scale_about(const Polytope& P, const Vec& c, double s);

// Sign of det[p1-p0, ..., pd-p0] with exact fallback. pts.size() == d+1.
int orientation(const std::vector<const double*>& pts, int d);

namespace lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
};

// min c.x  s.t.  A x = b, x >= 0  (dense two-phase simplex, Bland's rule).
Result solve_standard(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace lp

}  // namespace capcover
