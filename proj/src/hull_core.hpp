#pragma once

#include "capcover/geom.hpp"

#include <array>

namespace capcover::detail {

// Simplicial quickhull with exact orientation fallback. Facets keep neighbour
// links: nb[k] is the facet across the ridge that omits v[k].
class HullCore {
 public:
  explicit HullCore(const Points& pts);

  std::pair<double, Vec> volume_centroid() const;
  // src, when given, receives the input index of each output vertex.
  Polytope to_polytope(std::vector<int>* src = nullptr) const;
  // Count of (alive facet, point) pairs with the point strictly beyond the facet.
  long count_violations() const;

 private:
  struct Facet {
    std::array<int, kMaxDim> v{};
    std::array<int, kMaxDim> nb{};
    Vec n;
    double off = 0.0;
    double raw_area = 0.0;
    double quality = 0.0;  // area over Hadamard bound; tiny for slivers
    double filt = 0.0;  // float-filter threshold for plane distances
    int flip = 1;
    bool alive = true;
    std::vector<int> outside;
  };

  Vec plane_normal(const std::array<int, kMaxDim>& v) const;
  int orient(const Facet& f, int q) const;
  void set_plane(Facet& f);
  void initial_simplex(std::vector<int>& simplex);
  void run();

  const Points& pts_;
  int d_ = 0;
  double scale_ = 1.0;
  Vec interior_;
  std::vector<Facet> facets_;
};

}  // namespace capcover::detail
