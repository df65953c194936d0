#include "capcover/geom.hpp"
#include "hull_core.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace capcover {

struct Polytope::Cache {
  std::once_flag vol_once;
  double vol = 0.0;
  Vec centroid;
  std::once_flag lattice_once;
  ComplexityProfile profile;
  std::vector<std::pair<int, int>> edges;
};

Polytope::Polytope(int d, const Points& vertices, const std::vector<Halfspace>& facets,
                   const std::vector<std::vector<int>>& incidence)
    : d_(d) {
  V_.reserve(vertices.size() * d);
  for (const auto& v : vertices)
    for (int i = 0; i < d; ++i) V_.push_back(v[i]);
  H_.reserve(facets.size() * (d + 1));
  for (const auto& h : facets) {
    for (int i = 0; i < d; ++i) H_.push_back(h.normal[i]);
    H_.push_back(h.offset);
  }
  inc_ptr_.push_back(0);
  for (const auto& f : incidence) {
    for (int v : f) inc_idx_.push_back(v);
    inc_ptr_.push_back(static_cast<int>(inc_idx_.size()));
  }
  while (static_cast<int>(inc_ptr_.size()) < static_cast<int>(facets.size()) + 1) inc_ptr_.push_back(inc_ptr_.back());
  cache_ = std::make_shared<Cache>();
}

Polytope::Cache& Polytope::cache() const {
  if (!cache_) cache_ = std::make_shared<Cache>();
  return *cache_;
}

Halfspace Polytope::facet(int f) const {
  Halfspace h;
  h.normal = facet_normal(f);
  h.offset = facet_offset(f);
  return h;
}

Points Polytope::vertices() const {
  Points out;
  out.reserve(num_vertices());
  for (int i = 0; i < num_vertices(); ++i) out.emplace_back(vertex(i));
  return out;
}

std::vector<Halfspace> Polytope::facets() const {
  std::vector<Halfspace> out;
  out.reserve(num_facets());
  for (int f = 0; f < num_facets(); ++f) out.push_back(facet(f));
  return out;
}

std::vector<int> Polytope::facet_vertices(int f) const {
  return std::vector<int>(inc_idx_.begin() + inc_ptr_[f], inc_idx_.begin() + inc_ptr_[f + 1]);
}

double Polytope::violation(const Vec& x) const {
  double worst = -1e300;
  const int nf = num_facets();
  for (int f = 0; f < nf; ++f) {
    const double* h = H_.data() + static_cast<size_t>(f) * (d_ + 1);
    double s = -h[d_];
    for (int i = 0; i < d_; ++i) s += h[i] * x[i];
    worst = std::max(worst, s);
  }
  return worst;
}

double Polytope::support(const Vec& u, int* arg) const {
  double best = -1e300;
  int bi = -1;
  for (int i = 0; i < num_vertices(); ++i) {
    double s = vertex(i).dot(u);
    if (s > best) {
      best = s;
      bi = i;
    }
  }
  if (arg) *arg = bi;
  return best;
}

Vec Polytope::vertex_mean() const {
  Vec c = Vec::Zero(d_);
  for (int i = 0; i < num_vertices(); ++i) c += vertex(i);
  return c / std::max(1, num_vertices());
}

double Polytope::scale() const {
  Vec c = vertex_mean();
  double r = 0.0;
  for (int i = 0; i < num_vertices(); ++i) r = std::max(r, (Vec(vertex(i)) - c).norm());
  return r;
}

void Polytope::set_volume_centroid(double vol, const Vec& c) const {
  Cache& k = cache();
  std::call_once(k.vol_once, [&] {
    k.vol = vol;
    k.centroid = c;
  });
}

double Polytope::volume() const {
  Cache& k = cache();
  std::call_once(k.vol_once, [&] {
    auto [v, c] = hull_volume_centroid(vertices());
    k.vol = v;
    k.centroid = c;
  });
  return k.vol;
}

Vec Polytope::centroid() const {
  volume();
  return cache().centroid;
}

namespace {

struct VecHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<size_t>(x + 7)) * 1099511628211ull;
    return h;
  }
};

std::vector<int> intersect_sorted(const std::vector<int>& a, const int* b, int nb) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b, b + nb, std::back_inserter(out));
  return out;
}

bool subset_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

const ComplexityProfile& Polytope::profile() const {
  Cache& k = cache();
  std::call_once(k.lattice_once, [&] {
    const int d = d_;
    ComplexityProfile prof;
    prof.f_vector.assign(d, 0);
    if (d == 1) {
      prof.f_vector[0] = num_vertices();
      prof.total = num_vertices();
      k.profile = prof;
      return;
    }
    std::vector<std::vector<int>> vertex_facets(num_vertices());
    std::vector<std::vector<int>> level;
    {
      std::unordered_set<std::vector<int>, VecHash> seen;
      for (int f = 0; f < num_facets(); ++f) {
        std::vector<int> fv = facet_vertices(f);
        std::sort(fv.begin(), fv.end());
        for (int v : fv) vertex_facets[v].push_back(f);
        if (seen.insert(fv).second) level.push_back(std::move(fv));
      }
    }
    prof.f_vector[d - 1] = static_cast<long>(level.size());
    std::vector<std::vector<int>> sorted_facets(num_facets());
    for (int f = 0; f < num_facets(); ++f) {
      sorted_facets[f] = facet_vertices(f);
      std::sort(sorted_facets[f].begin(), sorted_facets[f].end());
    }
    for (int dim = d - 2; dim >= 0; --dim) {
      std::unordered_set<std::vector<int>, VecHash> seen;
      std::vector<std::vector<int>> next;
      for (const auto& F : level) {
        std::unordered_set<int> cand;
        for (int v : F)
          for (int g : vertex_facets[v]) cand.insert(g);
        std::vector<std::vector<int>> pieces;
        for (int g : cand) {
          auto I = intersect_sorted(F, sorted_facets[g].data(), static_cast<int>(sorted_facets[g].size()));
          if (I.empty() || I.size() == F.size()) continue;
          pieces.push_back(std::move(I));
        }
        std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) {
          return a.size() != b.size() ? a.size() > b.size() : a < b;
        });
        pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
        std::vector<std::vector<int>> maximal;
        for (auto& p : pieces) {
          bool dominated = false;
          for (const auto& m : maximal)
            if (m.size() > p.size() && subset_sorted(p, m)) {
              dominated = true;
              break;
            }
          if (!dominated) maximal.push_back(p);
        }
        for (auto& m : maximal)
          if (seen.insert(m).second) next.push_back(std::move(m));
      }
      prof.f_vector[dim] = static_cast<long>(next.size());
      if (dim == 1) {
        for (const auto& e : next)
          if (e.size() == 2) k.edges.emplace_back(e[0], e[1]);
      }
      level = std::move(next);
    }
    if (d == 2) {
      for (const auto& f : sorted_facets)
        if (f.size() == 2) k.edges.emplace_back(f[0], f[1]);
    }
    std::sort(k.edges.begin(), k.edges.end());
    k.edges.erase(std::unique(k.edges.begin(), k.edges.end()), k.edges.end());
    prof.total = 0;
    for (long f : prof.f_vector) prof.total += f;
    k.profile = prof;
  });
  return k.profile;
}

const std::vector<std::pair<int, int>>& Polytope::edges() const {
  profile();
  return cache().edges;
}

ComplexityProfile face_lattice(const Polytope& P) { return P.profile(); }

Polytope apply_map(const AffineMap& T, const Polytope& P) {
  const int d = P.dim();
  Points verts;
  for (int i = 0; i < P.num_vertices(); ++i) verts.push_back(T.apply(Vec(P.vertex(i))));
  std::vector<Halfspace> hs;
  Mat LinvT = T.linear_inverse().transpose();
  for (int f = 0; f < P.num_facets(); ++f) {
    Vec a = LinvT * Vec(P.facet_normal(f));
    hs.emplace_back(a, P.facet_offset(f) + a.dot(T.translation()));
  }
  std::vector<std::vector<int>> inc;
  for (int f = 0; f < P.num_facets(); ++f) inc.push_back(P.facet_vertices(f));
  Polytope Q(d, verts, hs, inc);
  return Q;
}

Polytope scale_about(const Polytope& P, const Vec& c, double s) {
  const int d = P.dim();
  Points verts;
  for (int i = 0; i < P.num_vertices(); ++i) verts.push_back(c + s * (Vec(P.vertex(i)) - c));
  std::vector<Halfspace> hs;
  for (int f = 0; f < P.num_facets(); ++f) {
    Halfspace h;
    h.normal = P.facet_normal(f);
    h.offset = s * P.facet_offset(f) + (1.0 - s) * h.normal.dot(c);
    hs.push_back(h);
  }
  std::vector<std::vector<int>> inc;
  for (int f = 0; f < P.num_facets(); ++f) inc.push_back(P.facet_vertices(f));
  return Polytope(d, verts, hs, inc);
}

Polytope halfspace_intersection(const std::vector<Halfspace>& hs, const Vec& interior) {
  if (hs.empty()) throw GeometryError(ErrorCode::Unbounded, "no halfspaces");
  const int d = static_cast<int>(interior.size());
  Points dual;
  dual.reserve(hs.size());
  double bscale = 0.0;
  for (const auto& h : hs) bscale = std::max(bscale, std::abs(h.offset - h.normal.dot(interior)));
  for (const auto& h : hs) {
    double b = h.offset - h.normal.dot(interior);
    if (!(b > 1e-14 * std::max(1.0, bscale)))
      throw GeometryError(ErrorCode::GeometryInvalid, "interior point does not strictly satisfy a constraint");
    dual.push_back(h.normal / b);
  }
  Polytope Q;
  std::vector<int> dual_to_h;
  try {
    if (d >= 2) {
      detail::HullCore core(dual);
      Q = core.to_polytope(&dual_to_h);
    } else {
      Q = convex_hull(dual);
      for (int v = 0; v < Q.num_vertices(); ++v) {
        int best = 0;
        for (size_t i = 0; i < dual.size(); ++i)
          if ((dual[i] - Vec(Q.vertex(v))).norm() < (dual[best] - Vec(Q.vertex(v))).norm()) best = static_cast<int>(i);
        dual_to_h.push_back(best);
      }
    }
  } catch (const GeometryError& e) {
    if (e.code() == ErrorCode::DegenerateInput) throw GeometryError(ErrorCode::Unbounded, "dual hull is flat");
    throw;
  }
  double qscale = 0.0;
  for (int i = 0; i < Q.num_vertices(); ++i) qscale = std::max(qscale, Vec(Q.vertex(i)).norm());
  for (int f = 0; f < Q.num_facets(); ++f)
    if (!(Q.facet_offset(f) > 1e-12 * qscale))
      throw GeometryError(ErrorCode::Unbounded, "origin not interior to the dual hull");
  Points verts;
  std::vector<std::vector<int>> vert_on;  // primal vertex -> dual vertices (= primal facets)
  for (int f = 0; f < Q.num_facets(); ++f) {
    Vec m = Q.facet_normal(f);
    verts.push_back(m / Q.facet_offset(f) + interior);
    vert_on.push_back(Q.facet_vertices(f));
  }
  // Merge primal vertices produced by nearly coplanar dual facets.
  double pscale = 0.0;
  for (const auto& v : verts) pscale = std::max(pscale, (v - interior).norm());
  const double tol = 1e-9 * std::max(pscale, 1e-300);
  std::vector<int> order(verts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return verts[a][0] < verts[b][0]; });
  std::vector<int> rep(verts.size(), -1);
  for (size_t a = 0; a < order.size(); ++a) {
    int i = order[a];
    if (rep[i] >= 0) continue;
    rep[i] = i;
    for (size_t b = a + 1; b < order.size(); ++b) {
      int j = order[b];
      if (verts[j][0] - verts[i][0] > tol) break;
      if (rep[j] < 0 && (verts[j] - verts[i]).norm() <= tol) {
        rep[j] = i;
        for (int x : vert_on[j]) vert_on[i].push_back(x);
      }
    }
  }
  Points pv;
  std::vector<int> new_id(verts.size(), -1);
  for (size_t i = 0; i < verts.size(); ++i)
    if (rep[i] == static_cast<int>(i)) {
      new_id[i] = static_cast<int>(pv.size());
      pv.push_back(verts[i]);
    }
  std::vector<std::vector<int>> inc(Q.num_vertices());
  for (size_t i = 0; i < verts.size(); ++i) {
    if (new_id[i] < 0) continue;
    for (int q : vert_on[i]) inc[q].push_back(new_id[i]);
  }
  std::vector<Halfspace> facets;
  for (int q = 0; q < Q.num_vertices(); ++q) {
    auto& fv = inc[q];
    std::sort(fv.begin(), fv.end());
    fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
    facets.push_back(hs[dual_to_h[q]]);
  }
  return Polytope(d, pv, facets, inc);
}

Separation disjoint(const Polytope& P, const Polytope& Q) {
  const int d = P.dim();
  const int mp = P.num_facets(), mq = Q.num_facets();
  const int m = mp + mq;
  // Centre the problem so tolerances scale with the bodies, not their position.
  Vec c = 0.5 * (P.vertex_mean() + Q.vertex_mean());
  double size = std::max({P.scale(), Q.scale(), 1e-300});
  Eigen::MatrixXd A(d + 1, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1), cost(m);
  b[d] = 1.0;
  for (int i = 0; i < m; ++i) {
    const Polytope& R = i < mp ? P : Q;
    int f = i < mp ? i : i - mp;
    Vec a = R.facet_normal(f);
    for (int k = 0; k < d; ++k) A(k, i) = a[k];
    A(d, i) = 1.0;
    cost[i] = (R.facet_offset(f) - a.dot(c)) / size;
  }
  lp::Result r = lp::solve_standard(A, b, cost);
  Separation out;
  if (r.status != lp::Status::Optimal) return out;
  out.depth = r.value * size;
  if (r.value < -1e-12) {
    out.disjoint = true;
    Vec n = Vec::Zero(d);
    double bp = 0.0, bq = 0.0;
    for (int i = 0; i < m; ++i) {
      if (r.x[i] == 0.0) continue;
      const Polytope& R = i < mp ? P : Q;
      int f = i < mp ? i : i - mp;
      double off = R.facet_offset(f) - Vec(R.facet_normal(f)).dot(c);
      if (i < mp) {
        n += r.x[i] * Vec(R.facet_normal(f));
        bp += r.x[i] * off;
      } else {
        bq += r.x[i] * off;
      }
    }
    if (n.norm() > 0) {
      Halfspace h(n, 0.5 * (bp - bq) + n.dot(c));
      out.separator = h;
    }
  }
  return out;
}

bool interior_disjoint(const Polytope& P, const Vec& cp, const Polytope& Q, const Vec& cq) {
  const double s = 1.0 - 1e-9;
  return disjoint(scale_about(P, cp, s), scale_about(Q, cq, s)).disjoint;
}

}  // namespace capcover
