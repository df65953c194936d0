#pragma once

#include "capcover/geom.hpp"

#include <memory>
#include <random>
#include <string>

namespace capcover {

struct SupportResult {
  double value = 0.0;
  Vec point;
};

// E = {x : (x-c)^T A (x-c) <= 1} = {c + L z : |z| <= 1}, L L^T = A^{-1}.
struct Ellipsoid {
  Vec center;
  Mat shape;  // A
  Mat L;
  Mat Linv;

  static Ellipsoid from_shape(const Vec& c, const Mat& A);
  static Ellipsoid from_map(const Vec& c, const Mat& L);

  int dim() const { return static_cast<int>(center.size()); }
  bool contains(const Vec& x, double tol = 1e-12) const;
  SupportResult support(const Vec& u) const;
  Ellipsoid transformed(const AffineMap& T) const;
  double volume() const;
  // Semi-axes in ascending order.
  Vec semi_axes() const;
};

class Body {
 public:
  virtual ~Body() = default;
  virtual int dim() const = 0;
  virtual std::string kind() const = 0;
  virtual bool contains(const Vec& x, double tol = 1e-12) const = 0;
  // u need not be unit; the value scales with |u|.
  virtual SupportResult support(const Vec& u) const = 0;
  // Point of the boundary on the ray x0 + t u, t > 0; x0 interior, u unit.
  virtual Vec boundary_ray(const Vec& x0, const Vec& u) const;
  // Euclidean distance from an interior point to the boundary (no membership check).
  virtual double delta_unchecked(const Vec& x) const;

  virtual const Polytope* polytope() const { return nullptr; }
  virtual const Ellipsoid* ellipsoid() const { return nullptr; }

  // Minkowski functional about the origin (origin interior).
  virtual double gauge(const Vec& y) const;
  double support_value(const Vec& u) const { return support(u).value; }
  double width_along(const Vec& u) const { return support_value(u) + support_value(-u); }

 protected:
  Vec bisect_boundary(const Vec& x0, const Vec& u) const;
  double generic_delta(const Vec& x) const;
};

using BodyPtr = std::shared_ptr<const Body>;

class EllipsoidBody : public Body {
 public:
  EllipsoidBody(const Ellipsoid& e, std::string kind = "ellipsoid");
  int dim() const override { return e_.dim(); }
  std::string kind() const override { return kind_; }
  bool contains(const Vec& x, double tol = 1e-12) const override { return e_.contains(x, tol); }
  SupportResult support(const Vec& u) const override { return e_.support(u); }
  Vec boundary_ray(const Vec& x0, const Vec& u) const override;
  double delta_unchecked(const Vec& x) const override;
  const Ellipsoid* ellipsoid() const override { return &e_; }

 private:
  Ellipsoid e_;
  std::string kind_;
  Mat Q_;     // principal axes as columns
  Vec axes_;  // semi-axes matching Q_ columns
};

class PolytopeBody : public Body {
 public:
  explicit PolytopeBody(Polytope P, std::string kind = "polytope");
  int dim() const override { return P_.dim(); }
  std::string kind() const override { return kind_; }
  bool contains(const Vec& x, double tol = 1e-12) const override;
  SupportResult support(const Vec& u) const override;
  Vec boundary_ray(const Vec& x0, const Vec& u) const override;
  double delta_unchecked(const Vec& x) const override;
  double gauge(const Vec& y) const override;
  const Polytope* polytope() const override { return &P_; }

 private:
  Polytope P_;
  std::string kind_;
};

class LpBody : public Body {
 public:
  LpBody(int d, double p, double radius = 1.0);
  int dim() const override { return d_; }
  std::string kind() const override { return "lp"; }
  bool contains(const Vec& x, double tol = 1e-12) const override;
  SupportResult support(const Vec& u) const override;
  double p() const { return p_; }
  double radius() const { return r_; }

 private:
  double norm(const Vec& x) const;
  int d_;
  double p_, r_;
};

class TransformedBody : public Body {
 public:
  TransformedBody(AffineMap T, BodyPtr base);
  int dim() const override { return base_->dim(); }
  std::string kind() const override { return "transformed"; }
  bool contains(const Vec& x, double tol = 1e-12) const override;
  SupportResult support(const Vec& u) const override;
  Vec boundary_ray(const Vec& x0, const Vec& u) const override;
  const AffineMap& map() const { return T_; }
  const BodyPtr& base() const { return base_; }

 private:
  AffineMap T_;
  BodyPtr base_;
};

BodyPtr make_ball(int d, double radius = 1.0, const Vec* center = nullptr);
BodyPtr make_ellipsoid(const Vec& center, const Vec& semi_axes);
BodyPtr make_ellipsoid(const Ellipsoid& e);
BodyPtr make_box(const Vec& half_widths);
BodyPtr make_lp(int d, double p, double radius = 1.0);
BodyPtr make_polytope_body(const Polytope& P);
BodyPtr make_hull_body(const Points& pts);
BodyPtr make_transformed(const AffineMap& T, BodyPtr base);
// n seeded uniform points on the unit sphere, hull taken (all are vertices).
BodyPtr make_random_polytope(int d, int n, uint64_t seed);

// Collapse transformed ellipsoids/polytopes into plain ones; other bodies unchanged.
BodyPtr simplify(BodyPtr K);
// Polytope realization: exact for polytope bodies, inner hull of n support points otherwise.
Polytope polytope_proxy(const Body& K, int n_points, uint64_t seed = 0);

double delta(const Body& K, const Vec& x);
double ray_distance(const Body& K, const Vec& x);
Vec point_at_depth(const Body& K, const Vec& u, double depth);

Ellipsoid john_ellipsoid(const Body& K);
// Maximum-volume ellipsoid inside {x : <a_i,x> <= b_i}; used directly for polytopes.
Ellipsoid mvie(const std::vector<Halfspace>& hs, const Vec& interior);

struct CanonicalForm {
  AffineMap map;  // T: original -> canonical
  double gamma = 1.0;
  BodyPtr body;   // T(K)
  double r_min = 1.0, r_max = 1.0;  // inner/outer radii of T(K) about O
};

CanonicalForm to_canonical(const BodyPtr& K);

// Quasi-uniform unit directions, deterministic in (d, n, seed).
Points sphere_directions(int d, int n, uint64_t seed);
Vec random_unit(std::mt19937_64& rng, int d);
Mat random_rotation(std::mt19937_64& rng, int d);

// Minimise f over the unit sphere near u0 with Nelder-Mead in a tangent chart.
Vec sphere_nelder_mead(const std::function<double(const Vec&)>& f, const Vec& u0, double step, int max_iter = 400,
                       double ftol = 1e-13);

}  // namespace capcover
