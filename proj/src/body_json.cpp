#include "capcover/io.hpp"

#include <fstream>
#include <limits>

namespace capcover {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw GeometryError(ErrorCode::ConfigError, "body spec: " + msg); }

Mat mat_from_json(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) bad("matrix must have d rows");
  Mat m(d, d);
  for (int i = 0; i < d; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != d) bad("matrix must be d x d");
    for (int k = 0; k < d; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json mat_to_json(const Mat& m) {
  json j = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j.push_back(row);
  }
  return j;
}

int spec_dim(const json& spec) {
  if (!spec.contains("dim") || !spec["dim"].is_number_integer()) bad("missing integer \"dim\"");
  int d = spec["dim"].get<int>();
  check_dim(d);
  return d;
}

}  // namespace

json vec_to_json(const Vec& v) {
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) bad("expected a number array");
  Vec v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

BodyPtr body_from_json(const json& spec) {
  if (!spec.is_object() || !spec.contains("type")) bad("object with \"type\" expected");
  const std::string type = spec["type"].get<std::string>();
  const int d = spec_dim(spec);
  auto vec_field = [&](const char* key, double fill) {
    if (!spec.contains(key)) return Vec(Vec::Constant(d, fill));
    Vec v = vec_from_json(spec[key]);
    if (v.size() != d) bad(std::string("\"") + key + "\" must have dim entries");
    return v;
  };
  if (type == "ball") {
    double r = spec.value("radius", 1.0);
    Vec c = vec_field("center", 0.0);
    return make_ball(d, r, &c);
  }
  if (type == "box") {
    BodyPtr B = make_box(vec_field("half_widths", 1.0));
    Vec c = vec_field("center", 0.0);
    if (c.norm() > 0) return simplify(make_transformed(AffineMap(Mat::Identity(d, d), c), B));
    return B;
  }
  if (type == "ellipsoid") {
    Vec c = vec_field("center", 0.0);
    if (spec.contains("shape")) return make_ellipsoid(Ellipsoid::from_shape(c, mat_from_json(spec["shape"], d)));
    if (spec.contains("axes") && spec["axes"].is_array() && !spec["axes"].empty() && spec["axes"][0].is_array())
      return make_ellipsoid(Ellipsoid::from_map(c, mat_from_json(spec["axes"], d)));
    return make_ellipsoid(c, vec_field("axes", 1.0));
  }
  if (type == "lp") {
    double p;
    if (spec.contains("p") && spec["p"].is_string()) {
      if (spec["p"].get<std::string>() != "inf") bad("p must be a number or \"inf\"");
      p = std::numeric_limits<double>::infinity();
    } else {
      p = spec.value("p", 2.0);
    }
    return make_lp(d, p, spec.value("radius", 1.0));
  }
  if (type == "polytope") {
    if (spec.contains("vertices")) {
      Points pts;
      for (const json& v : spec["vertices"]) {
        Vec p = vec_from_json(v);
        if (p.size() != d) bad("vertex of wrong dimension");
        pts.push_back(p);
      }
      if (static_cast<int>(pts.size()) < d + 1) bad("polytope needs at least d+1 vertices");
      return make_hull_body(pts);
    }
    if (spec.contains("random_vertices"))
      return make_random_polytope(d, spec["random_vertices"].get<int>(), spec.value("seed", uint64_t{0}));
    bad("polytope needs \"vertices\" or \"random_vertices\"");
  }
  if (type == "transformed") {
    if (!spec.contains("body")) bad("transformed needs \"body\"");
    BodyPtr base = body_from_json(spec["body"]);
    if (base->dim() != d) bad("inner body dimension mismatch");
    Mat M = spec.contains("linear") ? mat_from_json(spec["linear"], d) : Mat(Mat::Identity(d, d));
    return simplify(make_transformed(AffineMap(M, vec_field("translation", 0.0)), base));
  }
  bad("unknown type \"" + type + "\"");
}

json body_to_json(const Body& K) {
  json j;
  j["dim"] = K.dim();
  if (const Ellipsoid* e = K.ellipsoid()) {
    bool ball = (e->L - e->L(0, 0) * Mat::Identity(K.dim(), K.dim())).norm() <= 1e-15 * std::abs(e->L(0, 0));
    if (ball) {
      j["type"] = "ball";
      j["radius"] = e->L(0, 0);
    } else {
      j["type"] = "ellipsoid";
      j["axes"] = mat_to_json(e->L);
    }
    j["center"] = vec_to_json(e->center);
    return j;
  }
  if (const Polytope* P = K.polytope()) {
    j["type"] = "polytope";
    json vs = json::array();
    for (int i = 0; i < P->num_vertices(); ++i) vs.push_back(vec_to_json(P->vertex(i)));
    j["vertices"] = vs;
    return j;
  }
  if (auto* lp = dynamic_cast<const LpBody*>(&K)) {
    j["type"] = "lp";
    if (std::isinf(lp->p())) j["p"] = "inf";
    else j["p"] = lp->p();
    j["radius"] = lp->radius();
    return j;
  }
  if (auto* tb = dynamic_cast<const TransformedBody*>(&K)) {
    j["type"] = "transformed";
    j["linear"] = mat_to_json(tb->map().linear());
    j["translation"] = vec_to_json(tb->map().translation());
    j["body"] = body_to_json(*tb->base());
    return j;
  }
  throw GeometryError(ErrorCode::ConfigError, "body kind has no JSON form");
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError(ErrorCode::IOError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw GeometryError(ErrorCode::ConfigError, path + ": " + e.what());
  }
}

BodyPtr load_body(const std::string& path) {
  try {
    return body_from_json(load_json(path));
  } catch (const json::exception& e) {
    throw GeometryError(ErrorCode::ConfigError, path + ": " + e.what());
  }
}

std::string body_label(const json& spec) {
  if (spec.contains("id") && spec["id"].is_string()) return spec["id"].get<std::string>();
  std::string t = spec.value("type", std::string("body"));
  if (t == "box") {
    bool cube = true;
    if (spec.contains("half_widths"))
      for (const json& h : spec["half_widths"]) cube = cube && h.get<double>() == spec["half_widths"][0].get<double>();
    return cube ? "cube" : "box";
  }
  if (t == "polytope" && spec.contains("random_vertices"))
    return "polytope" + std::to_string(spec["random_vertices"].get<int>());
  return t;
}

}  // namespace capcover
