#include "capcover/experiment.hpp"

#include "capcover/parallel.hpp"

#include <chrono>

namespace capcover {

namespace {

std::vector<long> f_vector_of(const Polytope& P) { return P.profile().f_vector; }

json fit_to_json(const FitRecord& f) {
  return {{"body", f.body}, {"dim", f.dim}, {"method", f.method}, {"slope", f.fit.slope},
          {"intercept", f.fit.intercept}, {"r2", f.fit.r2}, {"n", f.fit.n}};
}

}  // namespace

ExperimentOutput run_experiment(const json& grid) {
  ExperimentOutput out;
  if (!grid.is_object()) throw GeometryError(ErrorCode::ConfigError, "grid must be a JSON object");
  json bodies = grid.value("bodies", json::array());
  json epss = grid.value("eps", json::array());
  json methods = grid.value("methods", json::array({"layered"}));
  json seeds = grid.value("seeds", json::array({1}));
  bool histogram = grid.value("histogram", false);
  if (!bodies.is_array() || !epss.is_array() || !methods.is_array() || !seeds.is_array())
    throw GeometryError(ErrorCode::ConfigError, "grid fields must be arrays");
  std::vector<BodyPtr> ks;
  std::vector<std::string> labels;
  for (const json& b : bodies) {
    ks.push_back(body_from_json(b));
    labels.push_back(body_label(b));
  }
  for (const json& m : methods) {
    std::string s = m.get<std::string>();
    if (s != "layered" && s != "dudley" && s != "bi") throw GeometryError(ErrorCode::ConfigError, "unknown method " + s);
  }
  struct Cell {
    size_t body;
    double eps;
    std::string method;
    uint64_t seed;
  };
  std::vector<Cell> cells;
  for (size_t b = 0; b < ks.size(); ++b)
    for (const json& m : methods)
      for (const json& e : epss)
        for (const json& s : seeds) cells.push_back({b, e.get<double>(), m.get<std::string>(), s.get<uint64_t>()});
  out.records.resize(cells.size());
  parallel_for(cells.size(), [&](size_t i) {
    const Cell& c = cells[i];
    ExperimentRecord& rec = out.records[i];
    rec.row.body = labels[c.body];
    rec.row.dim = ks[c.body]->dim();
    rec.row.eps = c.eps;
    rec.row.method = c.method;
    rec.row.seed = c.seed;
    auto t0 = std::chrono::steady_clock::now();
    try {
      Polytope P;
      if (c.method == "layered") {
        ConstructionConfig cfg;
        cfg.seed = c.seed;
        ApproximationResult r = approximate(ks[c.body], c.eps, cfg);
        P = r.P;
        rec.row.hausdorff = r.hausdorff_est;
        if (histogram) {
          Packing pk = boundary_packing(ks[c.body], c.eps, c.seed, rec.row.dim == 2 ? 4096 : 16384);
          rec.histogram = volume_histogram(pk, c.eps);
        }
      } else if (c.method == "dudley") {
        P = dudley(ks[c.body], c.eps);
        rec.row.hausdorff = hausdorff_outer(P, *ks[c.body]);
      } else {
        P = bronshteyn_ivanov(ks[c.body], c.eps);
        rec.row.hausdorff = hausdorff_inner(P, *ks[c.body]);
      }
      rec.f_vector = f_vector_of(P);
      rec.row.vertices = P.num_vertices();
      rec.row.total_faces = P.profile().total;
    } catch (const GeometryError& e) {
      rec.row.error = e.what();
    }
    rec.row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  });
  // Fits per (body, dim, method) in first-appearance order.
  std::vector<FitRecord> fits;
  for (size_t b = 0; b < ks.size(); ++b) {
    for (const json& m : methods) {
      FitRecord f{labels[b], ks[b]->dim(), m.get<std::string>(), {}};
      std::vector<double> xs, ys;
      for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].body != b || cells[i].method != f.method || !out.records[i].row.error.empty()) continue;
        xs.push_back(1.0 / cells[i].eps);
        ys.push_back(static_cast<double>(out.records[i].row.total_faces));
      }
      try {
        f.fit = fit_loglog(xs, ys);
        fits.push_back(f);
      } catch (const GeometryError&) {
      }
    }
  }
  out.fits = std::move(fits);
  return out;
}

json experiment_to_json(const ExperimentOutput& out) {
  json recs = json::array();
  for (const ExperimentRecord& r : out.records) {
    json j = {{"body", r.row.body},      {"dim", r.row.dim},
              {"eps", r.row.eps},        {"method", r.row.method},
              {"seed", r.row.seed},      {"counts", {{"vertices", r.row.vertices}, {"faces_by_dim", r.f_vector}, {"total", r.row.total_faces}}},
              {"hausdorff_est", r.row.hausdorff}, {"runtime_ms", r.row.runtime_ms}};
    if (!r.histogram.empty()) {
      json h = json::object();
      for (auto [k, v] : r.histogram) h[std::to_string(k)] = v;
      j["packing_histogram"] = h;
    }
    if (!r.row.error.empty()) j["error"] = r.row.error;
    recs.push_back(j);
  }
  json fits = json::array();
  for (const FitRecord& f : out.fits) fits.push_back(fit_to_json(f));
  return {{"records", recs}, {"fits", fits}};
}

json result_to_json(const ApproximationResult& r, const std::string& body) {
  const ConstructionConfig& k = r.constants;
  json faces = r.profile.f_vector;
  return {{"body", body},
          {"dim", r.P.dim()},
          {"eps", r.eps},
          {"seed", k.seed},
          {"constants", {{"beta", k.beta}, {"sigma", k.sigma}, {"c", k.c}, {"c0", r.c0}, {"c1", r.c1}, {"b1", r.b1}, {"b2", r.b2}}},
          {"counts", {{"vertices", r.P.num_vertices()}, {"faces_by_dim", faces}, {"total", r.profile.total}}},
          {"hausdorff_est", r.hausdorff_est},
          {"witness_count", r.witness_count},
          {"collector_max_points", r.collector_max_points},
          {"runtime_ms", r.runtime_ms}};
}

json packing_to_json(const Packing& p, const std::string& body) {
  json entries = json::array();
  for (const PackingEntry& e : p.entries)
    entries.push_back({{"center", vec_to_json(e.center)}, {"depth", e.depth}, {"volume", e.volume}, {"class", e.cls},
                       {"accepted", e.accepted}});
  json hist = json::object();
  for (auto [k, v] : volume_histogram(p, p.eps)) hist[std::to_string(k)] = v;
  return {{"body", body},       {"eps", p.eps},          {"seed", p.seed},       {"n_dirs", p.n_dirs},
          {"coverage", p.coverage}, {"accepted", p.accepted_count()}, {"histogram", hist}, {"entries", entries}};
}

}  // namespace capcover
