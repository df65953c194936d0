#include "capcover/experiment.hpp"
#include "capcover/polar.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace capcover;
namespace fs = std::filesystem;

namespace {

constexpr int kExitViolation = 2;
constexpr int kExitConfig = 3;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw GeometryError(ErrorCode::IOError, "cannot create " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::pair<BodyPtr, std::string> read_body(const std::string& path) {
  json spec = load_json(path);
  return {body_from_json(spec), body_label(spec)};
}

int cmd_approximate(const std::string& body, double eps, uint64_t seed, const std::string& out, const std::string& format) {
  auto [K, label] = read_body(body);
  ConstructionConfig cfg;
  cfg.seed = seed;
  ApproximationResult r = approximate(K, eps, cfg);
  ensure_dir(out);
  if (format == "json") {
    json j = result_to_json(r, label);
    j["vertices"] = json::array();
    for (int i = 0; i < r.P.num_vertices(); ++i) j["vertices"].push_back(vec_to_json(Vec(r.P.vertex(i))));
    write_text(join(out, "approximation.json"), j.dump(2) + "\n");
  } else {
    ExperimentRow row{label, K->dim(), eps, "layered", seed, r.P.num_vertices(), r.profile.total, r.hausdorff_est, r.runtime_ms, ""};
    write_text(join(out, "approximation.csv"), to_csv({row}));
  }
  std::cout << "vertices " << r.P.num_vertices() << " total_faces " << r.profile.total << " hausdorff " << r.hausdorff_est
            << "\n";
  return 0;
}

int cmd_pack(const std::string& body, double eps, int dirs, uint64_t seed, const std::string& out) {
  auto [K, label] = read_body(body);
  Packing p = boundary_packing(K, eps, seed, dirs);
  ensure_dir(out);
  write_text(join(out, "packing.json"), packing_to_json(p, label).dump(2) + "\n");
  std::cout << "accepted " << p.accepted_count() << " coverage " << p.coverage << "\n";
  return 0;
}

int cmd_polar_check(const std::string& body, double eps, int dirs, double c, const std::string& out) {
  auto [K, label] = read_body(body);
  CanonicalForm cf = to_canonical(K);
  BodyPtr Kc = realize(cf.body, eps);
  BodyPtr Ks = polar_of(Kc, eps);
  json recs = json::array();
  double lo = INFINITY, hi = 0.0;
  for (const Vec& u : sphere_directions(K->dim(), dirs, 0)) {
    CapProductRecord r = mahler_cap_product(Kc, Ks, u, eps, c);
    recs.push_back({{"direction", vec_to_json(r.direction)},
                    {"cap_volume", r.cap_volume},
                    {"polar_cap_volume", r.polar_cap_volume},
                    {"normalized_product", r.normalized_product}});
    lo = std::min(lo, r.normalized_product);
    hi = std::max(hi, r.normalized_product);
  }
  ensure_dir(out);
  json j = {{"body", label}, {"eps", eps}, {"c", c}, {"records", recs}, {"band", {{"min", lo}, {"max", hi}}}};
  write_text(join(out, "polar_check.json"), j.dump(2) + "\n");
  std::cout << "normalized product in [" << lo << ", " << hi << "]\n";
  return 0;
}

int cmd_experiment(const std::string& grid, const std::string& out, const std::string& format) {
  json g = load_json(grid);
  ExperimentOutput res = run_experiment(g);
  ensure_dir(out);
  write_text(join(out, "experiment.json"), experiment_to_json(res).dump(2) + "\n");
  std::vector<ExperimentRow> rows;
  for (const ExperimentRecord& r : res.records) rows.push_back(r.row);
  std::stringstream fs(format);
  std::string f;
  while (std::getline(fs, f, ',')) {
    if (f == "csv") {
      write_text(join(out, "experiment.csv"), to_csv(rows));
    } else if (f == "svg") {
      write_text(join(out, "experiment.svg"), to_svg(rows));
    } else if (f != "json" && !f.empty()) {
      throw GeometryError(ErrorCode::ConfigError, "unknown format " + f);
    }
  }
  int failed = 0;
  for (const ExperimentRow& r : rows) failed += !r.error.empty();
  std::cout << "cells " << rows.size() << " failed " << failed << "\n";
  return 0;
}

int cmd_verify(const std::string& body, double eps, int halfspaces, uint64_t seed) {
  auto [K, label] = read_body(body);
  ConstructionConfig cfg;
  cfg.seed = seed;
  ApproximationResult r = approximate(K, eps, cfg);
  VerifyReport v = verify_witness_collector(*r.system, r.S_canonical, r.eps_canonical, halfspaces, seed);
  json j = {{"body", label},
            {"eps", eps},
            {"seed", seed},
            {"witnesses", r.witness_count},
            {"halfspaces", v.halfspaces},
            {"branch_witness", v.branch_witness},
            {"branch_collector", v.branch_collector},
            {"failures", v.failures},
            {"width_eps_samples", v.width_eps_samples},
            {"width_eps_with_witness", v.width_eps_with_witness},
            {"collector_max_points", v.collector_max_points},
            {"property1", v.property1},
            {"layer_violations", r.layer_violations},
            {"hausdorff_est", r.hausdorff_est}};
  std::cout << j.dump(2) << "\n";
  bool ok = v.failures == 0 && v.property1 && r.layer_violations == 0 && r.hausdorff_est <= eps;
  return ok ? 0 : kExitViolation;
}

bool is_config(ErrorCode c) {
  return c == ErrorCode::ConfigError || c == ErrorCode::IOError || c == ErrorCode::EpsilonTooLarge ||
         c == ErrorCode::DimensionUnsupported;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inner polytope approximation of convex bodies by layered cap covers"};
  app.require_subcommand(1);
  std::string body, out = ".", format = "json", grid;
  double eps = 0.05, c = kDefaultPiConstant;
  uint64_t seed = 1;
  int dirs = 1024, halfspaces = 1000;

  auto* ap = app.add_subcommand("approximate", "build the layered inner approximation");
  ap->add_option("--body", body, "body spec JSON")->required();
  ap->add_option("--eps", eps)->required();
  ap->add_option("--seed", seed);
  ap->add_option("--out", out);
  ap->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* pk = app.add_subcommand("pack", "greedy Macbeath packing near the boundary");
  pk->add_option("--body", body)->required();
  pk->add_option("--eps", eps)->required();
  pk->add_option("--dirs", dirs);
  pk->add_option("--seed", seed);
  pk->add_option("--out", out);

  auto* pc = app.add_subcommand("polar-check", "cap volume times polar cap volume sweep");
  pc->add_option("--body", body)->required();
  pc->add_option("--eps", eps)->required();
  pc->add_option("--dirs", dirs);
  pc->add_option("--c", c);
  pc->add_option("--out", out);

  std::string formats = "csv,svg";
  auto* ex = app.add_subcommand("experiment", "sweep a grid of bodies, eps values and methods");
  ex->add_option("--grid", grid)->required();
  ex->add_option("--out", out);
  ex->add_option("--format", formats);

  auto* vf = app.add_subcommand("verify", "witness-collector report on random halfspaces");
  vf->add_option("--body", body)->required();
  vf->add_option("--eps", eps)->required();
  vf->add_option("--halfspaces", halfspaces);
  vf->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  try {
    if (*ap) return cmd_approximate(body, eps, seed, out, format);
    if (*pk) return cmd_pack(body, eps, dirs, seed, out);
    if (*pc) return cmd_polar_check(body, eps, dirs, c, out);
    if (*ex) return cmd_experiment(grid, out, formats);
    if (*vf) return cmd_verify(body, eps, halfspaces, seed);
  } catch (const GeometryError& e) {
    std::cerr << e.what() << "\n";
    return is_config(e.code()) ? kExitConfig : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
