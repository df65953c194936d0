#include "capcover/experiment.hpp"
#include "capcover/parallel.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace capcover;

namespace {

Points circle_points(int n, double phase) {
  Points pts;
  for (int i = 0; i < n; ++i) {
    double a = phase + 2 * M_PI * i / n;
    pts.push_back((Vec(2) << std::cos(a), std::sin(a)).finished());
  }
  return pts;
}

// max_u h_K(u) - h_P(u) over 10^6 directions on the circle.
double dense_gap(const Polytope& P, const Body& K) {
  double worst = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    double a = 2 * M_PI * i / n;
    Vec u = (Vec(2) << std::cos(a), std::sin(a)).finished();
    worst = std::max(worst, K.support_value(u) - P.support(u));
  }
  return worst;
}

}  // namespace

TEST_CASE("Hausdorff estimate examples") {
  BodyPtr sq = make_box(Vec::Ones(2));
  CHECK(hausdorff_inner(*sq->polytope(), *sq) == doctest::Approx(0.0).epsilon(1e-12));
  Polytope inscribed = convex_hull(circle_points(4, M_PI / 4));
  CHECK(hausdorff_inner(inscribed, *make_ball(2)) == doctest::Approx(1.0 - std::sqrt(2.0) / 2).epsilon(1e-4));
  CHECK_THROWS_AS(hausdorff_inner(*make_box(Vec::Constant(2, 1.5))->polytope(), *make_ball(2)), GeometryError);
}

TEST_CASE("Hausdorff estimate matches dense sampling") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> A(0.0, 2 * M_PI);
  BodyPtr B = make_ball(2);
  for (int k = 0; k < 3; ++k) {
    Points pts;
    for (int i = 0; i < 12; ++i) {
      double a = A(rng);
      pts.push_back((Vec(2) << std::cos(a), std::sin(a)).finished());
    }
    Polytope P = convex_hull(pts);
    CHECK(std::abs(hausdorff_inner(P, *B) - dense_gap(P, *B)) < 1e-3);
  }
}

TEST_CASE("Hausdorff estimate is monotone under adding vertices") {
  BodyPtr B = make_ball(3);
  std::mt19937_64 rng(4);
  Points pts;
  for (int i = 0; i < 8; ++i) pts.push_back(random_unit(rng, 3));
  double prev = hausdorff_inner(convex_hull(pts), *B);
  for (int k = 0; k < 5; ++k) {
    for (int i = 0; i < 8; ++i) pts.push_back(random_unit(rng, 3));
    double cur = hausdorff_inner(convex_hull(pts), *B);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("log-log regression") {
  std::vector<double> x{1, 2, 4, 8, 16}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.5));
  ScalingFit f = fit_loglog(x, y);
  CHECK(f.slope == doctest::Approx(0.5));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_loglog({1.0}, {1.0}), GeometryError);
  CHECK_THROWS_AS(fit_loglog({1.0, 2.0}, {1.0, -1.0}), GeometryError);
}

TEST_CASE("CSV output") {
  ExperimentRow r{"ball", 2, 0.05, "layered", 7, 171, 342, 0.021970000000000001, 12.5, ""};
  std::string csv = to_csv({r});
  CHECK(csv.substr(0, csv.find('\n')) == "body,dim,eps,method,seed,vertices,total_faces,hausdorff,runtime_ms");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  std::vector<ExperimentRow> back = parse_csv(csv);
  REQUIRE(back.size() == 1);
  CHECK(back[0].body == r.body);
  CHECK(back[0].dim == r.dim);
  CHECK(back[0].eps == r.eps);
  CHECK(back[0].method == r.method);
  CHECK(back[0].seed == r.seed);
  CHECK(back[0].vertices == r.vertices);
  CHECK(back[0].total_faces == r.total_faces);
  CHECK(back[0].hausdorff == r.hausdorff);
  CHECK(back[0].runtime_ms == r.runtime_ms);
  CHECK_THROWS_AS(parse_csv("nope\n"), GeometryError);
}

TEST_CASE("SVG output") {
  std::vector<ExperimentRow> rows;
  for (double e : {0.1, 0.05, 0.02}) {
    rows.push_back({"ball", 2, e, "layered", 1, 10, static_cast<long>(20 / std::sqrt(e)), e / 2, 1.0, ""});
    rows.push_back({"ball", 2, e, "dudley", 1, 10, static_cast<long>(8 / std::sqrt(e)), e / 2, 1.0, ""});
  }
  std::string svg = to_svg(rows);
  CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
  size_t lines = 0;
  for (size_t p = svg.find("(slope"); p != std::string::npos; p = svg.find("(slope", p + 1)) ++lines;
  CHECK(lines == 2);
  CHECK(to_svg({}).find("no data") != std::string::npos);
}

TEST_CASE("writing to a bad path reports the path") {
  try {
    write_text("/nonexistent-dir/x.csv", "a");
    FAIL("expected an IOError");
  } catch (const GeometryError& e) {
    CHECK(e.code() == ErrorCode::IOError);
    CHECK(std::string(e.what()).find("/nonexistent-dir/x.csv") != std::string::npos);
  }
}

TEST_CASE("experiment sweep") {
  json grid = {{"bodies", {{{"type", "ball"}, {"dim", 2}}, {{"type", "box"}, {"dim", 2}}}},
               {"eps", {0.1, 0.05}},
               {"methods", {"layered", "bi"}},
               {"seeds", {1}}};
  ExperimentOutput out = run_experiment(grid);
  CHECK(out.records.size() == 8);
  CHECK(out.fits.size() == 4);
  for (const auto& rec : out.records) {
    CHECK(rec.row.error.empty());
    CHECK(rec.row.hausdorff <= rec.row.eps);
    long total = 0;
    for (long f : rec.f_vector) total += f;
    CHECK(total == rec.row.total_faces);
  }
  json j1 = experiment_to_json(out), j2 = experiment_to_json(run_experiment(grid));
  for (json* j : {&j1, &j2})
    for (auto& r : (*j)["records"]) r.erase("runtime_ms");
  CHECK(j1.dump() == j2.dump());
  ExperimentOutput empty = run_experiment(json{{"bodies", json::array()}, {"eps", json::array()}});
  CHECK(empty.records.empty());
}

TEST_CASE("per-cell errors do not stop the sweep") {
  json grid = {{"bodies", {{{"type", "ball"}, {"dim", 2}}}}, {"eps", {0.9, 0.1}}};
  ExperimentOutput out = run_experiment(grid);
  REQUIRE(out.records.size() == 2);
  CHECK_FALSE(out.records[0].row.error.empty());
  CHECK(out.records[1].row.error.empty());
}

TEST_CASE("worker count honours the environment") {
  setenv("CAPCOVER_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  unsetenv("CAPCOVER_THREADS");
  CHECK(worker_count() >= 1);
}
