#pragma once

#include "capcover/bodies.hpp"

#include <string>
#include <vector>

namespace capcover {

// One-sided Hausdorff distance for P ⊆ K: max_u h_K(u) - h_P(u).
// Throws NotNested if a vertex of P lies outside K by more than tol.
double hausdorff_inner(const Polytope& P, const Body& K, double tol = 1e-9, int n_dirs = 10000);
// For K ⊆ P: max_u h_P(u) - h_K(u).
double hausdorff_outer(const Polytope& P, const Body& K, int n_dirs = 10000);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n = 0;
};

// Least squares fit of log y against log x.
ScalingFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct ExperimentRow {
  std::string body;
  int dim = 0;
  double eps = 0.0;
  std::string method;
  uint64_t seed = 0;
  long vertices = 0;
  long total_faces = 0;
  double hausdorff = 0.0;
  double runtime_ms = 0.0;
  std::string error;  // empty on success
};

std::string csv_header();
std::string to_csv(const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> parse_csv(const std::string& text);
// 800x600 log-log plot of total_faces against 1/eps, one series and fitted line per (body, dim, method).
std::string to_svg(const std::vector<ExperimentRow>& rows);
void write_text(const std::string& path, const std::string& text);

}  // namespace capcover
