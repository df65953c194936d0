#include "capcover/metrics.hpp"

#include "capcover/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace capcover {

namespace {

// max_u sign * (h_P(u) - h_K(u)) by dense sampling plus local refinement of the worst directions.
double support_gap(const Polytope& P, const Body& K, double sign, int n_dirs) {
  const int d = P.dim();
  Points dirs = sphere_directions(d, n_dirs, 0);
  auto f = [&](const Vec& u) { return sign * (P.support(u) - K.support_value(u)); };
  std::vector<double> v(dirs.size());
  parallel_for(dirs.size(), [&](size_t i) { v[i] = f(dirs[i]); });
  std::vector<int> ord(dirs.size());
  for (size_t i = 0; i < ord.size(); ++i) ord[i] = static_cast<int>(i);
  const int k = std::min<int>(32, static_cast<int>(ord.size()));
  std::partial_sort(ord.begin(), ord.begin() + k, ord.end(), [&](int a, int b) { return v[a] > v[b] || (v[a] == v[b] && a < b); });
  double step = 2.0 * std::pow(static_cast<double>(n_dirs), -1.0 / (d - 1));
  std::vector<double> refined(static_cast<size_t>(k));
  parallel_for(static_cast<size_t>(k), [&](size_t i) {
    Vec u = sphere_nelder_mead([&](const Vec& w) { return -f(w); }, dirs[ord[i]], step, 200, 1e-15);
    refined[i] = std::max(f(u), v[ord[i]]);
  });
  return std::max(0.0, *std::max_element(refined.begin(), refined.end()));
}

}  // namespace

double hausdorff_inner(const Polytope& P, const Body& K, double tol, int n_dirs) {
  for (int i = 0; i < P.num_vertices(); ++i)
    if (!K.contains(Vec(P.vertex(i)), tol)) throw GeometryError(ErrorCode::NotNested, "polytope vertex outside the body");
  return support_gap(P, K, -1.0, n_dirs);
}

double hausdorff_outer(const Polytope& P, const Body& K, int n_dirs) { return support_gap(P, K, 1.0, n_dirs); }

ScalingFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw GeometryError(ErrorCode::ConfigError, "fit needs two or more points");
  ScalingFit fit;
  fit.n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw GeometryError(ErrorCode::ConfigError, "log fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    sx += lx.back();
    sy += ly.back();
  }
  const double n = fit.n;
  double mx = sx / n, my = sy / n;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0)) throw GeometryError(ErrorCode::ConfigError, "fit needs distinct x values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += r * r;
    ss_tot += (ly[i] - my) * (ly[i] - my);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::string csv_header() { return "body,dim,eps,method,seed,vertices,total_faces,hausdorff,runtime_ms"; }

std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << csv_header() << '\n';
  for (const ExperimentRow& r : rows) {
    if (!r.error.empty()) continue;
    os << r.body << ',' << r.dim << ',' << r.eps << ',' << r.method << ',' << r.seed << ',' << r.vertices << ','
       << r.total_faces << ',' << r.hausdorff << ',' << r.runtime_ms << '\n';
  }
  return os.str();
}

std::vector<ExperimentRow> parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<ExperimentRow> rows;
  if (!std::getline(is, line) || line != csv_header()) throw GeometryError(ErrorCode::IOError, "unexpected CSV header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw GeometryError(ErrorCode::IOError, "CSV row needs 9 fields");
    try {
      ExperimentRow r;
      r.body = f[0];
      r.dim = std::stoi(f[1]);
      r.eps = std::stod(f[2]);
      r.method = f[3];
      r.seed = std::stoull(f[4]);
      r.vertices = std::stol(f[5]);
      r.total_faces = std::stol(f[6]);
      r.hausdorff = std::stod(f[7]);
      r.runtime_ms = std::stod(f[8]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw GeometryError(ErrorCode::IOError, "malformed CSV field");
    }
  }
  return rows;
}

std::string to_svg(const std::vector<ExperimentRow>& rows) {
  const double W = 800, H = 600, ml = 70, mr = 200, mt = 30, mb = 50;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const ExperimentRow& r : rows) {
    if (!r.error.empty() || r.total_faces <= 0 || r.eps <= 0) continue;
    double x = std::log10(1.0 / r.eps), y = std::log10(static_cast<double>(r.total_faces));
    series[r.body + " d=" + std::to_string(r.dim) + " " + r.method].emplace_back(x, y);
    x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  if (series.empty()) {
    os << "<text x=\"400\" y=\"300\" text-anchor=\"middle\">no data</text>\n</svg>\n";
    return os.str();
  }
  if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
  x0 = std::floor(x0 * 10) / 10, x1 = std::ceil(x1 * 10) / 10;
  y0 = std::floor(y0), y1 = std::ceil(y1);
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(y0); e <= static_cast<int>(y1); ++e)
    os << "<text x=\"" << ml - 8 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\" font-size=\"12\">1e" << e << "</text>\n";
  for (double x = x0; x <= x1 + 1e-9; x += 0.5)
    os << "<text x=\"" << px(x) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\" font-size=\"12\">"
       << std::pow(10.0, x) << "</text>\n";
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"13\">1/eps</text>\n";
  os << "<text x=\"18\" y=\"" << H / 2 << "\" transform=\"rotate(-90 18 " << H / 2
     << ")\" text-anchor=\"middle\" font-size=\"13\">total faces</text>\n";
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  int k = 0;
  for (const auto& [name, pts] : series) {
    const char* col = colors[k % 8];
    for (auto [x, y] : pts) os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    std::string label = name;
    if (pts.size() >= 2) {
      std::vector<double> xs, ys;
      for (auto [x, y] : pts) xs.push_back(std::pow(10.0, x)), ys.push_back(std::pow(10.0, y));
      try {
        ScalingFit f = fit_loglog(xs, ys);
        double a = f.intercept / std::log(10.0);
        double lo = std::log10(*std::min_element(xs.begin(), xs.end())), hi = std::log10(*std::max_element(xs.begin(), xs.end()));
        os << "<line x1=\"" << px(lo) << "\" y1=\"" << py(a + f.slope * lo) << "\" x2=\"" << px(hi) << "\" y2=\""
           << py(a + f.slope * hi) << "\" stroke=\"" << col << "\"/>\n";
        std::ostringstream s;
        s.precision(3);
        s << name << " (slope " << f.slope << ")";
        label = s.str();
      } catch (const GeometryError&) {
      }
    }
    os << "<text x=\"" << W - mr + 10 << "\" y=\"" << mt + 16 * k + 10 << "\" font-size=\"11\" fill=\"" << col << "\">" << label
       << "</text>\n";
    ++k;
  }
  os << "</svg>\n";
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw GeometryError(ErrorCode::IOError, "cannot open " + path);
  f << text;
  if (!f) throw GeometryError(ErrorCode::IOError, "write failed for " + path);
}

}  // namespace capcover
