#include "capcover/core.hpp"

#include <cmath>

namespace capcover {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::OutsideBody: return "OutsideBody";
    case ErrorCode::OriginQuery: return "OriginQuery";
    case ErrorCode::DepthTooLarge: return "DepthTooLarge";
    case ErrorCode::WidthTooLarge: return "WidthTooLarge";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::CenterNotInterior: return "CenterNotInterior";
    case ErrorCode::OriginPolar: return "OriginPolar";
    case ErrorCode::GeometryInvalid: return "GeometryInvalid";
    case ErrorCode::ConstantsInfeasible: return "ConstantsInfeasible";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::DimensionUnsupported: return "DimensionUnsupported";
  }
  return "Unknown";
}

void check_dim(int d) {
  if (d < 2 || d > 5)
    throw GeometryError(ErrorCode::DimensionUnsupported, "dimension " + std::to_string(d) + " outside [2,5]");
}

Halfspace::Halfspace(const Vec& n, double b) {
  double len = n.norm();
  if (!(len > 0.0)) throw GeometryError(ErrorCode::GeometryInvalid, "zero halfspace normal");
  normal = n / len;
  offset = b / len;
}

AffineMap::AffineMap(const Mat& linear, const Vec& translation) : linear_(linear), translation_(translation) {
  det_ = linear_.determinant();
  if (!(std::abs(det_) > 1e-12)) throw GeometryError(ErrorCode::GeometryInvalid, "singular affine map");
  inverse_ = linear_.inverse();
}

AffineMap AffineMap::identity(int d) { return AffineMap(Mat::Identity(d, d), Vec::Zero(d)); }

AffineMap AffineMap::scaling(int d, double s) { return AffineMap(s * Mat::Identity(d, d), Vec::Zero(d)); }

AffineMap AffineMap::inverse() const { return AffineMap(inverse_, -(inverse_ * translation_)); }

AffineMap AffineMap::compose(const AffineMap& first) const {
  return AffineMap(linear_ * first.linear_, linear_ * first.translation_ + translation_);
}

Mat complement_basis(const Vec& u) {
  const int d = static_cast<int>(u.size());
  // Householder reflection mapping u to e_0; its remaining rows span u-perp.
  Vec v = u;
  double s = u[0] >= 0 ? 1.0 : -1.0;
  v[0] += s * u.norm();
  Mat H = Mat::Identity(d, d);
  double vv = v.squaredNorm();
  if (vv > 0) H -= 2.0 * v * v.transpose() / vv;
  Mat B(d - 1, d);
  for (int i = 1; i < d; ++i) B.row(i - 1) = H.row(i);
  return B;
}

Mat rotation_to_vertical(const Vec& u) {
  const int d = static_cast<int>(u.size());
  Mat B = complement_basis(u);
  Mat R(d, d);
  for (int i = 0; i < d - 1; ++i) R.row(i) = B.row(i);
  R.row(d - 1) = u.transpose() / u.norm();
  if (R.determinant() < 0 && d > 1) R.row(0) = -R.row(0);
  return R;
}

double unit_ball_volume(int d) { return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0); }

}  // namespace capcover
