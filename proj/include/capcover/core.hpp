#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace capcover {

// Fixed upper capacity keeps small vectors off the heap. d <= 5, one spare slot.
constexpr int kMaxDim = 6;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using Points = std::vector<Vec>;

enum class ErrorCode {
  DegenerateInput,
  Unbounded,
  NotConverged,
  OutsideBody,
  OriginQuery,
  DepthTooLarge,
  WidthTooLarge,
  BoundaryPoint,
  EpsilonTooLarge,
  CenterNotInterior,
  OriginPolar,
  GeometryInvalid,
  ConstantsInfeasible,
  NotNested,
  ConfigError,
  IOError,
  DimensionUnsupported,
};

const char* error_name(ErrorCode c);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Dimensions accepted by the public API. Internal (d-1)-dimensional slices may use 1.
void check_dim(int d);

// {x : <normal, x> <= offset}, normal of unit length.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  Halfspace() = default;
  Halfspace(const Vec& n, double b);  // normalizes
  double eval(const Vec& x) const { return normal.dot(x) - offset; }
};

class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(const Mat& linear, const Vec& translation);

  static AffineMap identity(int d);
  static AffineMap scaling(int d, double s);

  int dim() const { return static_cast<int>(linear_.rows()); }
  const Mat& linear() const { return linear_; }
  const Vec& translation() const { return translation_; }
  const Mat& linear_inverse() const { return inverse_; }
  double det() const { return det_; }

  Vec apply(const Vec& x) const { return linear_ * x + translation_; }
  Vec apply_inverse(const Vec& y) const { return inverse_ * (y - translation_); }
  Vec apply_linear(const Vec& v) const { return linear_ * v; }

  AffineMap inverse() const;
  // (*this) after `first`: x -> this(first(x))
  AffineMap compose(const AffineMap& first) const;

 private:
  Mat linear_;
  Vec translation_;
  Mat inverse_;
  double det_ = 1.0;
};

inline Vec zeros(int d) { return Vec::Zero(d); }
inline Vec unit(int d, int i) {
  Vec v = Vec::Zero(d);
  v[i] = 1.0;
  return v;
}

// Orthonormal basis of the complement of unit vector u, as rows of a (d-1) x d matrix.
Mat complement_basis(const Vec& u);

// Rotation R with R u = e_{d-1} (the "vertical" axis).
Mat rotation_to_vertical(const Vec& u);

double unit_ball_volume(int d);

}  // namespace capcover
