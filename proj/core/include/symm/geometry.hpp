#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace symm {

using Point3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

bool is_finite(const Point3& p) noexcept;

/// Ordered, index-addressable set of finite 3D points.
///
/// Construction and `push_back` reject NaN/Inf with `ErrorCode::NonFinite`.
/// Emptiness is allowed at the type level so clouds can be built
/// incrementally; operations that need points check for it themselves.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point3> points);
  PointCloud(std::initializer_list<Point3> points);

  void push_back(const Point3& p);
  void reserve(std::size_t n) { points_.reserve(n); }

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  const Point3& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point3> points() const noexcept { return points_; }

  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  Point3 centroid() const;

  friend bool operator==(const PointCloud& a, const PointCloud& b);

 private:
  std::vector<Point3> points_;
};

/// Plane n^T x + d = 0 with unit normal.
///
/// The normal is normalized at construction (offset rescaled by the same
/// factor) and its sign canonicalized so the first nonzero component is
/// positive; n and -n therefore compare equal as planes.
class SymmetryPlane {
 public:
  /// Throws ZeroNormal if |normal| < 1e-12, NonFinite on NaN/Inf.
  static SymmetryPlane make(const Point3& normal, double offset);

  /// Plane with the given normal passing through `point`.
  static SymmetryPlane through(const Point3& normal, const Point3& point);

  const Point3& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }

  double signed_distance(const Point3& p) const noexcept { return normal_.dot(p) + offset_; }

  friend bool operator==(const SymmetryPlane&, const SymmetryPlane&) = default;

 private:
  SymmetryPlane(const Point3& n, double d) : normal_(n), offset_(d) {}

  Point3 normal_;
  double offset_ = 0.0;
};

/// Affine mirror p* = R p + t with R = I - 2 n n^T and t = -2 d n.
struct ReflectionTransform {
  Matrix3 linear;
  Point3 translation;

  Point3 apply(const Point3& p) const { return linear * p + translation; }
};

ReflectionTransform reflection_matrix(const SymmetryPlane& plane);

/// p - 2 (n^T p + d) n. Points on the plane are returned unchanged.
Point3 reflect_point(const SymmetryPlane& plane, const Point3& p);

PointCloud reflect_cloud(const SymmetryPlane& plane, const PointCloud& cloud);

/// Angle in radians between two plane normals, ignoring orientation.
double normal_angle(const Point3& a, const Point3& b);

}  // namespace symm
