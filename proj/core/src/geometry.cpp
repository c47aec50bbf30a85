#include "symm/geometry.hpp"

#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "symm/error.hpp"

namespace symm {

namespace {

void require_finite(const Point3& p, const char* what) {
  if (!is_finite(p)) {
    throw Error(ErrorCode::NonFinite, std::string(what) + " has a non-finite component");
  }
}

}  // namespace

bool is_finite(const Point3& p) noexcept {
  return std::isfinite(p.x()) && std::isfinite(p.y()) && std::isfinite(p.z());
}

PointCloud::PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
  for (const auto& p : points_) require_finite(p, "point");
}

PointCloud::PointCloud(std::initializer_list<Point3> points) : points_(points) {
  for (const auto& p : points_) require_finite(p, "point");
}

void PointCloud::push_back(const Point3& p) {
  require_finite(p, "point");
  points_.push_back(p);
}

Point3 PointCloud::centroid() const {
  if (points_.empty()) throw Error(ErrorCode::EmptyCloud, "centroid of an empty cloud");
  Point3 sum = Point3::Zero();
  for (const auto& p : points_) sum += p;
  return sum / static_cast<double>(points_.size());
}

bool operator==(const PointCloud& a, const PointCloud& b) {
  return a.points_ == b.points_;
}

SymmetryPlane SymmetryPlane::make(const Point3& normal, double offset) {
  require_finite(normal, "plane normal");
  if (!std::isfinite(offset)) throw Error(ErrorCode::NonFinite, "plane offset is not finite");
  const double len = normal.norm();
  if (len < 1e-12) throw Error(ErrorCode::ZeroNormal, "plane normal has near-zero length");

  Point3 n = normal / len;
  double d = offset / len;
  for (int i = 0; i < 3; ++i) {
    if (n[i] != 0.0) {
      if (n[i] < 0.0) {
        n = -n;
        d = -d;
      }
      break;
    }
  }
  // -0.0 would break bitwise equality of otherwise identical planes.
  for (int i = 0; i < 3; ++i) {
    if (n[i] == 0.0) n[i] = 0.0;
  }
  if (d == 0.0) d = 0.0;
  return SymmetryPlane(n, d);
}

SymmetryPlane SymmetryPlane::through(const Point3& normal, const Point3& point) {
  require_finite(point, "anchor point");
  const SymmetryPlane unit = make(normal, 0.0);
  return make(unit.normal(), -unit.normal().dot(point));
}

ReflectionTransform reflection_matrix(const SymmetryPlane& plane) {
  const Point3& n = plane.normal();
  ReflectionTransform t;
  t.linear = Matrix3::Identity() - 2.0 * n * n.transpose();
  t.translation = -2.0 * plane.offset() * n;
  return t;
}

Point3 reflect_point(const SymmetryPlane& plane, const Point3& p) {
  require_finite(p, "point");
  const Point3& n = plane.normal();
  return p - 2.0 * (n.dot(p) + plane.offset()) * n;
}

PointCloud reflect_cloud(const SymmetryPlane& plane, const PointCloud& cloud) {
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) out.push_back(reflect_point(plane, p));
  return PointCloud(std::move(out));
}

double normal_angle(const Point3& a, const Point3& b) {
  const Point3 u = a.normalized();
  const Point3 v = b.normalized();
  return std::atan2(u.cross(v).norm(), std::abs(u.dot(v)));
}

}  // namespace symm
