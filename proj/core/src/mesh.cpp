#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Geometry>

#include "symm/error.hpp"
#include "symm/io.hpp"

namespace symm {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void TriangleMesh::validate() const {
  for (const auto& v : vertices) {
    if (!is_finite(v)) throw Error(ErrorCode::ParseError, "mesh vertex is not finite");
  }
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (const auto idx : faces[f]) {
      if (idx >= vertices.size()) {
        throw Error(ErrorCode::ParseError, "face " + std::to_string(f) + " references vertex " +
                                               std::to_string(idx) + " of " + std::to_string(vertices.size()));
      }
    }
  }
}

double TriangleMesh::area(std::size_t face) const {
  const auto& [a, b, c] = faces[face];
  return 0.5 * (vertices[b] - vertices[a]).cross(vertices[c] - vertices[a]).norm();
}

PointCloud sample_mesh(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::NonPositive, "sample count must be at least 1");
  mesh.validate();

  std::vector<double> cumulative;
  cumulative.reserve(mesh.faces.size());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    total += mesh.area(f);
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw Error(ErrorCode::NoSurface, "mesh has no face with positive area");

  std::mt19937_64 rng(seed);
  std::vector<Point3> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // upper_bound never lands on a zero-area face: its cumulative value equals its predecessor's.
    const double pick = uniform01(rng) * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    const std::size_t f = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                                mesh.faces.size() - 1);
    const auto& [ia, ib, ic] = mesh.faces[f];
    const double s = std::sqrt(uniform01(rng));
    const double t = uniform01(rng);
    points.push_back((1.0 - s) * mesh.vertices[ia] + s * (1.0 - t) * mesh.vertices[ib] +
                     s * t * mesh.vertices[ic]);
  }
  return PointCloud(std::move(points));
}

std::string_view to_string(NormalizationConvention convention) noexcept {
  return convention == NormalizationConvention::UnitCube ? "unit_cube" : "unit_sphere";
}

NormalizationConvention parse_normalization(std::string_view text) {
  if (text == "unit_cube") return NormalizationConvention::UnitCube;
  if (text == "unit_sphere") return NormalizationConvention::UnitSphere;
  throw Error(ErrorCode::ParseError, "unknown normalization '" + std::string(text) + "'");
}

PointCloud NormalizationRecord::apply(const PointCloud& cloud) const {
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) out.push_back((p - center) / scale);
  return PointCloud(std::move(out));
}

PointCloud NormalizationRecord::invert(const PointCloud& cloud) const {
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) out.push_back(p * scale + center);
  return PointCloud(std::move(out));
}

std::pair<PointCloud, NormalizationRecord> normalize(const PointCloud& cloud,
                                                     NormalizationConvention convention) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "cannot normalize an empty cloud");
  NormalizationRecord record;
  record.convention = convention;
  if (convention == NormalizationConvention::UnitCube) {
    Point3 lo = cloud[0];
    Point3 hi = cloud[0];
    for (const auto& p : cloud) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    record.center = 0.5 * (lo + hi);
    const double extent = (hi - lo).maxCoeff();
    record.scale = extent > 0.0 ? extent : 1.0;
  } else {
    record.center = cloud.centroid();
    double radius = 0.0;
    for (const auto& p : cloud) radius = std::max(radius, (p - record.center).norm());
    if (!(radius > 0.0)) throw Error(ErrorCode::DegenerateCloud, "all points coincide; no radius to normalize");
    record.scale = radius;
  }
  return {record.apply(cloud), record};
}

}  // namespace symm
