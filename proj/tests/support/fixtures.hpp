#pragma once

// Synthetic clouds with known symmetry, shared by unit and acceptance tests.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "symm/geometry.hpp"
#include "symm/io.hpp"

namespace symm::fixture {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Point3 random_point(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

inline PointCloud random_cloud(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<Point3> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(random_point(rng, lo, hi));
  return PointCloud(std::move(pts));
}

inline Point3 random_unit(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Point3 v(g(rng), g(rng), g(rng));
    const double n = v.norm();
    if (n > 1e-6) return v / n;
  }
}

inline Matrix3 random_rotation(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline SymmetryPlane random_plane(Rng& rng, double offset_range = 1.0) {
  return SymmetryPlane::make(random_unit(rng), uniform(rng, -offset_range, offset_range));
}

inline PointCloud cube_corners(double half = 1.0) {
  PointCloud c;
  for (int i = 0; i < 8; ++i) {
    c.push_back({(i & 1) ? half : -half, (i & 2) ? half : -half, (i & 4) ? half : -half});
  }
  return c;
}

inline PointCloud half_cube_corners(double half = 1.0) {
  PointCloud c;
  for (const auto& p : cube_corners(half)) {
    if (p.x() > 0) c.push_back(p);
  }
  return c;
}

/// A point in the x >= 0 half of a stylized chair: seat slab, backrest at
/// z < 0, and two legs. Only x = 0 is a mirror plane of the full shape.
inline Point3 chair_half_point(Rng& rng) {
  struct Box {
    Point3 lo, hi;
    double weight;
  };
  static const std::array<Box, 4> boxes{{
      {{0.0, 0.40, -0.45}, {0.45, 0.50, 0.45}, 0.40},    // seat
      {{0.0, 0.50, -0.45}, {0.45, 1.25, -0.35}, 0.30},   // backrest
      {{0.35, 0.0, 0.33}, {0.43, 0.40, 0.41}, 0.15},     // front leg
      {{0.35, 0.0, -0.43}, {0.43, 0.40, -0.35}, 0.15},   // back leg
  }};
  double pick = uniform(rng, 0.0, 1.0);
  const Box* box = &boxes.back();
  for (const auto& b : boxes) {
    if (pick < b.weight) {
      box = &b;
      break;
    }
    pick -= b.weight;
  }
  return {uniform(rng, box->lo.x(), box->hi.x()), uniform(rng, box->lo.y(), box->hi.y()),
          uniform(rng, box->lo.z(), box->hi.z())};
}

struct MirroredCloud {
  PointCloud cloud;
  SymmetryPlane plane;
};

/// Mirrors `half` across x = 0, then applies a random rotation and
/// translation. The returned plane is the moved mirror plane, which passes
/// through the centroid. Optional per-point Gaussian noise is added last.
inline MirroredCloud place_mirrored(std::vector<Point3> half, Rng& rng, double noise_sigma) {
  const std::size_t n = half.size();
  for (std::size_t i = 0; i < n; ++i) half.push_back({-half[i].x(), half[i].y(), half[i].z()});
  const Matrix3 rot = random_rotation(rng);
  const Point3 shift = random_point(rng, -0.5, 0.5);
  std::normal_distribution<double> noise(0.0, noise_sigma > 0 ? noise_sigma : 1.0);
  std::vector<Point3> pts;
  pts.reserve(half.size());
  for (const auto& p : half) {
    Point3 q = rot * p + shift;
    if (noise_sigma > 0) q += Point3(noise(rng), noise(rng), noise(rng));
    pts.push_back(q);
  }
  // The mirror plane x = 0 moves to normal rot*e_x through rot*0 + shift.
  const SymmetryPlane plane = SymmetryPlane::through(rot * Point3::UnitX(), shift);
  return {PointCloud(std::move(pts)), plane};
}

/// `n_total` points (even) from a chair mirrored across x = 0, randomly placed.
inline MirroredCloud mirrored_chair(Rng& rng, std::size_t n_total, double noise_sigma = 0.0) {
  std::vector<Point3> half;
  half.reserve(n_total);
  for (std::size_t i = 0; i < n_total / 2; ++i) half.push_back(chair_half_point(rng));
  return place_mirrored(std::move(half), rng, noise_sigma);
}

/// Half of a random anisotropic Gaussian mixture on x > 0, mirrored and
/// randomly placed. Generic cluster layouts have no second mirror plane.
inline MirroredCloud mirrored_blob(Rng& rng, std::size_t n_total, double noise_sigma = 0.0) {
  struct Cluster {
    Point3 center, sigma;
  };
  std::vector<Cluster> clusters(5);
  for (auto& c : clusters) {
    c.center = {uniform(rng, 0.1, 0.45), uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4)};
    c.sigma = {uniform(rng, 0.02, 0.08), uniform(rng, 0.02, 0.12), uniform(rng, 0.02, 0.12)};
  }
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Point3> half;
  half.reserve(n_total);
  for (std::size_t i = 0; i < n_total / 2; ++i) {
    const auto& c = clusters[i % clusters.size()];
    Point3 p = c.center + c.sigma.cwiseProduct(Point3(g(rng), g(rng), g(rng)));
    p.x() = std::abs(p.x());
    half.push_back(p);
  }
  return place_mirrored(std::move(half), rng, noise_sigma);
}

inline Point3 sphere_point(Rng& rng, double radius) { return random_unit(rng) * radius; }

inline PointCloud sphere_surface(Rng& rng, std::size_t n, double radius = 0.5) {
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(sphere_point(rng, radius));
  return c;
}

/// Samples of the x > 0 hemisphere surface.
inline PointCloud hemisphere_surface(Rng& rng, std::size_t n, double radius = 0.5) {
  PointCloud c;
  while (c.size() < n) {
    Point3 p = sphere_point(rng, radius);
    if (p.x() < 0) p.x() = -p.x();
    c.push_back(p);
  }
  return c;
}

/// Axis-aligned cube surface centered at the origin, 12 triangles.
inline TriangleMesh cube_mesh(double half = 0.5) {
  TriangleMesh m;
  for (const auto& p : cube_corners(half)) m.vertices.push_back(p);
  // Corner index bits: 1 -> +x, 2 -> +y, 4 -> +z.
  m.faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
             {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

inline PointCloud keep_positive_x(const PointCloud& cloud) {
  PointCloud out;
  for (const auto& p : cloud) {
    if (p.x() > 0) out.push_back(p);
  }
  return out;
}

}  // namespace symm::fixture
