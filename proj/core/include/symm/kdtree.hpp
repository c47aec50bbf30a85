#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "symm/geometry.hpp"

namespace symm {

struct Neighbor {
  std::size_t index = 0;
  double squared_distance = 0.0;
};

/// Static 3D kd-tree for exact nearest-neighbor queries.
///
/// Distances are computed as `(q - p).squaredNorm()`, the same expression the
/// brute-force paths use, so results are bit-identical to a linear scan.
/// Equidistant candidates resolve to the lowest original index.
class KdTree {
 public:
  explicit KdTree(std::span<const Point3> points, std::size_t leaf_size = 8);
  explicit KdTree(const PointCloud& cloud, std::size_t leaf_size = 8)
      : KdTree(cloud.points(), leaf_size) {}

  std::size_t size() const noexcept { return points_.size(); }

  /// Requires a nonempty tree.
  Neighbor nearest(const Point3& query) const;

  /// Same result as `nearest(query)`; seeding the search with a likely
  /// candidate (e.g. the previous answer for a nearby query) prunes faster.
  Neighbor nearest(const Point3& query, std::size_t hint) const;

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const Point3& q, Neighbor& best) const;

  std::vector<Point3> points_;        // tree order
  std::vector<std::size_t> indices_;  // tree order -> original index
  std::vector<std::size_t> position_;  // original index -> tree order
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
};

}  // namespace symm
