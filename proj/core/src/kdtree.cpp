#include "symm/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "symm/error.hpp"

namespace symm {

KdTree::KdTree(std::span<const Point3> points, std::size_t leaf_size)
    : leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  if (points.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::TooLarge, "kd-tree supports fewer than 2^32 points");
  }
  indices_.resize(points.size());
  std::iota(indices_.begin(), indices_.end(), std::size_t{0});
  if (!points.empty()) {
    // Build over an index permutation, then gather points into tree order.
    points_.assign(points.begin(), points.end());
    nodes_.reserve(2 * points.size() / leaf_size_ + 1);
    build(0, static_cast<std::uint32_t>(points.size()));
    std::vector<Point3> ordered(points.size());
    for (std::size_t i = 0; i < indices_.size(); ++i) ordered[i] = points[indices_[i]];
    points_ = std::move(ordered);
    position_.resize(indices_.size());
    for (std::size_t i = 0; i < indices_.size(); ++i) position_[indices_[i]] = i;
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= leaf_size_) return id;

  Point3 lo = Point3::Constant(std::numeric_limits<double>::infinity());
  Point3 hi = -lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[indices_[i]]);
    hi = hi.cwiseMax(points_[indices_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (hi[axis] == lo[axis]) return id;  // all coincident: keep as leaf

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(indices_.begin() + begin, indices_.begin() + mid, indices_.begin() + end,
                   [&](std::size_t a, std::size_t b) { return points_[a][axis] < points_[b][axis]; });
  const double split = points_[indices_[mid]][axis];

  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

Neighbor KdTree::nearest(const Point3& query) const {
  if (points_.empty()) throw Error(ErrorCode::EmptyCloud, "nearest-neighbor query on an empty tree");
  Neighbor best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
  search(0, query, best);
  return best;
}

Neighbor KdTree::nearest(const Point3& query, std::size_t hint) const {
  if (hint >= position_.size()) return nearest(query);
  Neighbor best{hint, (query - points_[position_[hint]]).squaredNorm()};
  search(0, query, best);
  return best;
}

void KdTree::search(std::int32_t id, const Point3& q, Neighbor& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.axis < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const double d2 = (q - points_[i]).squaredNorm();
      if (d2 < best.squared_distance || (d2 == best.squared_distance && indices_[i] < best.index)) {
        best = {indices_[i], d2};
      }
    }
    return;
  }
  const double delta = q[node.axis] - node.split;
  const std::int32_t near = delta < 0.0 ? node.left : node.right;
  const std::int32_t far = delta < 0.0 ? node.right : node.left;
  search(near, q, best);
  // Equality still descends: an equidistant point may hold a lower index.
  if (delta * delta <= best.squared_distance) search(far, q, best);
}

}  // namespace symm
