#include <limits>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "symm/kdtree.hpp"

namespace {

using namespace symm;

Neighbor linear_scan(const PointCloud& cloud, const Point3& q) {
  Neighbor best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double d2 = (q - cloud[i]).squaredNorm();
    if (d2 < best.squared_distance) best = {i, d2};
  }
  return best;
}

TEST(KdTree, MatchesLinearScan) {
  fixture::Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cloud = fixture::random_cloud(rng, 1 + trial * 37);
    const KdTree tree(cloud);
    for (int k = 0; k < 50; ++k) {
      const Point3 q = fixture::random_point(rng, -1.5, 1.5);
      const Neighbor expect = linear_scan(cloud, q);
      const Neighbor got = tree.nearest(q);
      EXPECT_EQ(got.index, expect.index);
      EXPECT_EQ(got.squared_distance, expect.squared_distance);
      const Neighbor hinted = tree.nearest(q, static_cast<std::size_t>(k) % cloud.size());
      EXPECT_EQ(hinted.index, expect.index);
    }
  }
}

TEST(KdTree, TiesResolveToLowestIndex) {
  // Duplicates and equidistant points on a lattice.
  PointCloud cloud;
  for (int rep = 0; rep < 3; ++rep) {
    for (int x = -2; x <= 2; ++x) {
      for (int y = -2; y <= 2; ++y) cloud.push_back({double(x), double(y), 0.0});
    }
  }
  const KdTree tree(cloud, 2);
  for (int x = -2; x <= 2; ++x) {
    for (int y = -2; y <= 2; ++y) {
      const Point3 q(x + 0.5, y + 0.5, 0.0);
      EXPECT_EQ(tree.nearest(q).index, linear_scan(cloud, q).index);
      EXPECT_EQ(tree.nearest(q, cloud.size() - 1).index, linear_scan(cloud, q).index);
    }
  }
}

TEST(KdTree, CoincidentPoints) {
  const PointCloud cloud{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1},
                         {1, 1, 1}, {1, 1, 1}};
  const KdTree tree(cloud, 1);
  EXPECT_EQ(tree.nearest({0, 0, 0}).index, 0u);
}

}  // namespace
