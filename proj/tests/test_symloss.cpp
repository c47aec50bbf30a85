#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "symm/error.hpp"
#include "symm/symloss.hpp"

namespace {

using namespace symm;

TEST(DualLoss, SymmetricGroundTruthWithTruePlaneIsZero) {
  fixture::Rng rng(1);
  const auto m = fixture::mirrored_chair(rng, 256);
  const auto loss = dual_loss(m.cloud, m.plane, m.cloud);
  EXPECT_EQ(loss.recon, 0.0);
  EXPECT_NEAR(loss.sym, 0.0, 1e-9);
  EXPECT_NEAR(loss.total, 0.0, 1e-9);
}

TEST(DualLoss, MisalignedPlaneOnlyActivatesSymmetryTerm) {
  fixture::Rng rng(2);
  const auto m = fixture::mirrored_chair(rng, 256);
  const auto bad = SymmetryPlane::make(m.plane.normal() + Point3(0.3, -0.2, 0.4), m.plane.offset());
  const auto loss = dual_loss(m.cloud, bad, m.cloud);
  EXPECT_EQ(loss.recon, 0.0);
  EXPECT_GT(loss.sym, 1e-3);
  EXPECT_EQ(loss.total, loss.recon + loss.sym);
}

TEST(DualLoss, ComposesIndependentChamfers) {
  fixture::Rng rng(3);
  const auto plane = SymmetryPlane::make({1, 0, 0}, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = fixture::random_cloud(rng, 32);
    const auto gt = fixture::random_cloud(rng, 32);
    for (auto mode : {ChamferMode::Squared, ChamferMode::Euclidean}) {
      const bool squared = mode == ChamferMode::Squared;
      const auto loss = dual_loss(p, plane, gt, mode);
      PointCloud mirrored;
      for (const auto& x : p) mirrored.push_back({-x.x(), x.y(), x.z()});
      const double expected = oracle::chamfer(p, gt, squared) + oracle::chamfer(mirrored, gt, squared);
      EXPECT_NEAR(loss.total, expected, 1e-12);
      EXPECT_GE(loss.total, loss.recon);
    }
  }
}

TEST(DualLoss, WeightScalesSymmetryTerm) {
  fixture::Rng rng(4);
  const auto p = fixture::random_cloud(rng, 32);
  const auto gt = fixture::random_cloud(rng, 32);
  const auto plane = fixture::random_plane(rng);
  const auto unweighted = dual_loss(p, plane, gt);
  const auto ablated = dual_loss(p, plane, gt, ChamferMode::Squared, 0.0);
  const auto doubled = dual_loss(p, plane, gt, ChamferMode::Squared, 2.0);
  EXPECT_EQ(ablated.total, unweighted.recon);
  EXPECT_EQ(doubled.total, unweighted.recon + 2.0 * unweighted.sym);
  EXPECT_THROW(dual_loss(p, plane, gt, ChamferMode::Squared, -1.0), Error);
}

TEST(SymmetryResidual, Examples) {
  EXPECT_EQ(symmetry_residual(fixture::cube_corners(), SymmetryPlane::make({1, 0, 0}, 0)), 0.0);
  EXPECT_GT(symmetry_residual(fixture::cube_corners(), SymmetryPlane::make({1, 0, 0}, -0.3)), 0.0);
  EXPECT_EQ(symmetry_residual(PointCloud{{1, 0, 0}, {-1, 0, 0}}, SymmetryPlane::make({1, 0, 0}, 0)), 0.0);
}

TEST(SymmetryResidual, InvariantUnderReflectingInput) {
  fixture::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = fixture::random_cloud(rng, 60);
    const auto plane = fixture::random_plane(rng, 0.5);
    const double a = symmetry_residual(p, plane);
    const double b = symmetry_residual(reflect_cloud(plane, p), plane);
    EXPECT_NEAR(a, b, 1e-9);
  }
}

}  // namespace
