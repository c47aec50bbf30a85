#include <cmath>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "symm/error.hpp"
#include "symm/metrics.hpp"

namespace {

using namespace symm;

template <typename Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::IoError;
}

TEST(Chamfer, SelfDistanceIsZero) {
  fixture::Rng rng(1);
  const auto p = fixture::random_cloud(rng, 50);
  EXPECT_EQ(chamfer(p, p), 0.0);
  EXPECT_EQ(chamfer_accel(p, p), 0.0);
  EXPECT_EQ(chamfer_accel(p, p, ChamferMode::Euclidean), 0.0);
}

TEST(Chamfer, SinglePair) {
  const PointCloud p{{0, 0, 0}};
  const PointCloud q{{1, 0, 0}};
  EXPECT_EQ(chamfer(p, q), 2.0);
  EXPECT_EQ(chamfer_accel(p, q), 2.0);
}

TEST(Chamfer, TwoToOne) {
  // Exhaustive nearest neighbours: P->Q terms (1, 1), Q->P term min(1, 1) = 1.
  const PointCloud p{{0, 0, 0}, {2, 0, 0}};
  const PointCloud q{{1, 0, 0}};
  const double expected = oracle::chamfer(p, q);
  EXPECT_EQ(expected, 2.0);
  EXPECT_EQ(chamfer(p, q), expected);
  EXPECT_EQ(chamfer_accel(p, q), expected);
}

TEST(Chamfer, TranslatedTwin) {
  // Unit-spaced lattice shifted by 0.1: every nearest neighbour is the twin.
  PointCloud p;
  PointCloud q;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        p.push_back({double(i), double(j), double(k)});
        q.push_back({i + 0.1, double(j), double(k)});
      }
    }
  }
  const double oracle_value = oracle::chamfer(p, q);
  EXPECT_NEAR(oracle_value, 0.02, 1e-15);
  EXPECT_NEAR(chamfer_accel(p, q), 0.02, 1e-15);
}

TEST(Chamfer, AccelMatchesBruteForceOnRandomPairs) {
  fixture::Rng rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = fixture::random_cloud(rng, 1 + rng() % 300);
    const auto q = fixture::random_cloud(rng, 1 + rng() % 300);
    for (auto mode : {ChamferMode::Squared, ChamferMode::Euclidean}) {
      const double brute = chamfer(p, q, mode);
      EXPECT_NEAR(chamfer_accel(p, q, mode), brute, 1e-9);
      EXPECT_NEAR(oracle::chamfer(p, q, mode == ChamferMode::Squared), brute, 1e-12);
    }
  }
}

TEST(Chamfer, SymmetricExactly) {
  fixture::Rng rng(3);
  const auto p = fixture::random_cloud(rng, 77);
  const auto q = fixture::random_cloud(rng, 31);
  EXPECT_EQ(chamfer_accel(p, q), chamfer_accel(q, p));
  EXPECT_EQ(chamfer(p, q, ChamferMode::Euclidean), chamfer(q, p, ChamferMode::Euclidean));
}

TEST(Chamfer, ScaleBehaviour) {
  fixture::Rng rng(4);
  const auto p = fixture::random_cloud(rng, 40);
  const auto q = fixture::random_cloud(rng, 60);
  const double s = 3.0;
  PointCloud sp, sq;
  for (const auto& x : p) sp.push_back(s * x);
  for (const auto& x : q) sq.push_back(s * x);
  EXPECT_NEAR(chamfer_accel(sp, sq), s * s * chamfer_accel(p, q), 1e-12);
  EXPECT_NEAR(chamfer_accel(sp, sq, ChamferMode::Euclidean), s * chamfer_accel(p, q, ChamferMode::Euclidean),
              1e-12);
  const auto p40 = fixture::random_cloud(rng, 40);
  PointCloud sp40;
  for (const auto& x : p40) sp40.push_back(s * x);
  EXPECT_NEAR(emd_exact(sp, sp40).value, s * emd_exact(p, p40).value, 1e-12);
  EXPECT_EQ(fscore(sp, sq, s * 0.3), fscore(p, q, 0.3));
}

TEST(Chamfer, Errors) {
  const PointCloud empty;
  const PointCloud one{{0, 0, 0}};
  EXPECT_EQ(error_of([&] { chamfer(empty, one); }), ErrorCode::EmptyCloud);
  EXPECT_EQ(error_of([&] { chamfer_accel(one, empty); }), ErrorCode::EmptyCloud);
}

TEST(EmdExact, IdentityAndSwap) {
  fixture::Rng rng(5);
  const auto p = fixture::random_cloud(rng, 30);
  const auto self = emd_exact(p, p);
  EXPECT_EQ(self.value, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(self.plan.permutation[i], i);

  const PointCloud a{{0, 0, 0}, {1, 0, 0}};
  const PointCloud b{{1, 0, 0}, {0, 0, 0}};
  const auto swap = emd_exact(a, b);
  EXPECT_EQ(swap.value, 0.0);
  EXPECT_EQ(swap.plan.permutation, (std::vector<std::size_t>{1, 0}));
}

TEST(EmdExact, EqualsPermutationEnumeration) {
  fixture::Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const auto p = fixture::random_cloud(rng, n);
    const auto q = fixture::random_cloud(rng, n);
    const auto got = emd_exact(p, q);
    EXPECT_EQ(got.value, oracle::permutation_emd(p, q));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += (p[i] - q[got.plan.permutation[i]]).norm();
    EXPECT_NEAR(total, got.plan.total_cost, 1e-9);
  }
}

TEST(EmdExact, DominatesOneSidedChamferMean) {
  fixture::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = fixture::random_cloud(rng, 40);
    const auto q = fixture::random_cloud(rng, 40);
    const double emd = emd_exact(p, q).value;
    const KdTree tq(q);
    const KdTree tp(p);
    EXPECT_GE(emd + 1e-12, directed_chamfer(p.points(), tq, ChamferMode::Euclidean));
    EXPECT_GE(emd + 1e-12, directed_chamfer(q.points(), tp, ChamferMode::Euclidean));
  }
}

TEST(EmdExact, Errors) {
  fixture::Rng rng(8);
  const auto a = fixture::random_cloud(rng, 3);
  const auto b = fixture::random_cloud(rng, 4);
  EXPECT_EQ(error_of([&] { emd_exact(a, b); }), ErrorCode::SizeMismatch);
  const auto big = fixture::random_cloud(rng, 513);
  EXPECT_EQ(error_of([&] { emd_exact(big, big); }), ErrorCode::TooLarge);
  EXPECT_EQ(error_of([&] { emd_exact(a, a, 2); }), ErrorCode::TooLarge);
}

TEST(EmdApprox, SelfIsZero) {
  fixture::Rng rng(9);
  const auto p = fixture::random_cloud(rng, 100);
  for (double eps : {1e-4, 1e-2, 0.5, 10.0}) EXPECT_EQ(emd_approx(p, p, eps), 0.0);
}

TEST(EmdApprox, CloseToExact) {
  fixture::Rng rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = fixture::random_cloud(rng, 64);
    const auto q = fixture::random_cloud(rng, 64);
    const double exact = emd_exact(p, q).value;
    double previous_gap = std::numeric_limits<double>::infinity();
    for (double eps : {1e-1, 1e-2, 1e-4}) {
      const auto approx = emd_approx_plan(p, q, eps);
      EXPECT_GE(approx.value, exact - 1e-12);
      EXPECT_LE(approx.value - exact, approx.bound + 1e-12);
      EXPECT_LE(approx.value - exact, previous_gap + 1e-12 + approx.bound);
      previous_gap = approx.value - exact;
    }
    EXPECT_LE(std::abs(emd_approx(p, q, 1e-4) - exact), 1e-3);
  }
}

TEST(EmdApprox, Errors) {
  fixture::Rng rng(11);
  const auto a = fixture::random_cloud(rng, 3);
  const auto b = fixture::random_cloud(rng, 4);
  EXPECT_EQ(error_of([&] { emd_approx(a, b, 1e-3); }), ErrorCode::SizeMismatch);
  EXPECT_EQ(error_of([&] { emd_approx(a, a, 0.0); }), ErrorCode::NonPositive);
}

TEST(FScore, Examples) {
  fixture::Rng rng(12);
  const auto p = fixture::random_cloud(rng, 100);
  EXPECT_EQ(fscore(p, p, 0.01), 1.0);
  EXPECT_EQ(fscore(PointCloud{{0, 0, 0}}, PointCloud{{1, 0, 0}}, 0.01), 0.0);

  const PointCloud a{{0, 0, 0}, {0.005, 0, 0}};
  const PointCloud b{{0, 0, 0}, {5, 0, 0}};
  const auto parts = fscore_parts(a, b, 0.01);
  EXPECT_EQ(parts.precision, 1.0);
  EXPECT_EQ(parts.recall, 0.5);
  EXPECT_DOUBLE_EQ(parts.fscore, 2.0 / 3.0);
}

TEST(FScore, MatchesDoubleLoopAndIsSymmetric) {
  fixture::Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = fixture::random_cloud(rng, 1 + rng() % 200, -0.2, 0.2);
    const auto q = fixture::random_cloud(rng, 1 + rng() % 200, -0.2, 0.2);
    const double t = fixture::uniform(rng, 0.005, 0.1);
    EXPECT_EQ(fscore(p, q, t), oracle::fscore(p, q, t));
    EXPECT_EQ(fscore(p, q, t), fscore(q, p, t));
  }
}

TEST(FScore, NonDecreasingInThreshold) {
  fixture::Rng rng(14);
  const auto p = fixture::random_cloud(rng, 150);
  const auto q = fixture::random_cloud(rng, 120);
  double previous = 0.0;
  for (double t = 0.01; t < 1.0; t *= 1.3) {
    const double f = fscore(p, q, t);
    EXPECT_GE(f, previous);
    previous = f;
  }
}

TEST(FScore, Errors) {
  const PointCloud one{{0, 0, 0}};
  EXPECT_EQ(error_of([&] { fscore(one, PointCloud{}, 0.01); }), ErrorCode::EmptyCloud);
  EXPECT_EQ(error_of([&] { fscore(one, one, 0.0); }), ErrorCode::NonPositiveThreshold);
  EXPECT_EQ(error_of([&] { fscore(one, one, -1.0); }), ErrorCode::NonPositiveThreshold);
}

TEST(Report, IdenticalCloudsDisplayIdeal) {
  fixture::Rng rng(15);
  const auto p = fixture::random_cloud(rng, 64);
  const auto r = report(p, p);
  EXPECT_EQ(format_table(cd_table_value(r.cd)), "0.00");
  EXPECT_EQ(format_table(emd_table_value(r.emd)), "0.00");
  EXPECT_EQ(format_table(r.fscore), "1.00");
  EXPECT_EQ(r.threshold, 0.01);
  EXPECT_TRUE(r.emd_is_exact);
}

TEST(Report, TableScaling) {
  EXPECT_EQ(format_table(cd_table_value(0.0021)), "2.10");
  EXPECT_EQ(format_table(emd_table_value(0.0165)), "1.65");
}

TEST(Report, StoresRawValues) {
  fixture::Rng rng(16);
  const auto p = fixture::random_cloud(rng, 40);
  const auto q = fixture::random_cloud(rng, 40);
  const auto r = report(p, q);
  EXPECT_EQ(r.cd, chamfer(p, q));
  EXPECT_EQ(r.emd, emd_exact(p, q).value);
  EXPECT_EQ(r.fscore, fscore(p, q, 0.01));
  EXPECT_EQ(r.n_pred, 40u);
}

TEST(Report, AutoSwitchesToAuctionAboveCap) {
  fixture::Rng rng(17);
  const auto p = fixture::random_cloud(rng, 20);
  const auto q = fixture::random_cloud(rng, 20);
  ReportOptions opt;
  opt.exact_cap = 10;
  opt.emd_epsilon = 1e-4;
  const auto r = report(p, q, opt);
  EXPECT_FALSE(r.emd_is_exact);
  EXPECT_EQ(r.emd_bound, 1e-4);
  EXPECT_LE(r.emd - emd_exact(p, q).value, 1e-4 + 1e-12);
  opt.emd_method = EmdMethod::Exact;
  EXPECT_EQ(error_of([&] { report(p, q, opt); }), ErrorCode::TooLarge);
}

TEST(Format, ShortestRoundTrips) {
  fixture::Rng rng(18);
  for (int i = 0; i < 1000; ++i) {
    const double v = fixture::uniform(rng, -1e3, 1e3) * std::pow(10.0, fixture::uniform(rng, -10, 10));
    EXPECT_EQ(std::stod(format_shortest(v)), v);
  }
  EXPECT_EQ(format_shortest(0.0021), "0.0021");
}

}  // namespace
