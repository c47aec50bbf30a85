#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "symm/assignment.hpp"
#include "symm/error.hpp"

namespace {

using namespace symm;

double brute_force_cost(const Eigen::MatrixXd& c) {
  std::vector<int> perm(static_cast<std::size_t>(c.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) total += c(static_cast<Eigen::Index>(i), perm[i]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool is_bijection(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i) return false;
  }
  return true;
}

TEST(ExactAssignment, MatchesEnumeration) {
  fixture::Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 7;
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) c(i, j) = fixture::uniform(rng, 0.0, 10.0);
    }
    const auto plan = solve_assignment_exact(c);
    EXPECT_TRUE(is_bijection(plan.permutation));
    EXPECT_NEAR(plan.total_cost, brute_force_cost(c), 1e-9);
  }
}

TEST(ExactAssignment, HandlesNegativeAndIntegerCosts) {
  Eigen::MatrixXd c(3, 3);
  c << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  const auto plan = solve_assignment_exact(c);
  EXPECT_EQ(plan.total_cost, 5.0);
  c *= -1.0;
  EXPECT_EQ(solve_assignment_exact(c).total_cost, brute_force_cost(c));
}

TEST(ExactAssignment, RejectsNonSquare) {
  EXPECT_THROW(solve_assignment_exact(Eigen::MatrixXd::Zero(2, 3)), Error);
}

TEST(Auction, WithinBoundOfOptimum) {
  fixture::Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial;
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) c(i, j) = fixture::uniform(rng, 0.0, 1.0);
    }
    AuctionOptions opt;
    opt.epsilon = 1e-4;
    const auto res = solve_assignment_auction(c, opt);
    const double exact = solve_assignment_exact(c).total_cost;
    EXPECT_TRUE(is_bijection(res.plan.permutation));
    EXPECT_GE(res.plan.total_cost, exact - 1e-12);
    EXPECT_LE(res.plan.total_cost, exact + res.bound + 1e-12);
    EXPECT_DOUBLE_EQ(res.bound, n * 1e-4);
  }
}

TEST(Auction, SingleObject) {
  Eigen::MatrixXd c(1, 1);
  c << 3.5;
  const auto res = solve_assignment_auction(c, {});
  EXPECT_EQ(res.plan.permutation, std::vector<std::size_t>{0});
  EXPECT_EQ(res.plan.total_cost, 3.5);
}

TEST(Auction, BudgetExhaustionIsNonConvergence) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(20, 20);
  AuctionOptions opt;
  opt.epsilon = 1e-9;
  opt.max_bids = 5;
  try {
    solve_assignment_auction(c, opt);
    FAIL() << "expected NonConvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonConvergence);
  }
}

}  // namespace
