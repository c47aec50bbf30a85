#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace symm {

/// A bijection rows -> columns of a square cost matrix.
struct AssignmentPlan {
  std::vector<std::size_t> permutation;  // permutation[row] = column
  double total_cost = 0.0;               // sum of cost(row, permutation[row]) in row order
};

/// Exact minimum-cost perfect matching (shortest augmenting paths with
/// potentials, O(n^3)). Throws SizeMismatch for non-square input.
AssignmentPlan solve_assignment_exact(const Eigen::MatrixXd& cost);

struct AuctionOptions {
  double epsilon = 1e-3;        // final bid increment
  double scaling_factor = 5.0;  // epsilon divisor between phases
  std::size_t max_bids = 0;     // 0 = automatic budget
};

struct AuctionResult {
  AssignmentPlan plan;
  double bound = 0.0;  // total_cost - optimum <= bound (= n * epsilon)
  std::size_t bids = 0;
  int phases = 0;
};

/// Forward auction with epsilon scaling. The final assignment satisfies
/// epsilon-complementary slackness, so its cost exceeds the optimum by at most
/// n * epsilon. Throws NonConvergence if the bid budget runs out.
AuctionResult solve_assignment_auction(const Eigen::MatrixXd& cost, const AuctionOptions& options);

}  // namespace symm
