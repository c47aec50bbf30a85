#include "symm/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "symm/error.hpp"

namespace symm {

namespace {

void require_square(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) {
    throw Error(ErrorCode::SizeMismatch, "assignment needs a square cost matrix, got " +
                                             std::to_string(cost.rows()) + "x" +
                                             std::to_string(cost.cols()));
  }
  if (!cost.allFinite()) throw Error(ErrorCode::NonFinite, "cost matrix has non-finite entries");
}

double plan_cost(const Eigen::MatrixXd& cost, const std::vector<std::size_t>& perm) {
  double total = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    total += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i]));
  }
  return total;
}

}  // namespace

AssignmentPlan solve_assignment_exact(const Eigen::MatrixXd& cost) {
  require_square(cost);
  const auto n = static_cast<std::size_t>(cost.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based arrays; column 0 is the virtual source of each augmenting path.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t i0 = match[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) -
                           u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = col0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          col1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  AssignmentPlan plan;
  plan.permutation.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) plan.permutation[match[j] - 1] = j - 1;
  plan.total_cost = plan_cost(cost, plan.permutation);
  return plan;
}

AuctionResult solve_assignment_auction(const Eigen::MatrixXd& cost, const AuctionOptions& options) {
  require_square(cost);
  if (!(options.epsilon > 0.0)) throw Error(ErrorCode::NonPositive, "auction epsilon must be positive");
  if (!(options.scaling_factor > 1.0)) {
    throw Error(ErrorCode::NonPositive, "auction scaling factor must exceed 1");
  }
  const auto n = static_cast<std::size_t>(cost.rows());
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  AuctionResult result;
  result.bound = static_cast<double>(n) * options.epsilon;
  if (n == 0) return result;

  const std::size_t budget =
      options.max_bids != 0 ? options.max_bids : std::max<std::size_t>(n * n * 64, 1'000'000);

  // Columns are objects; bidding on cost(i, j) + price(j) as a minimization.
  const double spread = cost.maxCoeff() - cost.minCoeff();
  double eps = std::max(options.epsilon, spread / options.scaling_factor);
  std::vector<double> price(n, 0.0);
  std::vector<std::size_t> owner(n), assigned(n);

  for (;;) {
    ++result.phases;
    std::fill(owner.begin(), owner.end(), kNone);
    std::fill(assigned.begin(), assigned.end(), kNone);
    std::deque<std::size_t> unassigned;
    for (std::size_t i = 0; i < n; ++i) unassigned.push_back(i);

    while (!unassigned.empty()) {
      if (result.bids >= budget) {
        throw Error(ErrorCode::NonConvergence,
                    "auction exhausted " + std::to_string(budget) + " bids at epsilon " + std::to_string(eps));
      }
      const std::size_t person = unassigned.front();
      unassigned.pop_front();

      const auto row = static_cast<Eigen::Index>(person);
      double best = std::numeric_limits<double>::infinity();
      double second = best;
      std::size_t target = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const double value = cost(row, static_cast<Eigen::Index>(j)) + price[j];
        if (value < best) {
          second = best;
          best = value;
          target = j;
        } else if (value < second) {
          second = value;
        }
      }
      // A single object has no competitor; any positive raise keeps CS.
      const double raise = (n == 1 ? 0.0 : second - best) + eps;
      price[target] += raise;
      if (owner[target] != kNone) {
        assigned[owner[target]] = kNone;
        unassigned.push_back(owner[target]);
      }
      owner[target] = person;
      assigned[person] = target;
      ++result.bids;
    }

    if (eps <= options.epsilon) break;
    eps = std::max(options.epsilon, eps / options.scaling_factor);
  }

  result.plan.permutation = assigned;
  result.plan.total_cost = plan_cost(cost, assigned);
  return result;
}

}  // namespace symm
