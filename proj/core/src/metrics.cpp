#include "symm/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "symm/error.hpp"

namespace symm {

namespace {

void require_nonempty(const PointCloud& pred, const PointCloud& gt) {
  if (pred.empty() || gt.empty()) throw Error(ErrorCode::EmptyCloud, "metric needs two nonempty clouds");
}

void require_same_size(const PointCloud& pred, const PointCloud& gt) {
  require_nonempty(pred, gt);
  if (pred.size() != gt.size()) {
    throw Error(ErrorCode::SizeMismatch, "EMD needs equal sizes, got " + std::to_string(pred.size()) +
                                             " and " + std::to_string(gt.size()));
  }
}

double term(double squared_distance, ChamferMode mode) {
  return mode == ChamferMode::Squared ? squared_distance : std::sqrt(squared_distance);
}

double brute_directed(std::span<const Point3> from, std::span<const Point3> to, ChamferMode mode) {
  double sum = 0.0;
  for (const auto& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : to) best = std::min(best, (p - q).squaredNorm());
    sum += term(best, mode);
  }
  return sum / static_cast<double>(from.size());
}

Eigen::MatrixXd euclidean_costs(const PointCloud& pred, const PointCloud& gt) {
  const auto n = static_cast<Eigen::Index>(pred.size());
  const auto m = static_cast<Eigen::Index>(gt.size());
  Eigen::MatrixXd cost(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      cost(i, j) = (pred[static_cast<std::size_t>(i)] - gt[static_cast<std::size_t>(j)]).norm();
    }
  }
  return cost;
}

std::size_t count_within(std::span<const Point3> from, const KdTree& to, double threshold) {
  std::size_t hits = 0;
  for (const auto& p : from) {
    if (std::sqrt(to.nearest(p).squared_distance) <= threshold) ++hits;
  }
  return hits;
}

}  // namespace

std::string_view to_string(ChamferMode mode) noexcept {
  return mode == ChamferMode::Squared ? "squared" : "euclidean";
}

ChamferMode parse_chamfer_mode(std::string_view text) {
  if (text == "squared") return ChamferMode::Squared;
  if (text == "euclidean") return ChamferMode::Euclidean;
  throw Error(ErrorCode::ParseError, "unknown chamfer mode '" + std::string(text) + "'");
}

std::string_view to_string(EmdMethod method) noexcept {
  switch (method) {
    case EmdMethod::Auto: return "auto";
    case EmdMethod::Exact: return "exact";
    case EmdMethod::Approx: return "approx";
  }
  return "auto";
}

EmdMethod parse_emd_method(std::string_view text) {
  if (text == "auto") return EmdMethod::Auto;
  if (text == "exact") return EmdMethod::Exact;
  if (text == "approx") return EmdMethod::Approx;
  throw Error(ErrorCode::ParseError, "unknown EMD method '" + std::string(text) + "'");
}

double chamfer(const PointCloud& pred, const PointCloud& gt, ChamferMode mode) {
  require_nonempty(pred, gt);
  return brute_directed(pred.points(), gt.points(), mode) + brute_directed(gt.points(), pred.points(), mode);
}

double directed_chamfer(std::span<const Point3> from, const KdTree& to, ChamferMode mode) {
  if (from.empty() || to.size() == 0) throw Error(ErrorCode::EmptyCloud, "directed chamfer on empty input");
  double sum = 0.0;
  for (const auto& p : from) sum += term(to.nearest(p).squared_distance, mode);
  return sum / static_cast<double>(from.size());
}

double chamfer_accel(const PointCloud& pred, const PointCloud& gt, ChamferMode mode) {
  require_nonempty(pred, gt);
  const KdTree pred_tree(pred);
  const KdTree gt_tree(gt);
  return directed_chamfer(pred.points(), gt_tree, mode) + directed_chamfer(gt.points(), pred_tree, mode);
}

EmdResult emd_exact(const PointCloud& pred, const PointCloud& gt, std::size_t cap) {
  require_same_size(pred, gt);
  if (pred.size() > cap) {
    throw Error(ErrorCode::TooLarge, "exact EMD is capped at " + std::to_string(cap) + " points, got " +
                                         std::to_string(pred.size()) + "; use the approximate solver");
  }
  EmdResult result;
  result.plan = solve_assignment_exact(euclidean_costs(pred, gt));
  result.value = result.plan.total_cost / static_cast<double>(pred.size());
  return result;
}

EmdResult emd_approx_plan(const PointCloud& pred, const PointCloud& gt, double epsilon) {
  require_same_size(pred, gt);
  if (!(epsilon > 0.0)) throw Error(ErrorCode::NonPositive, "EMD epsilon must be positive");
  AuctionOptions options;
  options.epsilon = epsilon;
  AuctionResult auction = solve_assignment_auction(euclidean_costs(pred, gt), options);
  EmdResult result;
  const auto n = static_cast<double>(pred.size());
  result.plan = std::move(auction.plan);
  result.value = result.plan.total_cost / n;
  result.bound = auction.bound / n;
  return result;
}

double emd_approx(const PointCloud& pred, const PointCloud& gt, double epsilon) {
  return emd_approx_plan(pred, gt, epsilon).value;
}

FScoreParts fscore_parts(const PointCloud& pred, const PointCloud& gt, double threshold) {
  require_nonempty(pred, gt);
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw Error(ErrorCode::NonPositiveThreshold, "F-Score threshold must be positive and finite");
  }
  const KdTree pred_tree(pred);
  const KdTree gt_tree(gt);
  FScoreParts parts;
  parts.precision = static_cast<double>(count_within(pred.points(), gt_tree, threshold)) /
                    static_cast<double>(pred.size());
  parts.recall = static_cast<double>(count_within(gt.points(), pred_tree, threshold)) /
                 static_cast<double>(gt.size());
  const double denom = parts.precision + parts.recall;
  parts.fscore = denom > 0.0 ? 2.0 * parts.precision * parts.recall / denom : 0.0;
  return parts;
}

double fscore(const PointCloud& pred, const PointCloud& gt, double threshold) {
  return fscore_parts(pred, gt, threshold).fscore;
}

MetricReport report(const PointCloud& pred, const PointCloud& gt, const ReportOptions& options) {
  require_nonempty(pred, gt);
  MetricReport r;
  r.threshold = options.threshold;
  r.n_pred = pred.size();
  r.n_gt = gt.size();
  r.cd_mode = options.cd_mode;

  const FScoreParts f = fscore_parts(pred, gt, options.threshold);
  r.fscore = f.fscore;
  r.precision = f.precision;
  r.recall = f.recall;
  r.cd = chamfer_accel(pred, gt, options.cd_mode);

  const bool exact = options.emd_method == EmdMethod::Exact ||
                     (options.emd_method == EmdMethod::Auto && pred.size() <= options.exact_cap);
  const EmdResult emd =
      exact ? emd_exact(pred, gt, options.exact_cap) : emd_approx_plan(pred, gt, options.emd_epsilon);
  r.emd = emd.value;
  r.emd_is_exact = exact;
  r.emd_bound = emd.bound;
  return r;
}

std::string format_table(double value) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof(buf), "%.2f", value);
  std::string out(buf, static_cast<std::size_t>(len));
  if (out == "-0.00") out = "0.00";
  return out;
}

std::string format_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace symm
