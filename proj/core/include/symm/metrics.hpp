#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "symm/assignment.hpp"
#include "symm/geometry.hpp"
#include "symm/kdtree.hpp"

namespace symm {

/// Per-pair term of the Chamfer sum: |p - q|^2 (default) or |p - q|.
enum class ChamferMode { Squared, Euclidean };

std::string_view to_string(ChamferMode mode) noexcept;
ChamferMode parse_chamfer_mode(std::string_view text);

inline constexpr double kDefaultFScoreThreshold = 0.01;
inline constexpr std::size_t kExactEmdCap = 512;

/// Brute-force bidirectional Chamfer distance:
/// mean_{p in P} min_q term(p, q) + mean_{q in Q} min_p term(q, p).
double chamfer(const PointCloud& pred, const PointCloud& gt, ChamferMode mode = ChamferMode::Squared);

/// kd-tree accelerated Chamfer distance. Bit-identical to `chamfer`.
double chamfer_accel(const PointCloud& pred, const PointCloud& gt,
                     ChamferMode mode = ChamferMode::Squared);

/// Mean over `from` of the nearest-neighbor term into the indexed cloud.
double directed_chamfer(std::span<const Point3> from, const KdTree& to, ChamferMode mode);

struct EmdResult {
  double value = 0.0;  // mean matched-pair Euclidean distance
  AssignmentPlan plan;
  double bound = 0.0;  // value - optimum <= bound; 0 for the exact solver
};

/// Optimal bijection under Euclidean cost. SizeMismatch if |P| != |Q|,
/// TooLarge above `cap` points.
EmdResult emd_exact(const PointCloud& pred, const PointCloud& gt, std::size_t cap = kExactEmdCap);

/// Auction-based EMD within `epsilon` (mean per point) of the optimum.
EmdResult emd_approx_plan(const PointCloud& pred, const PointCloud& gt, double epsilon);
double emd_approx(const PointCloud& pred, const PointCloud& gt, double epsilon);

struct FScoreParts {
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

/// Precision/recall of points within Euclidean `threshold` of the other cloud.
FScoreParts fscore_parts(const PointCloud& pred, const PointCloud& gt,
                         double threshold = kDefaultFScoreThreshold);
double fscore(const PointCloud& pred, const PointCloud& gt, double threshold = kDefaultFScoreThreshold);

enum class EmdMethod { Auto, Exact, Approx };

std::string_view to_string(EmdMethod method) noexcept;
EmdMethod parse_emd_method(std::string_view text);

struct ReportOptions {
  double threshold = kDefaultFScoreThreshold;
  ChamferMode cd_mode = ChamferMode::Squared;
  EmdMethod emd_method = EmdMethod::Auto;  // Auto: exact up to the cap, auction above
  double emd_epsilon = 1e-3;
  std::size_t exact_cap = kExactEmdCap;
};

/// Raw (unscaled) metric values for one prediction/ground-truth pair.
struct MetricReport {
  double cd = 0.0;
  double emd = 0.0;
  double fscore = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double threshold = kDefaultFScoreThreshold;
  std::size_t n_pred = 0;
  std::size_t n_gt = 0;
  ChamferMode cd_mode = ChamferMode::Squared;
  bool emd_is_exact = true;
  double emd_bound = 0.0;
};

MetricReport report(const PointCloud& pred, const PointCloud& gt, const ReportOptions& options = {});

// Table conventions: CD is shown x1e3, EMD x1e2, both with two decimals.
inline double cd_table_value(double cd) { return cd * 1e3; }
inline double emd_table_value(double emd) { return emd * 1e2; }

/// Fixed two-decimal rendering used for table columns.
std::string format_table(double value);

/// Shortest decimal string that parses back to the identical double.
std::string format_shortest(double value);

}  // namespace symm
