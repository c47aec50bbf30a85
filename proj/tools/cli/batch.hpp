#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "symm/io.hpp"
#include "symm/metrics.hpp"

namespace symm::cli {

struct EvalOptions {
  ReportOptions metrics;
  bool normalize = true;  // unit_cube record of the ground truth, applied to both clouds
};

/// Loads both clouds, optionally normalizes them, and computes the report.
MetricReport evaluate_pair(const std::filesystem::path& pred, const std::filesystem::path& gt,
                           const EvalOptions& options);

struct BatchPair {
  std::string id;
  std::string category;
  std::filesystem::path pred;
  std::filesystem::path gt;
};

/// RFC 4180 records; the first record is the header.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Manifest with columns id, category, pred, gt (any order, extra columns
/// ignored). `pred` and `gt` resolve against the given directories.
std::vector<BatchPair> read_pairs(const std::filesystem::path& manifest, const std::filesystem::path& pred_dir,
                                  const std::filesystem::path& gt_dir);

/// Files present under both directories with the same relative path, in
/// sorted order. The category is the first directory component, if any.
std::vector<BatchPair> discover_pairs(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir);

struct BatchResult {
  std::vector<ReportRow> rows;  // pairs in input order, then means
  std::size_t succeeded = 0;
};

/// Evaluates every pair on up to `threads` workers (0 = hardware
/// concurrency). Rows follow input order regardless of scheduling. Means
/// are appended as rows with id "mean": one per category when
/// `per_category`, then the overall one with category "Average".
BatchResult evaluate_batch(const std::vector<BatchPair>& pairs, const EvalOptions& options, bool per_category,
                           unsigned threads);

}  // namespace symm::cli
