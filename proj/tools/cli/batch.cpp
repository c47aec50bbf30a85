#include "cli/batch.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "symm/error.hpp"

namespace symm::cli {

namespace fs = std::filesystem;

MetricReport evaluate_pair(const fs::path& pred, const fs::path& gt, const EvalOptions& options) {
  PointCloud p = load_cloud(pred);
  PointCloud g = load_cloud(gt);
  if (options.normalize) {
    const NormalizationRecord record = normalize(g, NormalizationConvention::UnitCube).second;
    p = record.apply(p);
    g = record.apply(g);
  }
  return report(p, g, options.metrics);
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": stray quote");
        quoted = true;
        any = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r': break;
      case '\n':
        if (any || !field.empty()) {
          record.push_back(std::move(field));
          records.push_back(std::move(record));
        }
        record.clear();
        field.clear();
        any = false;
        ++line;
        break;
      default:
        field.push_back(c);
        any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": unterminated quote");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<BatchPair> read_pairs(const fs::path& manifest, const fs::path& pred_dir, const fs::path& gt_dir) {
  const auto records = parse_csv(read_file(manifest));
  if (records.empty()) throw Error(ErrorCode::ParseError, manifest.string() + ": empty pairs manifest");
  const auto& header = records.front();
  auto column = [&](std::string_view name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::ParseError, manifest.string() + ": missing column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t id = column("id"), category = column("category"), pred = column("pred"), gt = column("gt");
  const std::size_t needed = std::max({id, category, pred, gt}) + 1;

  std::vector<BatchPair> pairs;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() < needed) {
      throw Error(ErrorCode::ParseError, manifest.string() + ": record " + std::to_string(r + 1) + " has " +
                                             std::to_string(rec.size()) + " fields");
    }
    pairs.push_back({rec[id], rec[category], pred_dir / rec[pred], gt_dir / rec[gt]});
  }
  return pairs;
}

std::vector<BatchPair> discover_pairs(const fs::path& pred_dir, const fs::path& gt_dir) {
  if (!fs::is_directory(pred_dir)) throw Error(ErrorCode::IoError, "'" + pred_dir.string() + "' is not a directory");
  if (!fs::is_directory(gt_dir)) throw Error(ErrorCode::IoError, "'" + gt_dir.string() + "' is not a directory");
  std::vector<fs::path> relative;
  for (const auto& entry : fs::recursive_directory_iterator(pred_dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = entry.path().lexically_relative(pred_dir);
    if (fs::is_regular_file(gt_dir / rel)) relative.push_back(rel);
  }
  std::sort(relative.begin(), relative.end());
  std::vector<BatchPair> pairs;
  for (const auto& rel : relative) {
    BatchPair p;
    fs::path stem = rel;
    p.id = stem.replace_extension().generic_string();
    p.category = std::distance(rel.begin(), rel.end()) > 1 ? rel.begin()->string() : std::string();
    p.pred = pred_dir / rel;
    p.gt = gt_dir / rel;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

namespace {

struct Accumulator {
  double cd = 0.0, emd = 0.0, fscore = 0.0;
  std::size_t n = 0;

  void add(const ReportRow& row) {
    cd += *row.cd;
    emd += *row.emd;
    fscore += *row.fscore;
    ++n;
  }

  ReportRow mean_row(std::string category, double threshold) const {
    ReportRow row;
    row.id = "mean";
    row.category = std::move(category);
    row.threshold = threshold;
    if (n == 0) {
      row.error = "no successful rows";
      return row;
    }
    const double count = static_cast<double>(n);
    row.cd = cd / count;
    row.emd = emd / count;
    row.fscore = fscore / count;
    return row;
  }
};

}  // namespace

BatchResult evaluate_batch(const std::vector<BatchPair>& pairs, const EvalOptions& options, bool per_category,
                           unsigned threads) {
  BatchResult result;
  result.rows.resize(pairs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      const BatchPair& pair = pairs[i];
      try {
        result.rows[i] = ReportRow::from(pair.id, pair.category, evaluate_pair(pair.pred, pair.gt, options));
      } catch (const Error& e) {
        ReportRow row;
        row.id = pair.id;
        row.category = pair.category;
        row.threshold = options.metrics.threshold;
        row.error = e.what();
        result.rows[i] = std::move(row);
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(pairs.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  // Sums run in row order so the means do not depend on scheduling.
  std::vector<std::string> order;
  std::map<std::string, Accumulator> by_category;
  Accumulator overall;
  for (const auto& row : result.rows) {
    if (!by_category.contains(row.category)) order.push_back(row.category);
    auto& acc = by_category[row.category];
    if (!row.error.empty()) continue;
    ++result.succeeded;
    acc.add(row);
    overall.add(row);
  }
  const double threshold = options.metrics.threshold;
  if (per_category) {
    for (const auto& category : order) result.rows.push_back(by_category[category].mean_row(category, threshold));
  }
  result.rows.push_back(overall.mean_row("Average", threshold));
  return result;
}

}  // namespace symm::cli
