#include "cli/commands.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/batch.hpp"
#include "cli/json.hpp"
#include "cli/manifest.hpp"
#include "symm/error.hpp"
#include "symm/io.hpp"
#include "symm/metrics.hpp"
#include "symm/symfit.hpp"
#include "symm/symloss.hpp"

namespace symm::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::IoError: return kExitInput;
    case ErrorCode::NonConvergence: return kExitUnconverged;
    default: return kExitPrecondition;
  }
}

/// SYMM_THREADS caps workers; unset or 0 means hardware concurrency.
unsigned threads_from_env() {
  const char* value = std::getenv("SYMM_THREADS");
  if (value == nullptr || *value == '\0') return 0;
  unsigned n = 0;
  const std::string_view text(value);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), n);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "SYMM_THREADS must be a non-negative integer, got '" + std::string(text) + "'");
  }
  return n;
}

class Report {
 public:
  Report() { text_ << kReportBanner << '\n'; }

  template <typename T>
  Report& field(std::string_view key, const T& value) {
    text_ << key << ": " << value << '\n';
    return *this;
  }
  Report& number(std::string_view key, double value) { return field(key, format_shortest(value)); }

  std::string str() const { return text_.str(); }

 private:
  std::ostringstream text_;
};

std::string join_point(const Point3& p) {
  return format_shortest(p.x()) + " " + format_shortest(p.y()) + " " + format_shortest(p.z());
}

/// Writes `content` to `path`, or to `out` when the path is empty.
void emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

SymmetryPlane parse_plane(std::string_view text) {
  double v[4];
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '\t')) ++i;
    if (i >= text.size()) break;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != ',' && text[i] != '\t') ++i;
    if (count == 4) throw Error(ErrorCode::ParseError, "--plane takes exactly 4 numbers");
    const std::string_view token = text.substr(start, i - start);
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v[count]);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
      throw Error(ErrorCode::ParseError, "--plane: invalid number '" + std::string(token) + "'");
    }
    ++count;
  }
  if (count != 4) throw Error(ErrorCode::ParseError, "--plane takes exactly 4 numbers \"nx ny nz d\"");
  return SymmetryPlane::make(Point3(v[0], v[1], v[2]), v[3]);
}

struct MetricFlags {
  double threshold = kDefaultFScoreThreshold;
  std::string cd_mode = "squared";
  std::string emd = "auto";
  double epsilon = 1e-3;
  std::string normalize = "unit_cube";

  void attach(CLI::App* cmd) {
    cmd->add_option("--threshold", threshold, "F-Score distance threshold")->capture_default_str();
    cmd->add_option("--cd-mode", cd_mode, "Chamfer distance term")
        ->check(CLI::IsMember({"squared", "euclidean"}))
        ->capture_default_str();
    cmd->add_option("--emd", emd, "EMD solver; auto is exact up to 512 points")
        ->check(CLI::IsMember({"auto", "exact", "approx"}))
        ->capture_default_str();
    cmd->add_option("--epsilon", epsilon, "Auction tolerance for approximate EMD")->capture_default_str();
    cmd->add_option("--normalize", normalize, "Ground-truth normalization applied to both clouds")
        ->check(CLI::IsMember({"unit_cube", "none"}))
        ->capture_default_str();
  }

  EvalOptions options() const {
    EvalOptions o;
    o.metrics.threshold = threshold;
    o.metrics.cd_mode = parse_chamfer_mode(cd_mode);
    o.metrics.emd_method = parse_emd_method(emd);
    o.metrics.emd_epsilon = epsilon;
    o.normalize = normalize == "unit_cube";
    return o;
  }

  void record(RunManifest& m) const {
    m.config["threshold"] = format_shortest(threshold);
    m.config["cd_mode"] = cd_mode;
    m.config["emd"] = emd;
    m.config["epsilon"] = format_shortest(epsilon);
    m.config["normalize"] = normalize;
  }
};

// ---------------------------------------------------------------------------

struct MetricsArgs {
  std::string pred, gt, out;
  MetricFlags flags;
  bool json = false, csv = false;
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
  RunManifest manifest{"metrics", {a.pred, a.gt}, {}, std::nullopt, utc_timestamp()};
  a.flags.record(manifest);
  const MetricReport r = evaluate_pair(a.pred, a.gt, a.flags.options());
  const std::string emd_method = r.emd_is_exact ? "exact" : "approx";

  std::string content;
  if (a.json) {
    Json j;
    j["format"] = std::string(kReportBanner).substr(2);
    j["command"] = "metrics";
    j["pred"] = a.pred;
    j["gt"] = a.gt;
    j["normalize"] = a.flags.normalize;
    j["cd_mode"] = std::string(to_string(r.cd_mode));
    j["emd_method"] = emd_method;
    j["threshold"] = r.threshold;
    j["n_pred"] = r.n_pred;
    j["n_gt"] = r.n_gt;
    j["cd"] = {{"raw", r.cd}, {"x1e3", format_table(cd_table_value(r.cd))}};
    j["emd"] = {{"raw", r.emd}, {"x1e2", format_table(emd_table_value(r.emd))}, {"bound", r.emd_bound}};
    j["fscore"] = {{"value", r.fscore},
                   {"table", format_table(r.fscore)},
                   {"precision", r.precision},
                   {"recall", r.recall}};
    j["manifest"] = manifest.to_json();
    content = j.dump(2) + "\n";
  } else if (a.csv) {
    const std::vector<ReportRow> rows{ReportRow::from(fs::path(a.pred).stem().string(), "", r)};
    content = std::string(kReportBanner) + "\n" + report_csv(rows);
  } else {
    Report rep;
    rep.field("command", "metrics")
        .field("pred", a.pred)
        .field("gt", a.gt)
        .field("normalize", a.flags.normalize)
        .field("cd_mode", to_string(r.cd_mode))
        .field("emd_method", emd_method)
        .number("threshold", r.threshold)
        .field("n_pred", r.n_pred)
        .field("n_gt", r.n_gt)
        .number("cd_raw", r.cd)
        .field("cd_x1e3", format_table(cd_table_value(r.cd)))
        .number("emd_raw", r.emd)
        .field("emd_x1e2", format_table(emd_table_value(r.emd)))
        .number("emd_bound", r.emd_bound)
        .number("fscore", r.fscore)
        .field("fscore_table", format_table(r.fscore))
        .number("precision", r.precision)
        .number("recall", r.recall)
        .field("config_hash", manifest.config_hash());
    content = rep.str();
  }
  emit(content, a.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string cloud, trace_out;
  int restarts = 8;
  int max_iters = 300;
  double tol = 1e-8;
  bool fit_offset = false;
  std::string cd_mode = "squared";
  bool json = false;
};

FitConfig fit_config(const FitArgs& a) {
  FitConfig c;
  c.restarts = a.restarts;
  c.max_iters = a.max_iters;
  c.tol = a.tol;
  c.fit_offset = a.fit_offset;
  c.mode = parse_chamfer_mode(a.cd_mode);
  c.threads = threads_from_env();
  return c;
}

void record_fit(const FitArgs& a, RunManifest& m) {
  m.config["restarts"] = std::to_string(a.restarts);
  m.config["max_iters"] = std::to_string(a.max_iters);
  m.config["tol"] = format_shortest(a.tol);
  m.config["fit_offset"] = a.fit_offset ? "true" : "false";
  m.config["cd_mode"] = a.cd_mode;
}

int cmd_fit_plane(const FitArgs& a, std::ostream& out, std::ostream& err) {
  RunManifest manifest{"fit-plane", {a.cloud}, {}, std::nullopt, utc_timestamp()};
  record_fit(a, manifest);
  const PointCloud cloud = load_cloud(a.cloud);
  const FitResult fit = fit_plane(cloud, fit_config(a));

  if (!a.trace_out.empty()) {
    std::string csv = "iteration,residual\n";
    for (const auto& t : fit.trace) csv += std::to_string(t.iteration) + "," + format_shortest(t.residual) + "\n";
    write_file(a.trace_out, csv);
  }
  if (a.json) {
    Json j;
    j["format"] = std::string(kReportBanner).substr(2);
    j["command"] = "fit-plane";
    j["cloud"] = a.cloud;
    j["n_points"] = cloud.size();
    j["normal"] = {fit.plane.normal().x(), fit.plane.normal().y(), fit.plane.normal().z()};
    j["offset"] = fit.plane.offset();
    j["residual"] = fit.residual;
    j["iterations"] = fit.iterations;
    j["seed_id"] = fit.seed_id;
    j["converged"] = fit.converged;
    j["manifest"] = manifest.to_json();
    out << j.dump(2) << '\n';
  } else {
    Report rep;
    rep.field("command", "fit-plane")
        .field("cloud", a.cloud)
        .field("n_points", cloud.size())
        .field("cd_mode", a.cd_mode)
        .field("normal", join_point(fit.plane.normal()))
        .number("offset", fit.plane.offset())
        .number("residual", fit.residual)
        .field("iterations", fit.iterations)
        .field("seed_id", fit.seed_id)
        .field("converged", fit.converged ? "true" : "false")
        .field("config_hash", manifest.config_hash());
    out << rep.str();
  }
  if (!fit.converged) {
    err << "warning: no restart converged within " << a.max_iters << " iterations; reporting the best plane\n";
    return kExitUnconverged;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SymmetrizeArgs {
  std::string cloud, out_path, plane;
  bool auto_plane = false;
  std::string strategy = "union";
  FitArgs fit;
  bool ascii = false;
};

int cmd_symmetrize(const SymmetrizeArgs& a, std::ostream& out, std::ostream& err) {
  if (a.plane.empty() == !a.auto_plane) throw Error(ErrorCode::ParseError, "give exactly one of --plane or --auto");
  RunManifest manifest{"symmetrize", {a.cloud}, {}, std::nullopt, utc_timestamp()};
  manifest.config["strategy"] = a.strategy;
  manifest.config["cd_mode"] = a.fit.cd_mode;
  if (a.auto_plane) {
    record_fit(a.fit, manifest);
  } else {
    manifest.config["plane"] = a.plane;
  }

  const PointCloud cloud = load_cloud(a.cloud);
  const ChamferMode mode = parse_chamfer_mode(a.fit.cd_mode);
  SymmetryPlane plane = SymmetryPlane::make(Point3::UnitX(), 0.0);
  bool converged = true;
  if (a.auto_plane) {
    const FitResult fit = fit_plane(cloud, fit_config(a.fit));
    plane = fit.plane;
    converged = fit.converged;
  } else {
    plane = parse_plane(a.plane);
  }
  const PointCloud result = symmetrize(cloud, plane, parse_symmetrize_strategy(a.strategy));
  save_cloud(result, a.out_path, format_from_path(a.out_path),
             a.ascii ? PlyEncoding::Ascii : PlyEncoding::BinaryLittleEndian);
  write_sidecar(manifest, a.out_path);

  Report rep;
  rep.field("command", "symmetrize")
      .field("cloud", a.cloud)
      .field("out", a.out_path)
      .field("strategy", a.strategy)
      .field("normal", join_point(plane.normal()))
      .number("offset", plane.offset())
      .field("n_in", cloud.size())
      .field("n_out", result.size())
      .number("residual_before", symmetry_residual(cloud, plane, mode))
      .number("residual_after", symmetry_residual(result, plane, mode))
      .field("config_hash", manifest.config_hash());
  out << rep.str();
  if (!converged) {
    err << "warning: plane fit did not converge; the cloud was symmetrized about the best plane found\n";
    return kExitUnconverged;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BatchArgs {
  std::string pred_dir, gt_dir, pairs, out_path;
  MetricFlags flags;
  bool per_category = false;
};

int cmd_eval_batch(const BatchArgs& a, std::ostream& out, std::ostream& err) {
  RunManifest manifest{"eval-batch", {a.pred_dir, a.gt_dir}, {}, std::nullopt, utc_timestamp()};
  if (!a.pairs.empty()) manifest.inputs.push_back(a.pairs);
  a.flags.record(manifest);
  manifest.config["per_category"] = a.per_category ? "true" : "false";

  const auto pairs = a.pairs.empty() ? discover_pairs(a.pred_dir, a.gt_dir) : read_pairs(a.pairs, a.pred_dir, a.gt_dir);
  const BatchResult result = evaluate_batch(pairs, a.flags.options(), a.per_category, threads_from_env());
  const std::string csv = report_csv(result.rows, true);

  if (a.out_path.empty()) {
    out << kReportBanner << '\n' << csv;
  } else {
    write_file(a.out_path, csv);
    write_sidecar(manifest, a.out_path);
    Report rep;
    rep.field("command", "eval-batch")
        .field("pairs", pairs.size())
        .field("succeeded", result.succeeded)
        .field("failed", pairs.size() - result.succeeded)
        .field("out", a.out_path)
        .field("config_hash", manifest.config_hash());
    out << rep.str();
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!result.rows[i].error.empty()) err << "error: " << pairs[i].id << ": " << result.rows[i].error << '\n';
  }
  return result.succeeded > 0 ? kExitOk : kExitPrecondition;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  std::string mesh, out_path;
  std::size_t n = kDefaultSampleCount;
  std::uint64_t seed = 0;
  bool ascii = false;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  RunManifest manifest{"sample", {a.mesh}, {}, a.seed, utc_timestamp()};
  manifest.config["n"] = std::to_string(a.n);
  const TriangleMesh mesh = load_mesh(a.mesh);
  const PointCloud cloud = sample_mesh(mesh, a.n, a.seed);
  save_cloud(cloud, a.out_path, format_from_path(a.out_path),
             a.ascii ? PlyEncoding::Ascii : PlyEncoding::BinaryLittleEndian);
  write_sidecar(manifest, a.out_path);

  Report rep;
  rep.field("command", "sample")
      .field("mesh", a.mesh)
      .field("out", a.out_path)
      .field("faces", mesh.faces.size())
      .field("n", cloud.size())
      .field("seed", a.seed)
      .field("config_hash", manifest.config_hash());
  out << rep.str();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Point-cloud symmetry fitting and reconstruction metrics", "symmpoint"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  MetricsArgs metrics;
  auto* m = app.add_subcommand("metrics", "CD, EMD and F-Score of a predicted cloud against ground truth");
  m->add_option("pred", metrics.pred, "Predicted cloud")->required();
  m->add_option("gt", metrics.gt, "Ground-truth cloud")->required();
  metrics.flags.attach(m);
  auto* json_flag = m->add_flag("--json", metrics.json, "JSON output with run manifest");
  m->add_flag("--csv", metrics.csv, "CSV output")->excludes(json_flag);
  m->add_option("--out", metrics.out, "Write the report to a file instead of stdout");

  FitArgs fit;
  auto* f = app.add_subcommand("fit-plane", "Estimate the dominant reflective symmetry plane");
  f->add_option("cloud", fit.cloud, "Input cloud")->required();
  f->add_option("--restarts", fit.restarts, "Multi-start seeds")->capture_default_str();
  f->add_option("--max-iters", fit.max_iters, "Iterations per restart")->capture_default_str();
  f->add_option("--tol", fit.tol, "Convergence tolerance")->capture_default_str();
  f->add_flag("--fit-offset", fit.fit_offset, "Fit the offset too instead of passing through the centroid");
  f->add_option("--cd-mode", fit.cd_mode, "Residual distance term")
      ->check(CLI::IsMember({"squared", "euclidean"}))
      ->capture_default_str();
  f->add_option("--trace-out", fit.trace_out, "CSV of the winning restart's residual per iteration");
  f->add_flag("--json", fit.json, "JSON output with run manifest");

  SymmetrizeArgs sym;
  auto* s = app.add_subcommand("symmetrize", "Complete a cloud with its mirror image");
  s->add_option("cloud", sym.cloud, "Input cloud")->required();
  s->add_option("out", sym.out_path, "Output cloud (.xyz, .ply, .obj)")->required();
  auto* plane_opt = s->add_option("--plane", sym.plane, "Plane as \"nx ny nz d\"");
  s->add_flag("--auto", sym.auto_plane, "Fit the plane first")->excludes(plane_opt);
  s->add_option("--strategy", sym.strategy, "union or replace_worse_half")
      ->check(CLI::IsMember({"union", "replace_worse_half"}))
      ->capture_default_str();
  s->add_option("--restarts", sym.fit.restarts, "Multi-start seeds for --auto")->capture_default_str();
  s->add_flag("--fit-offset", sym.fit.fit_offset, "With --auto, fit the offset too");
  s->add_option("--cd-mode", sym.fit.cd_mode, "Residual distance term")
      ->check(CLI::IsMember({"squared", "euclidean"}))
      ->capture_default_str();
  s->add_flag("--ascii", sym.ascii, "Write ascii instead of binary PLY");

  BatchArgs batch;
  auto* b = app.add_subcommand("eval-batch", "Metrics over many prediction/ground-truth pairs");
  b->add_option("pred_dir", batch.pred_dir, "Directory of predicted clouds")->required();
  b->add_option("gt_dir", batch.gt_dir, "Directory of ground-truth clouds")->required();
  b->add_option("--pairs", batch.pairs, "CSV manifest with columns id,category,pred,gt");
  b->add_option("--out", batch.out_path, "Report CSV path (stdout if omitted)");
  b->add_flag("--per-category", batch.per_category, "Append one mean row per category");
  batch.flags.attach(b);

  SampleArgs sample;
  auto* p = app.add_subcommand("sample", "Area-weighted surface sampling of a mesh");
  p->add_option("mesh", sample.mesh, "Mesh (.obj or .ply with faces)")->required();
  p->add_option("out", sample.out_path, "Output cloud (.xyz, .ply, .obj)")->required();
  p->add_option("--n", sample.n, "Number of points")->capture_default_str();
  p->add_option("--seed", sample.seed, "Random seed")->capture_default_str();
  p->add_flag("--ascii", sample.ascii, "Write ascii instead of binary PLY");

  std::vector<const char*> argv{"symmpoint"};
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (m->parsed()) return cmd_metrics(metrics, out);
    if (f->parsed()) return cmd_fit_plane(fit, out, err);
    if (s->parsed()) return cmd_symmetrize(sym, out, err);
    if (b->parsed()) return cmd_eval_batch(batch, out, err);
    if (p->parsed()) return cmd_sample(sample, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace symm::cli
