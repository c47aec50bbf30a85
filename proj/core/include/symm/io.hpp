#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symm/geometry.hpp"
#include "symm/metrics.hpp"

namespace symm {

// ---------------------------------------------------------------------------
// Point clouds
// ---------------------------------------------------------------------------

enum class CloudFormat { Xyz, Ply, ObjVertices };

std::string_view to_string(CloudFormat format) noexcept;
CloudFormat parse_cloud_format(std::string_view text);

/// Format from the file extension (.xyz/.txt/.pts, .ply, .obj).
/// UnsupportedFormat otherwise.
CloudFormat format_from_path(const std::filesystem::path& path);

/// Parse a cloud from in-memory file contents.
///
/// XYZ: one point per line, the first three whitespace-separated numbers are
/// x y z, anything after '#' is a comment. PLY: ascii or
/// binary_little_endian, the `vertex` element's x/y/z properties (any scalar
/// type), every other property and element skipped. OBJ: `v` lines only.
/// Errors: ParseError (with line or byte offset), UnsupportedFormat,
/// EmptyCloud.
PointCloud parse_cloud(std::string_view bytes, CloudFormat format);

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format);
PointCloud load_cloud(const std::filesystem::path& path);

enum class PlyEncoding { Ascii, BinaryLittleEndian };

/// XYZ/OBJ/ascii PLY use shortest round-trip decimal output, binary PLY
/// stores doubles; every format reloads bit-exactly.
std::string serialize_cloud(const PointCloud& cloud, CloudFormat format,
                            PlyEncoding encoding = PlyEncoding::BinaryLittleEndian);

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format,
                PlyEncoding encoding = PlyEncoding::BinaryLittleEndian);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

// ---------------------------------------------------------------------------
// Meshes
// ---------------------------------------------------------------------------

struct TriangleMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<std::uint32_t, 3>> faces;

  /// ParseError when a face index is out of range or a vertex is non-finite.
  void validate() const;
  double area(std::size_t face) const;
};

/// OBJ (`v` and `f`, polygons fan-triangulated, negative indices allowed) or
/// PLY with a `face` element.
TriangleMesh parse_mesh(std::string_view bytes, CloudFormat format);
TriangleMesh load_mesh(const std::filesystem::path& path);

inline constexpr std::size_t kDefaultSampleCount = 2048;

/// Area-weighted surface sampling with replacement: faces drawn with
/// probability proportional to area, uniform barycentric coordinates.
/// Deterministic for a fixed seed on every platform (mt19937_64 with an
/// explicit 53-bit mantissa conversion). NoSurface if the total area is 0.
PointCloud sample_mesh(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

enum class NormalizationConvention { UnitCube, UnitSphere };

std::string_view to_string(NormalizationConvention convention) noexcept;
NormalizationConvention parse_normalization(std::string_view text);

/// normalized = (p - center) / scale
struct NormalizationRecord {
  Point3 center = Point3::Zero();
  double scale = 1.0;
  NormalizationConvention convention = NormalizationConvention::UnitCube;

  PointCloud apply(const PointCloud& cloud) const;
  PointCloud invert(const PointCloud& cloud) const;
};

/// unit_cube: bounding box centered at the origin, longest side 1 (a single
/// point maps to the origin with scale 1). unit_sphere: centroid at the
/// origin, farthest point at radius 1; DegenerateCloud if all points coincide.
std::pair<PointCloud, NormalizationRecord> normalize(
    const PointCloud& cloud, NormalizationConvention convention = NormalizationConvention::UnitCube);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline constexpr std::string_view kReportHeader =
    "id,category,cd_raw,cd_x1e3,emd_raw,emd_x1e2,fscore,threshold,n_points";

/// One CSV row. Metric fields are empty for failed rows.
struct ReportRow {
  std::string id;
  std::string category;
  std::optional<double> cd;
  std::optional<double> emd;
  std::optional<double> fscore;
  double threshold = kDefaultFScoreThreshold;
  std::optional<std::size_t> n_points;
  std::string error;

  static ReportRow from(std::string id, std::string category, const MetricReport& report);
};

/// CSV text with `kReportHeader`; `with_error_column` appends an `error`
/// column (batch evaluation output).
std::string report_csv(std::span<const ReportRow> rows, bool with_error_column = false);

void save_report(std::span<const ReportRow> rows, const std::filesystem::path& path,
                 bool with_error_column = false);

}  // namespace symm
