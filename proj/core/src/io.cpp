#include "symm/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "symm/error.hpp"
#include "ply_detail.hpp"

namespace symm {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

/// Whitespace tokens of one line, comments (after '#') dropped.
std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 1;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line_no, line);
    pos = end + 1;
    ++line_no;
  }
}

Point3 parse_point(std::span<const std::string_view> tokens, std::size_t line) {
  Point3 p;
  for (int k = 0; k < 3; ++k) {
    const auto value = detail::parse_double(tokens[static_cast<std::size_t>(k)]);
    if (!value) parse_error(line, "invalid number '" + std::string(tokens[static_cast<std::size_t>(k)]) + "'");
    p[k] = *value;
  }
  if (!is_finite(p)) parse_error(line, "non-finite coordinate");
  return p;
}

PointCloud parse_xyz(std::string_view text) {
  std::vector<Point3> points;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    const auto tokens = split_tokens(content);
    if (tokens.empty()) return;
    if (tokens.size() < 3) parse_error(line, "expected 3 coordinates, found " + std::to_string(tokens.size()));
    points.push_back(parse_point(tokens, line));
  });
  return PointCloud(std::move(points));
}

PointCloud parse_obj_vertices(std::string_view text) {
  std::vector<Point3> points;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    const auto tokens = split_tokens(content);
    if (tokens.empty() || tokens[0] != "v") return;
    if (tokens.size() < 4) parse_error(line, "vertex needs 3 coordinates");
    points.push_back(parse_point(std::span(tokens).subspan(1), line));
  });
  return PointCloud(std::move(points));
}

TriangleMesh parse_obj_mesh(std::string_view text) {
  TriangleMesh mesh;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    const auto tokens = split_tokens(content);
    if (tokens.empty()) return;
    if (tokens[0] == "v") {
      if (tokens.size() < 4) parse_error(line, "vertex needs 3 coordinates");
      mesh.vertices.push_back(parse_point(std::span(tokens).subspan(1), line));
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) parse_error(line, "face needs at least 3 vertices");
      std::vector<std::uint32_t> polygon;
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        const std::string_view ref = tokens[k].substr(0, tokens[k].find('/'));
        long long idx = 0;
        const auto res = std::from_chars(ref.data(), ref.data() + ref.size(), idx);
        if (res.ec != std::errc() || res.ptr != ref.data() + ref.size() || idx == 0) {
          parse_error(line, "invalid face index '" + std::string(tokens[k]) + "'");
        }
        const long long count = static_cast<long long>(mesh.vertices.size());
        const long long resolved = idx > 0 ? idx - 1 : count + idx;
        if (resolved < 0 || resolved >= count) parse_error(line, "face index out of range");
        polygon.push_back(static_cast<std::uint32_t>(resolved));
      }
      for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
        mesh.faces.push_back({polygon[0], polygon[k], polygon[k + 1]});
      }
    }
  });
  return mesh;
}

void require_points(const PointCloud& cloud) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "file contains no points");
}

void append_le(std::string& out, double value) {
  auto bits = std::bit_cast<std::uint64_t>(value);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xffu));
    bits >>= 8;
  }
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string_view to_string(CloudFormat format) noexcept {
  switch (format) {
    case CloudFormat::Xyz: return "xyz";
    case CloudFormat::Ply: return "ply";
    case CloudFormat::ObjVertices: return "obj_vertices";
  }
  return "xyz";
}

CloudFormat parse_cloud_format(std::string_view text) {
  const std::string t = lower(text);
  if (t == "xyz") return CloudFormat::Xyz;
  if (t == "ply") return CloudFormat::Ply;
  if (t == "obj" || t == "obj_vertices") return CloudFormat::ObjVertices;
  throw Error(ErrorCode::UnsupportedFormat, "unknown cloud format '" + std::string(text) + "'");
}

CloudFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".xyz" || ext == ".txt" || ext == ".pts") return CloudFormat::Xyz;
  if (ext == ".ply") return CloudFormat::Ply;
  if (ext == ".obj") return CloudFormat::ObjVertices;
  throw Error(ErrorCode::UnsupportedFormat, "cannot infer format from '" + path.string() + "'");
}

PointCloud parse_cloud(std::string_view bytes, CloudFormat format) {
  PointCloud cloud;
  switch (format) {
    case CloudFormat::Xyz: cloud = parse_xyz(bytes); break;
    case CloudFormat::ObjVertices: cloud = parse_obj_vertices(bytes); break;
    case CloudFormat::Ply: cloud = PointCloud(detail::read_ply(bytes, false).vertices); break;
  }
  require_points(cloud);
  return cloud;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed for '" + path.string() + "'");
  return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format) {
  const std::string bytes = read_file(path);
  try {
    return parse_cloud(bytes, format);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

PointCloud load_cloud(const std::filesystem::path& path) { return load_cloud(path, format_from_path(path)); }

std::string serialize_cloud(const PointCloud& cloud, CloudFormat format, PlyEncoding encoding) {
  std::string out;
  auto text_point = [&](std::string_view prefix, const Point3& p) {
    out += prefix;
    out += format_shortest(p.x());
    out += ' ';
    out += format_shortest(p.y());
    out += ' ';
    out += format_shortest(p.z());
    out += '\n';
  };
  switch (format) {
    case CloudFormat::Xyz:
      for (const auto& p : cloud) text_point("", p);
      break;
    case CloudFormat::ObjVertices:
      for (const auto& p : cloud) text_point("v ", p);
      break;
    case CloudFormat::Ply: {
      const bool binary = encoding == PlyEncoding::BinaryLittleEndian;
      out += "ply\nformat ";
      out += binary ? "binary_little_endian" : "ascii";
      out += " 1.0\nelement vertex " + std::to_string(cloud.size()) +
             "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
      for (const auto& p : cloud) {
        if (binary) {
          append_le(out, p.x());
          append_le(out, p.y());
          append_le(out, p.z());
        } else {
          text_point("", p);
        }
      }
      break;
    }
  }
  return out;
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format,
                PlyEncoding encoding) {
  write_file(path, serialize_cloud(cloud, format, encoding));
}

TriangleMesh parse_mesh(std::string_view bytes, CloudFormat format) {
  TriangleMesh mesh;
  switch (format) {
    case CloudFormat::ObjVertices: mesh = parse_obj_mesh(bytes); break;
    case CloudFormat::Ply: {
      detail::PlyData data = detail::read_ply(bytes, true);
      mesh.vertices = std::move(data.vertices);
      for (const auto& polygon : data.polygons) {
        for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
          mesh.faces.push_back({polygon[0], polygon[k], polygon[k + 1]});
        }
      }
      break;
    }
    case CloudFormat::Xyz:
      throw Error(ErrorCode::UnsupportedFormat, "XYZ files carry no faces");
  }
  mesh.validate();
  return mesh;
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  try {
    return parse_mesh(bytes, format_from_path(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

ReportRow ReportRow::from(std::string id, std::string category, const MetricReport& report) {
  ReportRow row;
  row.id = std::move(id);
  row.category = std::move(category);
  row.cd = report.cd;
  row.emd = report.emd;
  row.fscore = report.fscore;
  row.threshold = report.threshold;
  row.n_points = report.n_pred;
  return row;
}

std::string report_csv(std::span<const ReportRow> rows, bool with_error_column) {
  std::string out(kReportHeader);
  if (with_error_column) out += ",error";
  out += '\n';
  auto opt = [](const std::optional<double>& v, auto fmt) { return v ? fmt(*v) : std::string(); };
  for (const auto& row : rows) {
    out += csv_field(row.id);
    out += ',';
    out += csv_field(row.category);
    out += ',';
    out += opt(row.cd, format_shortest);
    out += ',';
    out += opt(row.cd, [](double v) { return format_table(cd_table_value(v)); });
    out += ',';
    out += opt(row.emd, format_shortest);
    out += ',';
    out += opt(row.emd, [](double v) { return format_table(emd_table_value(v)); });
    out += ',';
    out += opt(row.fscore, format_shortest);
    out += ',';
    out += format_shortest(row.threshold);
    out += ',';
    if (row.n_points) out += std::to_string(*row.n_points);
    if (with_error_column) {
      out += ',';
      out += csv_field(row.error);
    }
    out += '\n';
  }
  return out;
}

void save_report(std::span<const ReportRow> rows, const std::filesystem::path& path, bool with_error_column) {
  write_file(path, report_csv(rows, with_error_column));
}

}  // namespace symm
