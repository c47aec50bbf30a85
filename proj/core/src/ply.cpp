#include <bit>
#include <charconv>
#include <cstring>
#include <string>

#include "ply_detail.hpp"
#include "symm/error.hpp"

namespace symm::detail {

namespace {

enum class Scalar { I8, U8, I16, U16, I32, U32, F32, F64 };

struct Property {
  std::string name;
  Scalar type = Scalar::F32;
  bool is_list = false;
  Scalar count_type = Scalar::U8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  bool binary = false;
  std::vector<Element> elements;
  std::size_t body_offset = 0;
  std::size_t body_line = 0;  // first line number of the ascii body
};

Scalar parse_scalar(std::string_view name, std::size_t line) {
  if (name == "char" || name == "int8") return Scalar::I8;
  if (name == "uchar" || name == "uint8") return Scalar::U8;
  if (name == "short" || name == "int16") return Scalar::I16;
  if (name == "ushort" || name == "uint16") return Scalar::U16;
  if (name == "int" || name == "int32") return Scalar::I32;
  if (name == "uint" || name == "uint32") return Scalar::U32;
  if (name == "float" || name == "float32") return Scalar::F32;
  if (name == "double" || name == "float64") return Scalar::F64;
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": unknown PLY type '" + std::string(name) + "'");
}

std::size_t scalar_size(Scalar s) {
  switch (s) {
    case Scalar::I8:
    case Scalar::U8: return 1;
    case Scalar::I16:
    case Scalar::U16: return 2;
    case Scalar::I32:
    case Scalar::U32:
    case Scalar::F32: return 4;
    case Scalar::F64: return 8;
  }
  return 0;
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

Header parse_header(std::string_view bytes) {
  Header h;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_format = false;
  auto next_line = [&]() -> std::string_view {
    if (pos >= bytes.size()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": PLY header ends without end_header");
    }
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string_view::npos) end = bytes.size();
    std::string_view line = bytes.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    return line;
  };
  auto fail = [&](const std::string& what) -> void {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
  };

  if (next_line() != "ply") fail("missing 'ply' magic");
  for (;;) {
    const std::string_view line = next_line();
    const auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "end_header") break;
    if (w[0] == "comment" || w[0] == "obj_info") continue;
    if (w[0] == "format") {
      if (w.size() < 2) fail("malformed format line");
      if (w[1] == "ascii") {
        h.binary = false;
      } else if (w[1] == "binary_little_endian") {
        h.binary = true;
      } else {
        throw Error(ErrorCode::UnsupportedFormat, "PLY encoding '" + std::string(w[1]) + "' is not supported");
      }
      saw_format = true;
    } else if (w[0] == "element") {
      if (w.size() != 3) fail("malformed element line");
      Element e;
      e.name = std::string(w[1]);
      const auto res = std::from_chars(w[2].data(), w[2].data() + w[2].size(), e.count);
      if (res.ec != std::errc() || res.ptr != w[2].data() + w[2].size()) fail("invalid element count");
      h.elements.push_back(std::move(e));
    } else if (w[0] == "property") {
      if (h.elements.empty()) fail("property before any element");
      Property p;
      if (w.size() == 5 && w[1] == "list") {
        p.is_list = true;
        p.count_type = parse_scalar(w[2], line_no);
        p.type = parse_scalar(w[3], line_no);
        p.name = std::string(w[4]);
      } else if (w.size() == 3) {
        p.type = parse_scalar(w[1], line_no);
        p.name = std::string(w[2]);
      } else {
        fail("malformed property line");
      }
      h.elements.back().properties.push_back(std::move(p));
    } else {
      fail("unexpected header keyword '" + std::string(w[0]) + "'");
    }
  }
  if (!saw_format) fail("PLY header has no format line");
  h.body_offset = pos;
  h.body_line = line_no + 1;
  return h;
}

/// Sequential value source over the PLY body.
class Body {
 public:
  Body(std::string_view bytes, const Header& h)
      : bytes_(bytes), pos_(h.body_offset), line_(h.body_line), binary_(h.binary) {}

  double read(Scalar type) { return binary_ ? read_binary(type) : read_ascii(); }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    if (binary_) {
      throw Error(ErrorCode::ParseError, "byte " + std::to_string(pos_) + ": " + what);
    }
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_) + ": " + what);
  }

  double read_ascii() {
    while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      if (bytes_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= bytes_.size()) fail("unexpected end of PLY data");
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    const std::string_view token = bytes_.substr(start, pos_ - start);
    const auto value = parse_double(token);
    if (!value) fail("invalid number '" + std::string(token) + "'");
    return *value;
  }

  double read_binary(Scalar type) {
    const std::size_t n = scalar_size(type);
    if (pos_ + n > bytes_.size()) fail("unexpected end of PLY data");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += n;
    switch (type) {
      case Scalar::I8: return static_cast<std::int8_t>(bits);
      case Scalar::U8: return static_cast<std::uint8_t>(bits);
      case Scalar::I16: return static_cast<std::int16_t>(bits);
      case Scalar::U16: return static_cast<std::uint16_t>(bits);
      case Scalar::I32: return static_cast<std::int32_t>(bits);
      case Scalar::U32: return static_cast<std::uint32_t>(bits);
      case Scalar::F32: return std::bit_cast<float>(static_cast<std::uint32_t>(bits));
      case Scalar::F64: return std::bit_cast<double>(bits);
    }
    return 0.0;
  }

  std::string_view bytes_;
  std::size_t pos_;
  std::size_t line_;
  bool binary_;
};

std::uint32_t to_index(double value) {
  if (!(value >= 0.0) || value != static_cast<double>(static_cast<std::uint32_t>(value))) {
    throw Error(ErrorCode::ParseError, "invalid face index " + std::to_string(value));
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace

std::optional<double> parse_double(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

PlyData read_ply(std::string_view bytes, bool want_faces) {
  const Header header = parse_header(bytes);
  Body body(bytes, header);
  PlyData data;
  bool saw_vertex = false;

  for (const auto& element : header.elements) {
    const bool is_vertex = element.name == "vertex";
    const bool is_face = element.name == "face" && want_faces;
    int axis_of[3] = {-1, -1, -1};
    int list_index = -1;
    for (std::size_t k = 0; k < element.properties.size(); ++k) {
      const auto& p = element.properties[k];
      if (is_vertex && !p.is_list) {
        if (p.name == "x") axis_of[0] = static_cast<int>(k);
        if (p.name == "y") axis_of[1] = static_cast<int>(k);
        if (p.name == "z") axis_of[2] = static_cast<int>(k);
      }
      if (is_face && p.is_list && list_index < 0 && (p.name == "vertex_indices" || p.name == "vertex_index")) {
        list_index = static_cast<int>(k);
      }
    }
    if (is_vertex) {
      if (axis_of[0] < 0 || axis_of[1] < 0 || axis_of[2] < 0) {
        throw Error(ErrorCode::ParseError, "PLY vertex element lacks x/y/z properties");
      }
      saw_vertex = true;
      data.vertices.reserve(element.count);
    }

    for (std::size_t row = 0; row < element.count; ++row) {
      Point3 p = Point3::Zero();
      for (std::size_t k = 0; k < element.properties.size(); ++k) {
        const auto& prop = element.properties[k];
        if (prop.is_list) {
          const double count = body.read(prop.count_type);
          if (!(count >= 0.0)) throw Error(ErrorCode::ParseError, "negative PLY list length");
          std::vector<std::uint32_t> polygon;
          const bool keep = static_cast<int>(k) == list_index;
          for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
            const double v = body.read(prop.type);
            if (keep) polygon.push_back(to_index(v));
          }
          if (keep) data.polygons.push_back(std::move(polygon));
          continue;
        }
        const double v = body.read(prop.type);
        for (int a = 0; a < 3; ++a) {
          if (axis_of[a] == static_cast<int>(k)) p[a] = v;
        }
      }
      if (is_vertex) {
        if (!is_finite(p)) throw Error(ErrorCode::ParseError, "non-finite PLY vertex " + std::to_string(row));
        data.vertices.push_back(p);
      }
    }
    if (is_vertex && !want_faces) break;
  }
  if (!saw_vertex) throw Error(ErrorCode::ParseError, "PLY file has no vertex element");
  return data;
}

}  // namespace symm::detail
