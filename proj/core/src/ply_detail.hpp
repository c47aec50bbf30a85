#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "symm/geometry.hpp"

namespace symm::detail {

std::optional<double> parse_double(std::string_view token);

struct PlyData {
  std::vector<Point3> vertices;
  std::vector<std::vector<std::uint32_t>> polygons;  // filled only when faces are requested
};

/// Reads ascii and binary_little_endian PLY. Only the vertex x/y/z and, when
/// `want_faces`, the face vertex_indices (or vertex_index) list are kept.
PlyData read_ply(std::string_view bytes, bool want_faces);

}  // namespace symm::detail
