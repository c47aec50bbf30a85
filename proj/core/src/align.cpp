#include "symm/align.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "symm/error.hpp"
#include "symm/io.hpp"

namespace symm {

namespace {

std::uint32_t read_u32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>(v & 0xffu));
    v >>= 8;
  }
}

}  // namespace

double cosine_similarity(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  if (!a.allFinite() || !b.allFinite()) throw Error(ErrorCode::NonFinite, "feature vector is not finite");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine similarity of a zero vector");
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

FeatureGrid::FeatureGrid(std::size_t height, std::size_t width, std::size_t dims)
    : FeatureGrid(height, width, dims, std::vector<double>(height * width * dims, 0.0)) {}

FeatureGrid::FeatureGrid(std::size_t height, std::size_t width, std::size_t dims, std::vector<double> values)
    : height_(height), width_(width), dims_(dims), values_(std::move(values)) {
  if (height == 0 || width == 0 || dims == 0) throw Error(ErrorCode::NonPositive, "feature grid dimensions must be >= 1");
  if (values_.size() != height * width * dims) {
    throw Error(ErrorCode::DimensionMismatch, "feature grid expects " + std::to_string(height * width * dims) +
                                                  " values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "feature grid value is not finite");
  }
}

Eigen::Map<const FeatureVector> FeatureGrid::cell(std::size_t flat) const {
  return {values_.data() + flat * dims_, static_cast<Eigen::Index>(dims_)};
}

Eigen::Map<FeatureVector> FeatureGrid::cell(std::size_t flat) {
  return {values_.data() + flat * dims_, static_cast<Eigen::Index>(dims_)};
}

std::vector<Correspondence> correspondence_map(const FeatureGrid& source, const FeatureGrid& target) {
  if (source.dims() != target.dims()) {
    throw Error(ErrorCode::DimensionMismatch, "feature dimensions differ: " + std::to_string(source.dims()) +
                                                  " vs " + std::to_string(target.dims()));
  }
  std::vector<FeatureVector> targets;
  targets.reserve(target.cells());
  for (std::size_t j = 0; j < target.cells(); ++j) targets.emplace_back(target.cell(j));

  std::vector<Correspondence> out(source.cells());
  for (std::size_t i = 0; i < source.cells(); ++i) {
    const FeatureVector query = source.cell(i);
    Correspondence best{0, -std::numeric_limits<double>::infinity()};
    for (std::size_t j = 0; j < targets.size(); ++j) {
      const double s = cosine_similarity(query, targets[j]);
      if (s > best.similarity) best = {j, s};
    }
    out[i] = best;
  }
  return out;
}

std::int64_t channel_reduction(std::int64_t in_channels, std::int64_t factor) {
  if (in_channels < 1 || factor < 1) {
    throw Error(ErrorCode::NonPositive, "channel reduction needs in_channels >= 1 and factor >= 1");
  }
  return std::max<std::int64_t>(1, in_channels / factor);
}

FeatureGrid parse_feature_grid(std::string_view bytes) {
  if (bytes.size() < 16) throw Error(ErrorCode::ParseError, "byte 0: feature grid header truncated");
  if (read_u32(bytes, 0) != kFeatureGridMagic) throw Error(ErrorCode::ParseError, "byte 0: bad feature grid magic");
  const std::size_t h = read_u32(bytes, 4);
  const std::size_t w = read_u32(bytes, 8);
  const std::size_t d = read_u32(bytes, 12);
  const std::size_t count = h * w * d;
  if (bytes.size() != 16 + 4 * count) {
    throw Error(ErrorCode::ParseError, "byte 16: expected " + std::to_string(4 * count) + " payload bytes, found " +
                                           std::to_string(bytes.size() - 16));
  }
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) values[k] = std::bit_cast<float>(read_u32(bytes, 16 + 4 * k));
  return FeatureGrid(h, w, d, std::move(values));
}

std::string serialize_feature_grid(const FeatureGrid& grid) {
  std::string out;
  out.reserve(16 + 4 * grid.values().size());
  append_u32(out, kFeatureGridMagic);
  append_u32(out, static_cast<std::uint32_t>(grid.height()));
  append_u32(out, static_cast<std::uint32_t>(grid.width()));
  append_u32(out, static_cast<std::uint32_t>(grid.dims()));
  for (double v : grid.values()) append_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

FeatureGrid load_feature_grid(const std::filesystem::path& path) { return parse_feature_grid(read_file(path)); }

void save_feature_grid(const FeatureGrid& grid, const std::filesystem::path& path) {
  write_file(path, serialize_feature_grid(grid));
}

}  // namespace symm
