#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace symm {

using FeatureVector = Eigen::VectorXd;

/// x^T y / (|x| |y|), clamped to [-1, 1]. ZeroVector for a zero-norm input,
/// DimensionMismatch for differing lengths.
double cosine_similarity(const FeatureVector& a, const FeatureVector& b);

/// H x W grid of D-dimensional feature vectors, stored row-major.
class FeatureGrid {
 public:
  FeatureGrid(std::size_t height, std::size_t width, std::size_t dims);
  /// `values` holds height * width * dims entries, cell-major.
  FeatureGrid(std::size_t height, std::size_t width, std::size_t dims, std::vector<double> values);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t cells() const noexcept { return height_ * width_; }

  /// Vector at flat cell index `row * width + col`.
  Eigen::Map<const FeatureVector> cell(std::size_t flat) const;
  Eigen::Map<FeatureVector> cell(std::size_t flat);
  Eigen::Map<const FeatureVector> at(std::size_t row, std::size_t col) const { return cell(row * width_ + col); }

  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t dims_;
  std::vector<double> values_;
};

struct Correspondence {
  std::size_t target = 0;  // flat index into the target grid
  double similarity = 0.0;
};

/// For every cell of `source`, the most cosine-similar cell of `target`
/// (lowest flat index on ties). Result is indexed like `source`'s cells.
std::vector<Correspondence> correspondence_map(const FeatureGrid& source, const FeatureGrid& target);

/// max(1, in_channels / factor) with floor division. NonPositive if either
/// argument is below 1.
std::int64_t channel_reduction(std::int64_t in_channels, std::int64_t factor);

inline constexpr std::uint32_t kFeatureGridMagic = 0x31475346;  // "FSG1" little-endian

/// Container: magic, H, W, D as uint32 LE, then H*W*D float32 LE row-major.
FeatureGrid parse_feature_grid(std::string_view bytes);
std::string serialize_feature_grid(const FeatureGrid& grid);
FeatureGrid load_feature_grid(const std::filesystem::path& path);
void save_feature_grid(const FeatureGrid& grid, const std::filesystem::path& path);

}  // namespace symm
