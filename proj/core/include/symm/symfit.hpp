#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "symm/geometry.hpp"
#include "symm/metrics.hpp"

namespace symm {

struct FitConfig {
  int restarts = 8;        // >= 3 when PCA seeding is on (the three principal planes)
  int max_iters = 300;     // per restart
  double step_init = 0.1;  // first trial step, radians (and model units for d)
  double tol = 1e-8;       // gradient-norm / improvement tolerance
  bool fit_offset = false; // false: plane through the centroid
  ChamferMode mode = ChamferMode::Squared;
  bool pca_seeding = true;
  double fd_step = 1e-5;   // central finite-difference step
  unsigned threads = 1;    // restarts run concurrently; 0 = hardware concurrency
};

struct TracePoint {
  int iteration = 0;
  double residual = 0.0;
};

struct FitResult {
  SymmetryPlane plane;
  double residual = 0.0;  // symmetry_residual(P, plane)
  int iterations = 0;
  std::vector<TracePoint> trace;  // winning restart; non-increasing
  int seed_id = 0;
  bool converged = false;
};

/// Planes through the centroid orthogonal to the covariance eigenvectors,
/// ordered by descending eigenvalue. DegenerateCloud for N < 3 or when all
/// points coincide.
std::vector<SymmetryPlane> pca_seed_planes(const PointCloud& cloud);

/// Deterministic starting planes: PCA planes first (ids 0..2), then
/// quasi-uniform hemisphere directions.
std::vector<SymmetryPlane> seed_planes(const PointCloud& cloud, const FitConfig& config);

/// Multi-start quasi-Newton descent on the symmetry residual over unit
/// normals (spherical angles; plus d when `fit_offset`). Returns the lowest
/// residual restart, ties to the lowest seed id. A result with
/// `converged == false` means every restart hit `max_iters`.
/// DegenerateCloud for N < 4 or collinear/coincident clouds.
FitResult fit_plane(const PointCloud& cloud, const FitConfig& config = {});

enum class SymmetrizeStrategy { Union, ReplaceWorseHalf };

std::string_view to_string(SymmetrizeStrategy strategy) noexcept;
SymmetrizeStrategy parse_symmetrize_strategy(std::string_view text);

/// Union: P followed by reflect(P), 2N points.
/// ReplaceWorseHalf: keeps the side holding more points (ties: positive side),
/// including on-plane points, and mirrors it over the other side.
PointCloud symmetrize(const PointCloud& cloud, const SymmetryPlane& plane,
                      SymmetrizeStrategy strategy = SymmetrizeStrategy::Union);

}  // namespace symm
