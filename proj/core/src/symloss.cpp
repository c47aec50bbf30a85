#include "symm/symloss.hpp"

#include <cmath>

#include "symm/error.hpp"

namespace symm {

DualLossBreakdown dual_loss(const PointCloud& pred, const SymmetryPlane& plane, const PointCloud& gt,
                            ChamferMode mode, double sym_weight) {
  if (!std::isfinite(sym_weight) || sym_weight < 0.0) {
    throw Error(ErrorCode::NonPositive, "symmetry weight must be finite and non-negative");
  }
  const PointCloud mirrored = reflect_cloud(plane, pred);
  DualLossBreakdown out;
  out.recon = chamfer_accel(pred, gt, mode);
  out.sym = chamfer_accel(mirrored, gt, mode);
  out.total = out.recon + sym_weight * out.sym;
  return out;
}

double symmetry_residual(const PointCloud& cloud, const SymmetryPlane& plane, ChamferMode mode) {
  return chamfer_accel(cloud, reflect_cloud(plane, cloud), mode);
}

}  // namespace symm
