#pragma once

#include "symm/geometry.hpp"
#include "symm/metrics.hpp"

namespace symm {

/// Terms of the dual-supervision objective L = L_recon(P, P_gt) + w * L_sym(P_sym, P_gt).
struct DualLossBreakdown {
  double recon = 0.0;
  double sym = 0.0;
  double total = 0.0;
};

/// recon = chamfer(P, P_gt); sym = chamfer(reflect(P), P_gt); total = recon + sym_weight * sym.
/// The weight defaults to 1 (the unweighted sum); 0 reproduces a no-symmetry ablation.
DualLossBreakdown dual_loss(const PointCloud& pred, const SymmetryPlane& plane, const PointCloud& gt,
                            ChamferMode mode = ChamferMode::Squared, double sym_weight = 1.0);

/// chamfer(P, reflect(P)). Zero iff P is mirror-symmetric about the plane.
double symmetry_residual(const PointCloud& cloud, const SymmetryPlane& plane,
                         ChamferMode mode = ChamferMode::Squared);

}  // namespace symm
