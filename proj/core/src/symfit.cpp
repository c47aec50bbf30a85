#include "symm/symfit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "symm/error.hpp"
#include "symm/kdtree.hpp"
#include "symm/symloss.hpp"

namespace symm {

namespace {

struct Covariance {
  Point3 centroid;
  Eigen::Vector3d eigenvalues;  // descending
  Matrix3 eigenvectors;         // column k pairs with eigenvalues[k]
};

Covariance principal_axes(const PointCloud& cloud) {
  Covariance out;
  out.centroid = cloud.centroid();
  Matrix3 cov = Matrix3::Zero();
  for (const auto& p : cloud) {
    const Point3 d = p - out.centroid;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(cloud.size());
  const Eigen::SelfAdjointEigenSolver<Matrix3> solver(cov);
  // Eigen sorts ascending.
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

/// Orthonormal (a, b) completing `n` to a right-handed frame.
std::pair<Point3, Point3> tangent_frame(const Point3& n) {
  Point3 helper = std::abs(n.x()) < 0.9 ? Point3::UnitX() : Point3::UnitY();
  Point3 a = n.cross(helper).normalized();
  Point3 b = n.cross(a);
  return {a, b};
}

/// Symmetry residual as a function of (theta, phi[, d]).
///
/// The polar axis of the spherical chart is orthogonal to the seed normal,
/// which sits at theta = pi/2, phi = 0; descent stays far from the chart's
/// poles. Both Chamfer directions between P and its mirror image are equal
/// (the reflection is an isometric involution), so one kd-tree over P
/// serves every evaluation.
class Objective {
 public:
  Objective(const PointCloud& cloud, const KdTree& tree, const Point3& centroid, const Point3& seed_normal,
            bool fit_offset, ChamferMode mode)
      : cloud_(cloud), tree_(tree), centroid_(centroid), seed_(seed_normal), fit_offset_(fit_offset),
        mode_(mode), hints_(cloud.size()) {
    std::tie(polar_, side_) = tangent_frame(seed_normal);
    for (std::size_t i = 0; i < hints_.size(); ++i) hints_[i] = i;
  }

  Eigen::Index dims() const { return fit_offset_ ? 3 : 2; }

  Eigen::VectorXd initial(double seed_offset) const {
    Eigen::VectorXd x(dims());
    x(0) = std::numbers::pi / 2;
    x(1) = 0.0;
    if (fit_offset_) x(2) = seed_offset;
    return x;
  }

  SymmetryPlane plane(const Eigen::VectorXd& x) const {
    const double theta = x(0);
    const double phi = x(1);
    const Point3 n = std::cos(theta) * polar_ + std::sin(theta) * (std::cos(phi) * seed_ + std::sin(phi) * side_);
    if (fit_offset_) return SymmetryPlane::make(n, x(2));
    return SymmetryPlane::through(n, centroid_);
  }

  double operator()(const Eigen::VectorXd& x) {
    const SymmetryPlane pl = plane(x);
    const Point3& n = pl.normal();
    const double d = pl.offset();
    double sum = 0.0;
    for (std::size_t i = 0; i < cloud_.size(); ++i) {
      const Point3& p = cloud_[i];
      const Point3 mirrored = p - 2.0 * (n.dot(p) + d) * n;
      const Neighbor nb = tree_.nearest(mirrored, hints_[i]);
      hints_[i] = nb.index;
      sum += mode_ == ChamferMode::Squared ? nb.squared_distance : std::sqrt(nb.squared_distance);
    }
    ++evaluations_;
    return 2.0 * sum / static_cast<double>(cloud_.size());
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const PointCloud& cloud_;
  const KdTree& tree_;
  Point3 centroid_;
  Point3 seed_;
  Point3 polar_;
  Point3 side_;
  bool fit_offset_;
  ChamferMode mode_;
  std::vector<std::size_t> hints_;
  std::size_t evaluations_ = 0;
};

struct RestartOutcome {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

Eigen::VectorXd central_gradient(Objective& f, const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    probe(k) = x(k) + h;
    const double up = f(probe);
    probe(k) = x(k) - h;
    const double down = f(probe);
    probe(k) = x(k);
    g(k) = (up - down) / (2.0 * h);
  }
  return g;
}

/// BFGS with a backtracking search that accepts strictly improving steps
/// only, so the trace is monotone. Falls back to steepest descent whenever
/// the curvature model stops producing descent.
RestartOutcome descend(Objective& f, Eigen::VectorXd x, const FitConfig& config) {
  constexpr double kMinStep = 1e-12;
  const Eigen::Index n = x.size();

  RestartOutcome out;
  double fx = f(x);
  out.trace.push_back({0, fx});

  Eigen::VectorXd g = central_gradient(f, x, config.fd_step);
  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;  // inv_hessian is a scaled identity
  double step_scale = config.step_init;

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const double gnorm = g.norm();
    if (gnorm <= config.tol) {
      out.converged = true;
      break;
    }
    if (fresh) inv_hessian = Eigen::MatrixXd::Identity(n, n) * (step_scale / gnorm);
    Eigen::VectorXd dir = -inv_hessian * g;
    if (!(dir.dot(g) < 0.0)) {
      inv_hessian = Eigen::MatrixXd::Identity(n, n) * (step_scale / gnorm);
      dir = -inv_hessian * g;
      fresh = true;
    }

    double t = 1.0;
    std::optional<double> accepted;
    Eigen::VectorXd candidate;
    while (t * dir.norm() >= kMinStep) {
      candidate = x + t * dir;
      const double fc = f(candidate);
      if (fc < fx) {
        accepted = fc;
        break;
      }
      t *= 0.5;
    }

    if (!accepted) {
      if (!fresh) {
        // Retry this iteration from a steepest-descent model.
        fresh = true;
        --iter;
        continue;
      }
      out.converged = true;  // no improving step at resolution: local minimum
      break;
    }

    const Eigen::VectorXd s = candidate - x;
    const double improvement = fx - *accepted;
    x = candidate;
    fx = *accepted;
    out.iterations = iter;
    out.trace.push_back({iter, fx});
    if (improvement <= config.tol * std::max(fx, config.tol)) {
      out.converged = true;
      break;
    }

    const Eigen::VectorXd g_next = central_gradient(f, x, config.fd_step);
    const Eigen::VectorXd y = g_next - g;
    const double sy = s.dot(y);
    step_scale = std::max(s.norm() * 2.0, 1e-6);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      if (fresh) inv_hessian = Eigen::MatrixXd::Identity(n, n) * (sy / y.squaredNorm());
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      inv_hessian = (I - rho * s * y.transpose()) * inv_hessian * (I - rho * y * s.transpose()) +
                    rho * s * s.transpose();
      fresh = false;
    } else {
      fresh = true;
    }
    g = g_next;
  }

  out.x = std::move(x);
  out.residual = fx;
  return out;
}

void validate(const FitConfig& config) {
  if (config.restarts < 1 || config.max_iters < 1 || !(config.step_init > 0.0) || !(config.tol > 0.0) ||
      !(config.fd_step > 0.0)) {
    throw Error(ErrorCode::NonPositive, "fit configuration bounds must be positive");
  }
  if (config.pca_seeding && config.restarts < 3) {
    throw Error(ErrorCode::NonPositive, "PCA seeding needs at least 3 restarts");
  }
}

}  // namespace

std::vector<SymmetryPlane> pca_seed_planes(const PointCloud& cloud) {
  if (cloud.size() < 3) throw Error(ErrorCode::DegenerateCloud, "PCA seeding needs at least 3 points");
  const Covariance cov = principal_axes(cloud);
  if (!(cov.eigenvalues(0) > 1e-24)) {
    throw Error(ErrorCode::DegenerateCloud, "all points coincide; covariance has rank 0");
  }
  std::vector<SymmetryPlane> planes;
  for (int k = 0; k < 3; ++k) planes.push_back(SymmetryPlane::through(cov.eigenvectors.col(k), cov.centroid));
  return planes;
}

std::vector<SymmetryPlane> seed_planes(const PointCloud& cloud, const FitConfig& config) {
  validate(config);
  const Point3 centroid = cloud.centroid();
  std::vector<SymmetryPlane> seeds;
  if (config.pca_seeding) seeds = pca_seed_planes(cloud);

  // Fibonacci lattice on the upper hemisphere; planes are sign-agnostic.
  const int extra = config.restarts - static_cast<int>(seeds.size());
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < extra; ++k) {
    const double z = 1.0 - (k + 0.5) / extra;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * k;
    seeds.push_back(SymmetryPlane::through(Point3(r * std::cos(phi), r * std::sin(phi), z), centroid));
  }
  seeds.resize(static_cast<std::size_t>(config.restarts), seeds.front());
  return seeds;
}

FitResult fit_plane(const PointCloud& cloud, const FitConfig& config) {
  validate(config);
  if (cloud.size() < 4) throw Error(ErrorCode::DegenerateCloud, "plane fitting needs at least 4 points");
  const Covariance cov = principal_axes(cloud);
  if (!(cov.eigenvalues(0) > 1e-24) || cov.eigenvalues(1) <= 1e-12 * cov.eigenvalues(0)) {
    throw Error(ErrorCode::DegenerateCloud, "cloud is coincident or collinear");
  }

  const std::vector<SymmetryPlane> seeds = seed_planes(cloud, config);
  const KdTree tree(cloud);
  std::vector<RestartOutcome> outcomes(seeds.size());

  auto run = [&](std::size_t id) {
    Objective f(cloud, tree, cov.centroid, seeds[id].normal(), config.fit_offset, config.mode);
    outcomes[id] = descend(f, f.initial(seeds[id].offset()), config);
  };

  unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(seeds.size()));
  if (workers <= 1) {
    for (std::size_t id = 0; id < seeds.size(); ++id) run(id);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t id = next++; id < seeds.size(); id = next++) run(id);
      });
    }
  }

  std::size_t best = 0;
  for (std::size_t id = 1; id < outcomes.size(); ++id) {
    if (outcomes[id].residual < outcomes[best].residual) best = id;
  }
  bool any_converged = false;
  for (const auto& o : outcomes) any_converged = any_converged || o.converged;

  Objective f(cloud, tree, cov.centroid, seeds[best].normal(), config.fit_offset, config.mode);
  const SymmetryPlane plane = f.plane(outcomes[best].x);
  FitResult result{
      .plane = plane,
      .residual = symmetry_residual(cloud, plane, config.mode),
      .iterations = outcomes[best].iterations,
      .trace = std::move(outcomes[best].trace),
      .seed_id = static_cast<int>(best),
      .converged = any_converged,
  };
  return result;
}

std::string_view to_string(SymmetrizeStrategy strategy) noexcept {
  return strategy == SymmetrizeStrategy::Union ? "union" : "replace_worse_half";
}

SymmetrizeStrategy parse_symmetrize_strategy(std::string_view text) {
  if (text == "union") return SymmetrizeStrategy::Union;
  if (text == "replace_worse_half") return SymmetrizeStrategy::ReplaceWorseHalf;
  throw Error(ErrorCode::ParseError, "unknown symmetrize strategy '" + std::string(text) + "'");
}

PointCloud symmetrize(const PointCloud& cloud, const SymmetryPlane& plane, SymmetrizeStrategy strategy) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "nothing to symmetrize");
  std::vector<Point3> out;
  if (strategy == SymmetrizeStrategy::Union) {
    out.reserve(2 * cloud.size());
    out.assign(cloud.begin(), cloud.end());
    for (const auto& p : cloud) out.push_back(reflect_point(plane, p));
    return PointCloud(std::move(out));
  }

  std::size_t positive = 0;
  std::size_t negative = 0;
  for (const auto& p : cloud) {
    const double s = plane.signed_distance(p);
    if (s > 0.0) ++positive;
    if (s < 0.0) ++negative;
  }
  const double keep_sign = positive >= negative ? 1.0 : -1.0;
  std::vector<Point3> mirrored;
  for (const auto& p : cloud) {
    const double s = plane.signed_distance(p) * keep_sign;
    if (s < 0.0) continue;
    out.push_back(p);
    if (s > 0.0) mirrored.push_back(reflect_point(plane, p));
  }
  out.insert(out.end(), mirrored.begin(), mirrored.end());
  return PointCloud(std::move(out));
}

}  // namespace symm
