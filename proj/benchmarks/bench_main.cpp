#include <random>

#include <benchmark/benchmark.h>

#include "symm/geometry.hpp"
#include "symm/metrics.hpp"
#include "symm/symfit.hpp"

namespace {

using namespace symm;

PointCloud random_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  PointCloud c;
  c.reserve(n);
  for (std::size_t i = 0; i < n; ++i) c.push_back({u(rng), u(rng), u(rng)});
  return c;
}

/// Random half-box clusters mirrored across x = 0.
PointCloud mirrored_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 0.05);
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double k = static_cast<double>(i % 4);
    pts.push_back({0.1 + 0.1 * k + std::abs(g(rng)), 0.3 * k - 0.4 + g(rng), 0.5 * u(rng) - 0.25 * k / 3});
  }
  for (std::size_t i = 0; i < n / 2; ++i) pts.push_back({-pts[i].x(), pts[i].y(), pts[i].z()});
  return PointCloud(std::move(pts));
}

void BM_ChamferBrute(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud p = random_cloud(n, 1), q = random_cloud(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(chamfer(p, q));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChamferBrute)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_ChamferKdTree(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud p = random_cloud(n, 1), q = random_cloud(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(chamfer_accel(p, q));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChamferKdTree)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_EmdExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud p = random_cloud(n, 3), q = random_cloud(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(emd_exact(p, q).value);
}
BENCHMARK(BM_EmdExact)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void BM_EmdAuction(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud p = random_cloud(n, 3), q = random_cloud(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(emd_approx(p, q, 1e-3));
}
BENCHMARK(BM_EmdAuction)->RangeMultiplier(2)->Range(64, 2048)->Unit(benchmark::kMillisecond);

void BM_FitPlane(benchmark::State& state) {
  const PointCloud cloud = mirrored_cloud(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(fit_plane(cloud).residual);
}
BENCHMARK(BM_FitPlane)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
