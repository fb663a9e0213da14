#include <benchmark/benchmark.h>

#include <vector>

#include "slicekit/assignment.hpp"
#include "slicekit/gp.hpp"
#include "slicekit/ot1d.hpp"
#include "slicekit/qsw.hpp"
#include "slicekit/selectors.hpp"
#include "slicekit/sphere.hpp"

namespace {

using namespace slicekit;

PointCloud gaussian_cloud(Rng& rng, Eigen::Index n, double shift) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd pts(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < 3; ++k) pts(i, k) = normal(rng) + shift;
  }
  return PointCloud(std::move(pts));
}

void BM_SwEstimate(benchmark::State& state) {
  Rng rng(1);
  const auto n = state.range(0);
  const auto L = static_cast<std::size_t>(state.range(1));
  const PointCloud mu = gaussian_cloud(rng, n, 0.0);
  const PointCloud nu = gaussian_cloud(rng, n, 1.0);
  const DirectionSet slices = sample_uniform(rng, 3, L);
  for (auto _ : state) benchmark::DoNotOptimize(sw_estimate(mu, nu, slices, 2.0).value);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(L));
}
BENCHMARK(BM_SwEstimate)->Args({500, 100})->Args({500, 1000})->Args({2000, 100});

void BM_SwGradient(benchmark::State& state) {
  Rng rng(2);
  const PointCloud z = gaussian_cloud(rng, state.range(0), 0.0);
  const PointCloud y = gaussian_cloud(rng, state.range(0), 1.0);
  const DirectionSet slices = qsw_base_set(QswKind::kCoulombOptimized, 100, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sw_value_and_gradient(z, y, slices, GradientMode::kSw2Squared));
}
BENCHMARK(BM_SwGradient)->Arg(500)->Arg(2000);

void BM_GpFit(benchmark::State& state) {
  Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const DirectionSet dirs = sample_uniform(rng, 3, n);
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = dirs.row(i)[2] * dirs.row(i)[2];
  const GpOptions opts{std::nullopt, 1e-8, SelectorConfig{}.gp_max_jitter};
  for (auto _ : state) benchmark::DoNotOptimize(fit(dirs, vals, opts));
}
BENCHMARK(BM_GpFit)->Arg(50)->Arg(200)->Arg(500);

void BM_ProposeBatch(benchmark::State& state) {
  Rng rng(4);
  const DirectionSet dirs = sample_uniform(rng, 3, 50);
  std::vector<double> vals(50);
  for (std::size_t i = 0; i < 50; ++i) vals[i] = dirs.row(i)[0];
  SelectorConfig cfg;
  cfg.dim = 3;
  cfg.pool_size = static_cast<std::size_t>(state.range(0));
  const GpState gp = fit(dirs, vals, GpOptions{std::nullopt, 1e-8, cfg.gp_max_jitter});
  for (auto _ : state) benchmark::DoNotOptimize(propose_batch(gp, dirs, cfg, rng));
}
BENCHMARK(BM_ProposeBatch)->Arg(1000)->Arg(5000);

void BM_ExactW2(benchmark::State& state) {
  Rng rng(5);
  const PointCloud x = gaussian_cloud(rng, state.range(0), 0.0);
  const PointCloud y = gaussian_cloud(rng, state.range(0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(exact_w2(x, y));
}
BENCHMARK(BM_ExactW2)->Arg(100)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
