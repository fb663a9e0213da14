#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "slicekit/assignment.hpp"
#include "slicekit/errors.hpp"
#include "slicekit/flows.hpp"

namespace slicekit {
namespace {

PointCloud gaussian_cloud(Rng& rng, int n, int d, double shift = 0.0) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) m(i, k) = normal(rng) + shift;
  return PointCloud(m);
}

double brute_force_w2(const PointCloud& x, const PointCloud& y) {
  std::vector<std::size_t> perm(x.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = INFINITY;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      c += (x.points().row(static_cast<Eigen::Index>(i)) - y.points().row(static_cast<Eigen::Index>(perm[i]))).squaredNorm();
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / static_cast<double>(x.size()));
}

TEST(ExactW2, MatchesBruteForce) {
  Rng rng(1);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + t % 7;
    const PointCloud x = gaussian_cloud(rng, n, 3), y = gaussian_cloud(rng, n, 3, 0.5);
    EXPECT_NEAR(exact_w2(x, y), brute_force_w2(x, y), 1e-12);
  }
}

TEST(ExactW2, AssignmentIsAPermutation) {
  Rng rng(2);
  const PointCloud x = gaussian_cloud(rng, 200, 3), y = gaussian_cloud(rng, 200, 3);
  std::vector<std::size_t> a = optimal_assignment(x, y);
  std::sort(a.begin(), a.end());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], i);
}

TEST(ExactW2, MetricProperties) {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const PointCloud a = gaussian_cloud(rng, 40, 3), b = gaussian_cloud(rng, 40, 3, 1.0), c = gaussian_cloud(rng, 40, 3, -1.0);
    EXPECT_EQ(exact_w2(a, a), 0.0);
    EXPECT_NEAR(exact_w2(a, b), exact_w2(b, a), 1e-12);
    EXPECT_LE(exact_w2(a, c), exact_w2(a, b) + exact_w2(b, c) + 1e-12);
  }
}

TEST(ExactW2, TranslationGivesShiftNorm) {
  Rng rng(4);
  const PointCloud a = gaussian_cloud(rng, 50, 3);
  const Eigen::RowVector3d shift(0.3, -0.4, 1.2);
  EXPECT_NEAR(exact_w2(a, PointCloud(a.points().rowwise() + shift)), shift.norm(), 1e-12);
}

TEST(ExactW2, SlicedIsALowerBound) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const PointCloud a = gaussian_cloud(rng, 64, 3), b = gaussian_cloud(rng, 64, 3, 0.7);
    const double sw = std::sqrt(sw_estimate(a, b, sample_uniform(rng, 3, 50), 2.0).value);
    EXPECT_LE(sw, exact_w2(a, b));
  }
}

TEST(ExactW2, SizeGuard) {
  const PointCloud big(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kExactW2MaxPoints) + 1, 2));
  EXPECT_THROW(exact_w2(big, big), ProblemTooLarge);
  EXPECT_THROW(exact_w2(PointCloud(Eigen::MatrixXd::Zero(2, 2)), PointCloud(Eigen::MatrixXd::Zero(3, 2))),
               InvalidArgument);
}

TEST(EulerFlow, IdenticalCloudsStayAtZero) {
  Rng rng(6);
  const PointCloud x = gaussian_cloud(rng, 30, 3);
  FlowConfig fcfg;
  fcfg.steps = 50;
  fcfg.checkpoints = {10, 50};
  for (GradientMode mode : {GradientMode::kSw2, GradientMode::kSw2Squared}) {
    fcfg.mode = mode;
    const FlowTrace trace = euler_flow(x, x, parse_method("sw"), SelectorConfig{}, fcfg, rng);
    ASSERT_EQ(trace.records.size(), 2u);
    for (const auto& r : trace.records) EXPECT_EQ(r.metric, 0.0);
    EXPECT_EQ(trace.final_cloud.points(), x.points());
  }
}

// One point, one fixed slice along the displacement: |z_t| = (1 - 2 * step)^t.
TEST(EulerFlow, SinglePointContractsGeometrically) {
  const PointCloud x(Eigen::RowVector3d(0, 0, 1)), y(Eigen::RowVector3d(0, 0, 0));
  FlowConfig fcfg;
  fcfg.mode = GradientMode::kSw2Squared;
  fcfg.L = 1;
  fcfg.checkpoints = {1, 100, 200, 300, 400, 500};
  SelectorConfig scfg;
  scfg.batch = 1;
  scfg.init_size = 1;
  Rng rng(0);
  // The one-point equal-area Sobol set is the south pole, parallel to the displacement.
  const FlowTrace trace = euler_flow(x, y, parse_method("eqsw"), scfg, fcfg, rng);
  double prev = 1.0;
  for (const auto& r : trace.records) {
    EXPECT_NEAR(r.metric, std::pow(0.98, static_cast<double>(r.step)), 1e-12);
    EXPECT_LT(r.metric, prev);
    prev = r.metric;
  }
  EXPECT_LT(trace.records.back().metric, 1e-3);
}

TEST(EulerFlow, ReducesDistanceAndIsDeterministic) {
  Rng data(7);
  const PointCloud x = gaussian_cloud(data, 64, 3), y = gaussian_cloud(data, 64, 3, 2.0);
  FlowConfig fcfg;
  fcfg.steps = 200;
  fcfg.step_size = 0.05;
  fcfg.checkpoints = {50, 200};
  fcfg.L = 20;
  for (const char* name : {"sw", "rcqsw", "bosw"}) {
    Rng r1(3), r2(3);
    const FlowTrace a = euler_flow(x, y, parse_method(name), SelectorConfig{}, fcfg, r1);
    const FlowTrace b = euler_flow(x, y, parse_method(name), SelectorConfig{}, fcfg, r2);
    EXPECT_LT(a.records.back().metric, 0.5 * exact_w2(x, y)) << name;
    EXPECT_EQ(a.final_cloud.points(), b.final_cloud.points()) << name;
    EXPECT_EQ(a.records.back().metric, b.records.back().metric) << name;
  }
}

TEST(EulerFlow, EvaluationCountsTrackSelectors) {
  Rng data(8);
  const PointCloud x = gaussian_cloud(data, 32, 3), y = gaussian_cloud(data, 32, 3, 1.0);
  FlowConfig fcfg;
  fcfg.steps = 10;
  fcfg.checkpoints = {10};
  fcfg.L = 20;
  SelectorConfig scfg;
  scfg.arbosw_refresh = 4;
  Rng rng(1);
  EXPECT_EQ(euler_flow(x, y, parse_method("bosw"), scfg, fcfg, rng).records.back().evaluations, 20u);
  // Rebuilt at t = 0, 4, 8.
  EXPECT_EQ(euler_flow(x, y, parse_method("arbosw"), scfg, fcfg, rng).records.back().evaluations, 3u * 30u);
  EXPECT_EQ(euler_flow(x, y, parse_method("sw"), scfg, fcfg, rng).records.back().evaluations, 0u);
}

TEST(EulerFlow, RejectsBadConfig) {
  Rng rng(9);
  const PointCloud x = gaussian_cloud(rng, 8, 3);
  FlowConfig fcfg;
  fcfg.checkpoints = {600};
  EXPECT_THROW(euler_flow(x, x, parse_method("sw"), SelectorConfig{}, fcfg, rng), InvalidArgument);
  fcfg = FlowConfig{};
  fcfg.step_size = 0.0;
  EXPECT_THROW(euler_flow(x, x, parse_method("sw"), SelectorConfig{}, fcfg, rng), InvalidArgument);
  EXPECT_THROW(euler_flow(x, gaussian_cloud(rng, 9, 3), parse_method("sw"), SelectorConfig{}, FlowConfig{}, rng),
               InvalidArgument);
}

TEST(PixelCount, SubsetAndDuplicates) {
  Rng rng(10);
  Eigen::MatrixXd t(5, 3);
  for (int i = 0; i < 5; ++i) t.row(i).setConstant(i);
  const Eigen::MatrixXd smaller = match_pixel_count(t, 3, rng);
  EXPECT_EQ(smaller.rows(), 3);
  EXPECT_TRUE(smaller(0, 0) < smaller(1, 0) && smaller(1, 0) < smaller(2, 0));
  const Eigen::MatrixXd larger = match_pixel_count(t, 12, rng);
  EXPECT_EQ(larger.rows(), 12);
  EXPECT_EQ(larger.topRows(5), t);
  EXPECT_EQ(match_pixel_count(t, 5, rng), t);
}

TEST(StyleTransfer, RoundsToBytesAndKeepsShape) {
  RgbImage src{6, 4, Eigen::MatrixXd(24, 3)}, tgt{5, 5, Eigen::MatrixXd(25, 3)};
  Rng rng(11);
  std::uniform_real_distribution<double> unif(0.0, 255.0);
  for (Eigen::Index i = 0; i < src.pixels.size(); ++i) src.pixels.data()[i] = unif(rng);
  for (Eigen::Index i = 0; i < tgt.pixels.size(); ++i) tgt.pixels.data()[i] = unif(rng);
  FlowConfig fcfg = FlowConfig::style_transfer();
  fcfg.steps = 20;
  fcfg.checkpoints = {20};
  fcfg.L = 10;
  const StyleTransferResult out = style_transfer(src, tgt, parse_method("sw"), SelectorConfig{}, fcfg, rng);
  EXPECT_EQ(out.image.width, 6u);
  EXPECT_EQ(out.image.height, 4u);
  EXPECT_EQ(out.image.pixels.rows(), 24);
  EXPECT_TRUE((out.image.pixels.array() == out.image.pixels.array().round()).all());
  EXPECT_GE(out.image.pixels.minCoeff(), 0.0);
  EXPECT_LE(out.image.pixels.maxCoeff(), 255.0);
}

TEST(StyleTransfer, IdenticalImagesAreUnchanged) {
  RgbImage img{4, 4, Eigen::MatrixXd(16, 3)};
  for (Eigen::Index i = 0; i < img.pixels.size(); ++i) img.pixels.data()[i] = static_cast<double>((i * 37) % 256);
  FlowConfig fcfg = FlowConfig::style_transfer();
  fcfg.steps = 10;
  fcfg.checkpoints = {10};
  Rng rng(12);
  const StyleTransferResult out = style_transfer(img, img, parse_method("rcqsw"), SelectorConfig{}, fcfg, rng);
  EXPECT_EQ(out.image.pixels, img.pixels);
  EXPECT_EQ(histogram_tv_distance(out.image.pixels, img.pixels), 0.0);
}

TEST(HistogramTv, KnownValues) {
  Eigen::MatrixXd a(2, 3), b(2, 3);
  a << 0, 0, 0, 255, 255, 255;
  b << 0, 0, 0, 0, 0, 0;
  EXPECT_DOUBLE_EQ(histogram_tv_distance(a, b), 0.5);
  EXPECT_EQ(histogram_tv_distance(a, a), 0.0);
  Eigen::MatrixXd c(1, 3);
  c << 300, -4, 254.6;
  Eigen::MatrixXd d(1, 3);
  d << 255, 0, 255;
  EXPECT_EQ(histogram_tv_distance(c, d), 0.0);
}

}  // namespace
}  // namespace slicekit
