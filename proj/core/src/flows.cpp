#include "slicekit/flows.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include "slicekit/assignment.hpp"
#include "slicekit/errors.hpp"

namespace slicekit {

void FlowConfig::validate() const {
  if (!(step_size > 0.0)) throw InvalidArgument("flow: step_size must be > 0");
  if (L == 0) throw InvalidArgument("flow: L must be >= 1");
  for (std::size_t c : checkpoints) {
    if (c < 1 || c > steps) throw InvalidArgument("flow: checkpoints must lie in [1, steps]");
  }
  if (metric == FlowMetric::kSwHighL && metric_slices == 0) throw InvalidArgument("flow: metric_slices must be >= 1");
}

FlowConfig FlowConfig::style_transfer() {
  FlowConfig cfg;
  cfg.steps = 1000;
  cfg.step_size = 1.0;
  cfg.mode = GradientMode::kSw2Squared;
  cfg.checkpoints = {200, 400, 600, 800, 1000};
  cfg.metric = FlowMetric::kSwHighL;
  cfg.round_final_to_bytes = true;
  return cfg;
}

double flow_metric(const PointCloud& z, const PointCloud& y, const FlowConfig& cfg) {
  if (cfg.metric == FlowMetric::kExactW2) return exact_w2(z, y);
  Rng rng(cfg.metric_seed);
  const DirectionSet slices = sample_uniform(rng, z.dim(), cfg.metric_slices);
  return std::sqrt(sw_estimate(z, y, slices, 2.0).value);
}

FlowTrace euler_flow(const PointCloud& x, const PointCloud& y, const Method& method, SelectorConfig scfg,
                     const FlowConfig& fcfg, Rng& rng) {
  fcfg.validate();
  if (x.size() != y.size() || x.dim() != y.dim()) throw InvalidArgument("euler_flow: clouds differ in shape");
  scfg.L = fcfg.L;
  scfg.dim = x.dim();
  scfg.validate();

  std::vector<std::size_t> checkpoints = fcfg.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  using Clock = std::chrono::steady_clock;
  double flow_seconds = 0.0;
  std::size_t evaluations = 0;
  const double scale = fcfg.step_size * static_cast<double>(x.size());

  Eigen::MatrixXd z = x.points();
  DirectionSetPtr slices;
  FlowTrace trace{{}, x, false, 0};
  auto next_checkpoint = checkpoints.begin();

  auto record = [&](std::size_t step, const PointCloud& cloud) {
    trace.records.push_back(FlowRecord{step, flow_metric(cloud, y, fcfg), flow_seconds, evaluations});
  };

  for (std::size_t t = 0; t < fcfg.steps; ++t) {
    const auto start = Clock::now();
    PointCloud current(z);
    SliceOracle oracle = SliceOracle::for_clouds(current, y, 2.0);
    slices = select_for_step(method, t, slices, oracle, scfg, rng);
    evaluations += oracle.evaluations();
    Eigen::MatrixXd grad;
    try {
      grad = sw_gradient(current, y, *slices, fcfg.mode);
    } catch (const DegenerateGradient&) {
      flow_seconds += std::chrono::duration<double>(Clock::now() - start).count();
      trace.stopped_early = true;
      break;
    }
    z.noalias() -= scale * grad;
    if (fcfg.round_final_to_bytes && t + 1 == fcfg.steps) z = z.array().round().max(0.0).min(255.0).matrix();
    flow_seconds += std::chrono::duration<double>(Clock::now() - start).count();
    trace.last_step = t + 1;

    if (next_checkpoint != checkpoints.end() && *next_checkpoint == t + 1) {
      record(t + 1, PointCloud(z));
      ++next_checkpoint;
    }
  }

  if (trace.stopped_early && fcfg.round_final_to_bytes) z = z.array().round().max(0.0).min(255.0).matrix();
  trace.final_cloud = PointCloud(z);
  for (; next_checkpoint != checkpoints.end(); ++next_checkpoint) record(*next_checkpoint, trace.final_cloud);
  return trace;
}

Eigen::MatrixXd match_pixel_count(const Eigen::MatrixXd& target, std::size_t n, Rng& rng) {
  const auto m = static_cast<std::size_t>(target.rows());
  if (m == 0 || n == 0) throw InvalidArgument("match_pixel_count: empty image");
  if (m == n) return target;
  std::vector<std::size_t> index(m);
  for (std::size_t i = 0; i < m; ++i) index[i] = i;
  std::vector<std::size_t> chosen;
  if (m > n) {
    std::shuffle(index.begin(), index.end(), rng);
    chosen.assign(index.begin(), index.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(chosen.begin(), chosen.end());
  } else {
    chosen = index;
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    while (chosen.size() < n) chosen.push_back(pick(rng));
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), target.cols());
  for (std::size_t i = 0; i < n; ++i) out.row(static_cast<Eigen::Index>(i)) = target.row(static_cast<Eigen::Index>(chosen[i]));
  return out;
}

StyleTransferResult style_transfer(const RgbImage& source, const RgbImage& target, const Method& method,
                                   const SelectorConfig& scfg, const FlowConfig& fcfg, Rng& rng) {
  if (source.pixel_count() == 0 || static_cast<std::size_t>(source.pixels.rows()) != source.pixel_count() ||
      source.pixels.cols() != 3) {
    throw InvalidArgument("style_transfer: malformed source image");
  }
  if (target.pixels.rows() == 0 || target.pixels.cols() != 3) throw InvalidArgument("style_transfer: malformed target image");
  const PointCloud src(source.pixels);
  const PointCloud tgt(match_pixel_count(target.pixels, source.pixel_count(), rng));
  FlowTrace trace = euler_flow(src, tgt, method, scfg, fcfg, rng);
  RgbImage out{source.width, source.height, trace.final_cloud.points()};
  if (!fcfg.round_final_to_bytes) out.pixels = out.pixels.array().round().max(0.0).min(255.0).matrix();
  return StyleTransferResult{std::move(out), std::move(trace)};
}

double histogram_tv_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols() || a.rows() == 0 || b.rows() == 0) throw InvalidArgument("histogram_tv_distance: shape mismatch");
  double total = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    std::array<double, 256> ha{}, hb{};
    for (Eigen::Index i = 0; i < a.rows(); ++i) ha[static_cast<std::size_t>(std::clamp(std::lround(a(i, c)), 0L, 255L))] += 1.0;
    for (Eigen::Index i = 0; i < b.rows(); ++i) hb[static_cast<std::size_t>(std::clamp(std::lround(b(i, c)), 0L, 255L))] += 1.0;
    double tv = 0.0;
    for (std::size_t k = 0; k < 256; ++k) {
      tv += std::abs(ha[k] / static_cast<double>(a.rows()) - hb[k] / static_cast<double>(b.rows()));
    }
    total += 0.5 * tv;
  }
  return total / static_cast<double>(a.cols());
}

}  // namespace slicekit
