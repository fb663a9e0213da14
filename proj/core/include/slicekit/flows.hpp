#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "slicekit/image.hpp"
#include "slicekit/ot1d.hpp"
#include "slicekit/selectors.hpp"

namespace slicekit {

enum class FlowMetric {
  kExactW2,  // optimal-assignment W_2
  kSwHighL,  // SW_2 over a fixed high-L Monte Carlo slice set
};

struct FlowConfig {
  std::size_t steps = 500;
  double step_size = 0.01;
  std::size_t L = 100;
  GradientMode mode = GradientMode::kSw2;
  std::vector<std::size_t> checkpoints{100, 200, 300, 400, 500};
  FlowMetric metric = FlowMetric::kExactW2;
  std::size_t metric_slices = 1000;       // kSwHighL only
  std::uint64_t metric_seed = 0x5eed;     // kSwHighL slice set
  bool round_final_to_bytes = false;      // clamp to [0,255] and round after the last step

  void validate() const;

  // steps = 1000, step_size = 1, SW2^2 gradient, rounding on, sliced metric
  // (images are too large for the O(n^3) assignment). On a 0..255 scale the
  // unit-speed SW2 gradient moves pixels about half a level per step.
  static FlowConfig style_transfer();
};

struct FlowRecord {
  std::size_t step = 0;
  double metric = 0.0;
  double seconds = 0.0;          // flow loop time so far, selector included, metric excluded
  std::size_t evaluations = 0;   // cumulative selector oracle calls
};

struct FlowTrace {
  std::vector<FlowRecord> records;  // sorted by step
  PointCloud final_cloud;
  bool stopped_early = false;
  std::size_t last_step = 0;  // number of Euler steps actually taken
};

double flow_metric(const PointCloud& z, const PointCloud& y, const FlowConfig& cfg);

// Z(0) = X; Z <- Z - step_size * n * grad SW(Z, Y; Theta_t) with Theta_t from
// select_for_step. A degenerate SW_2 gradient stops the flow and the current
// metric is recorded for every remaining checkpoint.
FlowTrace euler_flow(const PointCloud& x, const PointCloud& y, const Method& method, SelectorConfig scfg,
                     const FlowConfig& fcfg, Rng& rng);

// Target cloud with the source's pixel count: a random subset when the target
// is larger, all target pixels plus random duplicates when it is smaller.
Eigen::MatrixXd match_pixel_count(const Eigen::MatrixXd& target, std::size_t n, Rng& rng);

struct StyleTransferResult {
  RgbImage image;
  FlowTrace trace;
};

StyleTransferResult style_transfer(const RgbImage& source, const RgbImage& target, const Method& method,
                                   const SelectorConfig& scfg, const FlowConfig& fcfg, Rng& rng);

// Mean over the three channels of the total-variation distance between the
// 256-bin histograms of rounded values.
double histogram_tv_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace slicekit
