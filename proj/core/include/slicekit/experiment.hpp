#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "slicekit/flows.hpp"
#include "slicekit/io.hpp"
#include "slicekit/landscapes.hpp"
#include "slicekit/selectors.hpp"

namespace slicekit {

enum class ExperimentKind { kLandscapes, kApproxError, kInterpolate, kStyleTransfer };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

// Seeded Gaussian cloud pair used when no input files are given:
// X ~ N(0, I), Y ~ N(shift, spread^2 I) with shift = (offset, -offset/2, offset/2, 0, ...).
// y_i = shift + spread * (rho * x_i + sqrt(1 - rho^2) * e_i) with fresh normal e_i, so
// rho = 0 gives independent clouds and rho = 1 an exact affine copy of X.
struct SyntheticClouds {
  std::size_t n = 512;
  int dim = 3;
  double offset = 1.5;
  double spread = 0.5;
  double correlation = 0.0;  // rho
  std::uint64_t seed = 2024;
};

std::pair<PointCloud, PointCloud> make_synthetic_clouds(const SyntheticClouds& spec);

// Seeded image pair used when no input files are given: a grayscale
// gradient source and a target split between two flat colours.
struct SyntheticImages {
  int size = 64;
  std::uint64_t seed = 7;
};

std::pair<RgbImage, RgbImage> make_synthetic_images(const SyntheticImages& spec);

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::kApproxError;
  std::vector<std::string> methods;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::vector<std::size_t> L_grid;  // approx-error and landscapes
  SelectorConfig selector;
  FlowConfig flow;

  // Point clouds (approx-error, interpolate) or P6 images (style-transfer).
  // Both empty selects the synthetic pair.
  std::filesystem::path source;
  std::filesystem::path target;
  SyntheticClouds synthetic_clouds;
  SyntheticImages synthetic_images;

  std::size_t reference_slices = 100000;
  std::uint64_t reference_seed = 99;
  std::vector<Landscape> landscapes = default_landscapes();

  std::filesystem::path output_dir = "out";
  std::filesystem::path cache_dir;  // empty: <output_dir>/cache
  std::size_t workers = 1;          // not part of the lock; results do not depend on it

  // Defaults for the given experiment (method list, L grid, flow settings).
  static RunConfig defaults(ExperimentKind kind);

  // Keys absent from `j` keep the experiment defaults. Unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j);
  // Every resolved field, including the landscape constants; from_json(to_json()) is lossless.
  nlohmann::json to_json() const;

  // Throws InvalidArgument (bad values, empty seed list, unknown methods) or
  // FormatError (inputs that do not exist or do not parse).
  void validate() const;
};

RunConfig load_run_config(const std::filesystem::path& path);

struct ExperimentOutput {
  std::vector<ResultRow> rows;        // deterministic order
  std::vector<std::string> failures;  // one diagnostic per failed (method, seed) sub-run
  bool ok() const { return failures.empty(); }
};

// Runs every (method, seed) sub-run, up to cfg.workers at a time, and writes
// results.csv, timings.csv, config.lock and the SVG plots into
// cfg.output_dir. Failed sub-runs are reported in the output; the rows of the
// others are still written.
ExperimentOutput run_experiment(const RunConfig& cfg);

// The worker count from SLICEKIT_WORKERS, or `fallback` when unset or invalid.
std::size_t workers_from_env(std::size_t fallback = 1);

// SW_2^2 reference for a cloud pair: an L-slice MC estimate, cached in
// `cache_dir` (if non-empty) under a key derived from the cloud contents,
// the slice count and the seed.
double reference_sw2_squared(const PointCloud& x, const PointCloud& y, std::size_t slices, std::uint64_t seed,
                             const std::filesystem::path& cache_dir);

// Least-squares slope of log(y) against log(x); requires positive values.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace slicekit
