#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "slicekit/image.hpp"
#include "slicekit/ot1d.hpp"

namespace slicekit {

// Whitespace-separated text, one point per line; d is taken from the first
// non-blank line. Blank lines and lines starting with '#' are skipped.
// Ragged rows and unparsable numbers raise FormatError naming the line.
PointCloud load_point_cloud(const std::filesystem::path& path);
PointCloud parse_point_cloud(std::istream& in, std::string_view source_name = "<stream>");

// 17 significant digits, so a save/load round trip is exact.
void save_point_cloud(const std::filesystem::path& path, const PointCloud& cloud);

// Binary PPM (P6, maxval 255), row-major pixels.
RgbImage load_image(const std::filesystem::path& path);
RgbImage decode_ppm(std::string_view bytes);
// Values are rounded and clamped to [0, 255].
void save_image(const std::filesystem::path& path, const RgbImage& image);
std::string encode_ppm(const RgbImage& image);

// Shortest round-trip decimal form, independent of the C++ locale.
std::string format_number(double value);

struct ResultRow {
  std::string experiment;
  std::string method;
  std::uint64_t seed = 0;
  double axis = 0.0;     // L or step
  double metric = 0.0;
  double seconds = 0.0;  // wall clock, written to timings.csv only
};

// results.csv: experiment,method,seed,axis,metric (deterministic content).
void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
// timings.csv: experiment,method,seed,axis,seconds.
void write_timings_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

// 64-bit FNV-1a over raw bytes; stable across runs and platforms of equal endianness.
std::uint64_t content_hash(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t content_hash(const Eigen::MatrixXd& m, std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace slicekit
