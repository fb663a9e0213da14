#include "slicekit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "slicekit/errors.hpp"

namespace slicekit {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed for '" + path.string() + "'");
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

}  // namespace

PointCloud parse_point_cloud(std::istream& in, std::string_view source_name) {
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = 0;
    while (pos < line.size() && is_space(line[pos])) ++pos;
    if (pos == line.size() || line[pos] == '#') continue;

    std::size_t count = 0;
    const char* p = line.data() + pos;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && is_space(*p)) ++p;
      if (p == end) break;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() || (next < end && !is_space(*next))) {
        throw FormatError(std::string(source_name) + ":" + std::to_string(line_no) + ": cannot parse number");
      }
      values.push_back(v);
      ++count;
      p = next;
    }
    if (dim == 0) {
      dim = count;
    } else if (count != dim) {
      throw FormatError(std::string(source_name) + ":" + std::to_string(line_no) + ": ragged row (expected " +
                        std::to_string(dim) + " values, found " + std::to_string(count) + ")");
    }
    ++rows;
  }
  if (rows == 0) throw FormatError(std::string(source_name) + ": empty point cloud file");

  Eigen::MatrixXd points(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < dim; ++k)
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = values[i * dim + k];
  if (!points.allFinite()) throw FormatError(std::string(source_name) + ": non-finite coordinate");
  return PointCloud(std::move(points));
}

PointCloud load_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return parse_point_cloud(in, path.string());
}

void save_point_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  std::string text;
  char buf[64];
  const Eigen::MatrixXd& m = cloud.points();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, m(i, k), std::chars_format::general, 17);
      if (k) text.push_back(' ');
      text.append(buf, end);
    }
    text.push_back('\n');
  }
  write_file(path, text);
}

RgbImage decode_ppm(std::string_view bytes) {
  std::size_t pos = 0;
  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      if (is_space(bytes[pos])) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](const char* what) {
    skip_space_and_comments();
    std::size_t value = 0;
    auto [next, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
    if (ec != std::errc()) throw FormatError(std::string("PPM: cannot read ") + what);
    pos = static_cast<std::size_t>(next - bytes.data());
    return value;
  };

  if (bytes.size() < 2 || bytes.substr(0, 2) != "P6") throw FormatError("PPM: missing P6 magic");
  pos = 2;
  const std::size_t width = read_uint("width");
  const std::size_t height = read_uint("height");
  const std::size_t maxval = read_uint("maxval");
  if (width == 0 || height == 0) throw FormatError("PPM: zero image dimension");
  if (maxval != 255) throw FormatError("PPM: only maxval 255 is supported");
  if (pos >= bytes.size() || !is_space(bytes[pos])) throw FormatError("PPM: truncated header");
  ++pos;

  const std::size_t n = width * height;
  if (bytes.size() - pos < n * 3) throw FormatError("PPM: truncated pixel payload");
  RgbImage image{width, height, Eigen::MatrixXd(static_cast<Eigen::Index>(n), 3)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < 3; ++c)
      image.pixels(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          static_cast<unsigned char>(bytes[pos + 3 * i + c]);
  return image;
}

RgbImage load_image(const std::filesystem::path& path) { return decode_ppm(read_file(path)); }

std::string encode_ppm(const RgbImage& image) {
  if (static_cast<std::size_t>(image.pixels.rows()) != image.pixel_count() || image.pixels.cols() != 3) {
    throw InvalidArgument("encode_ppm: pixel matrix does not match width * height x 3");
  }
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.pixel_count() * 3);
  for (Eigen::Index i = 0; i < image.pixels.rows(); ++i)
    for (Eigen::Index c = 0; c < 3; ++c) {
      const double v = std::clamp(std::round(image.pixels(i, c)), 0.0, 255.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(v)));
    }
  return out;
}

void save_image(const std::filesystem::path& path, const RgbImage& image) { write_file(path, encode_ppm(image)); }

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  std::string text = "experiment,method,seed,axis,metric\n";
  for (const auto& r : rows) {
    text += csv_field(r.experiment) + "," + csv_field(r.method) + "," + std::to_string(r.seed) + "," +
            format_number(r.axis) + "," + format_number(r.metric) + "\n";
  }
  write_file(path, text);
}

void write_timings_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  std::string text = "experiment,method,seed,axis,seconds\n";
  for (const auto& r : rows) {
    text += csv_field(r.experiment) + "," + csv_field(r.method) + "," + std::to_string(r.seed) + "," +
            format_number(r.axis) + "," + format_number(r.seconds) + "\n";
  }
  write_file(path, text);
}

std::uint64_t content_hash(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t content_hash(const Eigen::MatrixXd& m, std::uint64_t seed) {
  std::uint64_t h = content_hash(std::string_view(reinterpret_cast<const char*>(&seed), sizeof seed), seed);
  const std::int64_t shape[2] = {static_cast<std::int64_t>(m.rows()), static_cast<std::int64_t>(m.cols())};
  h = content_hash(std::string_view(reinterpret_cast<const char*>(shape), sizeof shape), h);
  return content_hash(std::string_view(reinterpret_cast<const char*>(m.data()),
                                       static_cast<std::size_t>(m.size()) * sizeof(double)),
                      h);
}

}  // namespace slicekit
