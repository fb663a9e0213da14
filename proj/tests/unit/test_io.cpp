#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/Core>
#include <gtest/gtest.h>

#include "slicekit/errors.hpp"
#include "slicekit/io.hpp"

namespace slicekit {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("slicekit_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

TEST(PointCloudText, ParsesCommentsAndBlankLines) {
  std::istringstream in("# header\n1 2 3\n\n  4\t5 6  \n# trailing\n-1e-3 0 7.5\n");
  const PointCloud c = parse_point_cloud(in);
  ASSERT_EQ(c.size(), 3u);
  ASSERT_EQ(c.dim(), 3);
  EXPECT_EQ(c.points()(1, 1), 5.0);
  EXPECT_EQ(c.points()(2, 0), -1e-3);
}

TEST(PointCloudText, ErrorsNameTheLine) {
  std::istringstream ragged("1 2 3\n4 5\n");
  try {
    parse_point_cloud(ragged, "cloud.txt");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("cloud.txt:2"), std::string::npos) << e.what();
  }
  std::istringstream junk("1 2 x\n");
  EXPECT_THROW(parse_point_cloud(junk), FormatError);
  std::istringstream empty("# nothing\n\n");
  EXPECT_THROW(parse_point_cloud(empty), FormatError);
  std::istringstream inf("1 inf 2\n");
  EXPECT_THROW(parse_point_cloud(inf), FormatError);
  EXPECT_THROW(load_point_cloud("/nonexistent/slicekit/cloud.txt"), FormatError);
}

TEST(PointCloudText, SaveLoadRoundTripIsExact) {
  Eigen::MatrixXd m(3, 2);
  m << 0.1, 1.0 / 3.0, -2.5e-300, 1e300, 123456789.123456789, -0.0;
  const fs::path p = temp_dir("cloud") / "c.txt";
  save_point_cloud(p, PointCloud(m));
  EXPECT_EQ(load_point_cloud(p).points(), m);
}

TEST(Ppm, OnePixelImage) {
  const std::string bytes = std::string("P6\n1 1\n255\n") + char(10) + char(200) + char(255);
  const RgbImage img = decode_ppm(bytes);
  EXPECT_EQ(img.width, 1u);
  EXPECT_EQ(img.height, 1u);
  EXPECT_EQ(img.pixels(0, 0), 10.0);
  EXPECT_EQ(img.pixels(0, 1), 200.0);
  EXPECT_EQ(img.pixels(0, 2), 255.0);
  EXPECT_EQ(encode_ppm(img), bytes);
}

TEST(Ppm, HeaderCommentsAreSkipped) {
  const std::string bytes = std::string("P6 # made by hand\n2 # width\n1\n255\n") + std::string(6, 'A');
  const RgbImage img = decode_ppm(bytes);
  EXPECT_EQ(img.width, 2u);
  EXPECT_EQ(img.pixels(1, 2), 65.0);
}

TEST(Ppm, RejectsMalformedInput) {
  EXPECT_THROW(decode_ppm("P3\n1 1\n255\n"), FormatError);
  EXPECT_THROW(decode_ppm(std::string("P6\n2 2\n255\n") + "abc"), FormatError);
  EXPECT_THROW(decode_ppm("P6\n1 1\n65535\n"), FormatError);
  EXPECT_THROW(decode_ppm("P6\n0 1\n255\n"), FormatError);
  EXPECT_THROW(decode_ppm("P6\n1 1\n255"), FormatError);
}

TEST(Ppm, ByteRoundTripAndClamping) {
  RgbImage img{4, 3, Eigen::MatrixXd(12, 3)};
  for (Eigen::Index i = 0; i < img.pixels.size(); ++i) img.pixels.data()[i] = static_cast<double>((i * 23) % 256);
  const fs::path p = temp_dir("ppm") / "i.ppm";
  save_image(p, img);
  const RgbImage back = load_image(p);
  EXPECT_EQ(back.pixels, img.pixels);
  EXPECT_EQ(encode_ppm(back), slurp(p));

  RgbImage wild{1, 1, Eigen::MatrixXd(1, 3)};
  wild.pixels << -20.0, 300.0, 127.5;
  const RgbImage clamped = decode_ppm(encode_ppm(wild));
  EXPECT_EQ(clamped.pixels(0, 0), 0.0);
  EXPECT_EQ(clamped.pixels(0, 1), 255.0);
  EXPECT_EQ(clamped.pixels(0, 2), 128.0);
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(100.0), "100");
  EXPECT_EQ(format_number(-2.5e-7), "-2.5e-07");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Csv, ResultsAndTimingsFiles) {
  const fs::path dir = temp_dir("csv");
  const std::vector<ResultRow> rows{{"interpolate", "sw", 3, 100, 0.25, 1.5}, {"x,y", "cqsw", 0, 10, 1e-3, 0.0}};
  write_results_csv(dir / "results.csv", rows);
  write_timings_csv(dir / "timings.csv", rows);
  EXPECT_EQ(slurp(dir / "results.csv"),
            "experiment,method,seed,axis,metric\ninterpolate,sw,3,100,0.25\n\"x,y\",cqsw,0,10,0.001\n");
  EXPECT_EQ(slurp(dir / "timings.csv"),
            "experiment,method,seed,axis,seconds\ninterpolate,sw,3,100,1.5\n\"x,y\",cqsw,0,10,0\n");
}

TEST(Hash, StableAndSensitive) {
  EXPECT_EQ(content_hash(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(content_hash("a"), 0xaf63dc4c8601ec8cull);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2), b = a;
  b(1, 1) = 1e-300;
  EXPECT_NE(content_hash(a), content_hash(b));
  EXPECT_EQ(content_hash(a), content_hash(Eigen::MatrixXd::Zero(2, 2)));
}

}  // namespace
}  // namespace slicekit
