#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace slicekit {

// Row-major RGB pixels as an (width * height) x 3 matrix of reals in [0, 255].
struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  Eigen::MatrixXd pixels;

  std::size_t pixel_count() const { return width * height; }
};

}  // namespace slicekit
