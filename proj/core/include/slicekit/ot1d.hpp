#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "slicekit/sphere.hpp"

namespace slicekit {

// n points in R^d with implicit uniform weights 1/n.
class PointCloud {
 public:
  // Throws InvalidArgument on n == 0, d == 0 or non-finite entries.
  explicit PointCloud(Eigen::MatrixXd points);

  const Eigen::MatrixXd& points() const { return points_; }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }

 private:
  Eigen::MatrixXd points_;
};

// Finite-slice estimate of SW_p^p.
struct SwValue {
  double value = 0.0;  // mean over slices of W_p^p
  double p = 2.0;
  std::size_t slices = 0;

  // SW_p = value^(1/p).
  double distance() const;
};

enum class GradientMode {
  kSw2,         // d/dZ of SW_2 (undefined at SW_2 = 0)
  kSw2Squared,  // d/dZ of SW_2^2
};

// i-th entry = <row_i, theta>.
Eigen::VectorXd project(const PointCloud& cloud, const Direction& theta);

// (1/n) sum |x_(i) - y_(i)|^p over ascending order statistics. Inputs are not mutated.
double wasserstein_1d(std::span<const double> xs, std::span<const double> ys, double p);

// f(theta; mu, nu) = W_p^p between the two projections onto theta.
double slice_cost(const PointCloud& mu, const PointCloud& nu, const Direction& theta, double p);

// Per-slice costs in slice order.
std::vector<double> slice_costs(const PointCloud& mu, const PointCloud& nu, const DirectionSet& slices,
                                double p);

// Mean of slice_costs; the reduction runs sequentially in slice order.
SwValue sw_estimate(const PointCloud& mu, const PointCloud& nu, const DirectionSet& slices, double p);

struct SwGradient {
  Eigen::MatrixXd gradient;    // n x d
  double sw2_squared = 0.0;    // estimate the gradient was taken at
};

// Gradient of the p = 2 estimate w.r.t. the points of Z through the sorted
// matching. Ties are matched by original index, so the result is a fixed
// subgradient there. Throws DegenerateGradient in kSw2 mode when SW_2 < 1e-12.
SwGradient sw_value_and_gradient(const PointCloud& z, const PointCloud& y, const DirectionSet& slices,
                                 GradientMode mode);

Eigen::MatrixXd sw_gradient(const PointCloud& z, const PointCloud& y, const DirectionSet& slices,
                            GradientMode mode);

}  // namespace slicekit
