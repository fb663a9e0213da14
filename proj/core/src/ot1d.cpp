#include "slicekit/ot1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slicekit/errors.hpp"

namespace slicekit {

namespace {

constexpr double kDegenerateSw = 1e-12;

void check_order(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("Wasserstein order p must be >= 1");
}

void check_pair(const PointCloud& a, const PointCloud& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("point clouds differ in dimension");
  if (a.size() != b.size()) {
    throw InvalidArgument("point clouds differ in size (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + "); only equal-size clouds are supported");
  }
}

// Column-by-column accumulation keeps the summation order identical for every caller.
void project_into(const Eigen::MatrixXd& x, const Eigen::Ref<const Eigen::RowVectorXd>& theta,
                  Eigen::VectorXd& out) {
  out = x.col(0) * theta[0];
  for (Eigen::Index k = 1; k < x.cols(); ++k) out += x.col(k) * theta[k];
}

double power_cost(double diff, double p) {
  const double a = std::abs(diff);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  return std::pow(a, p);
}

// Both vectors are sorted in place.
double sorted_cost(Eigen::VectorXd& xs, Eigen::VectorXd& ys, double p) {
  std::sort(xs.data(), xs.data() + xs.size());
  std::sort(ys.data(), ys.data() + ys.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < xs.size(); ++i) acc += power_cost(xs[i] - ys[i], p);
  return acc / static_cast<double>(xs.size());
}

void argsort(const Eigen::VectorXd& values, std::vector<Eigen::Index>& order) {
  order.resize(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
}

}  // namespace

PointCloud::PointCloud(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.rows() == 0) throw InvalidArgument("point cloud must contain at least one point");
  if (points_.cols() == 0) throw InvalidArgument("point cloud must have dimension >= 1");
  if (!points_.allFinite()) throw InvalidArgument("point cloud contains NaN or Inf");
}

double SwValue::distance() const { return std::pow(value, 1.0 / p); }

Eigen::VectorXd project(const PointCloud& cloud, const Direction& theta) {
  if (cloud.dim() != theta.dim()) throw InvalidArgument("project: dimension mismatch");
  Eigen::VectorXd out;
  project_into(cloud.points(), theta.coords().transpose(), out);
  return out;
}

double wasserstein_1d(std::span<const double> xs, std::span<const double> ys, double p) {
  if (xs.size() != ys.size()) throw InvalidArgument("wasserstein_1d: length mismatch");
  if (xs.empty()) throw InvalidArgument("wasserstein_1d: empty input");
  check_order(p);
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(xs.data(), n);
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(ys.data(), n);
  return sorted_cost(a, b, p);
}

double slice_cost(const PointCloud& mu, const PointCloud& nu, const Direction& theta, double p) {
  check_pair(mu, nu);
  check_order(p);
  if (theta.dim() != mu.dim()) throw InvalidArgument("slice_cost: dimension mismatch");
  Eigen::VectorXd a, b;
  project_into(mu.points(), theta.coords().transpose(), a);
  project_into(nu.points(), theta.coords().transpose(), b);
  return sorted_cost(a, b, p);
}

std::vector<double> slice_costs(const PointCloud& mu, const PointCloud& nu, const DirectionSet& slices,
                                double p) {
  check_pair(mu, nu);
  check_order(p);
  if (slices.dim() != mu.dim()) throw InvalidArgument("slice_costs: dimension mismatch");
  std::vector<double> costs(slices.size());
  Eigen::VectorXd a, b;
  for (std::size_t l = 0; l < slices.size(); ++l) {
    project_into(mu.points(), slices.row(l), a);
    project_into(nu.points(), slices.row(l), b);
    costs[l] = sorted_cost(a, b, p);
  }
  return costs;
}

SwValue sw_estimate(const PointCloud& mu, const PointCloud& nu, const DirectionSet& slices, double p) {
  if (slices.empty()) throw InvalidArgument("sw_estimate: empty slice set");
  const std::vector<double> costs = slice_costs(mu, nu, slices, p);
  double acc = 0.0;
  for (double c : costs) acc += c;
  return SwValue{acc / static_cast<double>(costs.size()), p, costs.size()};
}

SwGradient sw_value_and_gradient(const PointCloud& z, const PointCloud& y, const DirectionSet& slices,
                                 GradientMode mode) {
  check_pair(z, y);
  if (slices.empty()) throw InvalidArgument("sw_gradient: empty slice set");
  if (slices.dim() != z.dim()) throw InvalidArgument("sw_gradient: dimension mismatch");

  const auto n = static_cast<Eigen::Index>(z.size());
  const double num_slices = static_cast<double>(slices.size());
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, z.dim());
  Eigen::VectorXd pz, py, residual(n);
  std::vector<Eigen::Index> zorder, yorder;
  double total = 0.0;

  for (std::size_t l = 0; l < slices.size(); ++l) {
    const auto theta = slices.row(l);
    project_into(z.points(), theta, pz);
    project_into(y.points(), theta, py);
    argsort(pz, zorder);
    argsort(py, yorder);
    double cost = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index i = zorder[static_cast<std::size_t>(k)];
      const double r = pz[i] - py[yorder[static_cast<std::size_t>(k)]];
      residual[i] = r;
      cost += r * r;
    }
    total += cost / static_cast<double>(n);
    grad.noalias() += residual * theta;
  }

  const double sw2_squared = total / num_slices;
  grad *= 2.0 / (static_cast<double>(n) * num_slices);
  if (mode == GradientMode::kSw2) {
    const double sw2 = std::sqrt(sw2_squared);
    if (sw2 < kDegenerateSw) {
      throw DegenerateGradient("SW_2 is below 1e-12; its gradient is undefined at the optimum");
    }
    grad /= 2.0 * sw2;
  }
  return SwGradient{std::move(grad), sw2_squared};
}

Eigen::MatrixXd sw_gradient(const PointCloud& z, const PointCloud& y, const DirectionSet& slices,
                            GradientMode mode) {
  return sw_value_and_gradient(z, y, slices, mode).gradient;
}

}  // namespace slicekit
