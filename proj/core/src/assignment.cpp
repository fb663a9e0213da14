#include "slicekit/assignment.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "slicekit/errors.hpp"

namespace slicekit {

std::vector<std::size_t> optimal_assignment(const PointCloud& x, const PointCloud& y) {
  if (x.dim() != y.dim()) throw InvalidArgument("optimal_assignment: dimension mismatch");
  if (x.size() != y.size()) throw InvalidArgument("optimal_assignment: clouds differ in size");
  const std::size_t n = x.size();
  const Eigen::MatrixXd& a = x.points();
  // Row-major copy of y for cache-friendly inner loops.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> b = y.points();
  const auto d = static_cast<Eigen::Index>(x.dim());

  auto cost = [&](std::size_t i, std::size_t j) {
    double c = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double diff = a(static_cast<Eigen::Index>(i), k) - b(static_cast<Eigen::Index>(j), k);
      c += diff * diff;
    }
    return c;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials/matching; column 0 is the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

double exact_w2(const PointCloud& x, const PointCloud& y) {
  if (x.size() > kExactW2MaxPoints) {
    throw ProblemTooLarge("exact_w2 supports at most " + std::to_string(kExactW2MaxPoints) +
                          " points; use the sw-highL evaluation mode");
  }
  const std::vector<std::size_t> assignment = optimal_assignment(x, y);
  double total = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    total += (x.points().row(static_cast<Eigen::Index>(i)) -
              y.points().row(static_cast<Eigen::Index>(assignment[i])))
                 .squaredNorm();
  }
  return std::sqrt(total / static_cast<double>(x.size()));
}

}  // namespace slicekit
