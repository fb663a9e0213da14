#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace slicekit {

// Every stochastic routine takes the generator explicitly; there is no global RNG.
using Rng = std::mt19937_64;

inline constexpr double kUnitNormTolerance = 1e-9;

// A unit vector on S^(d-1), d >= 2.
class Direction {
 public:
  // Requires |coords| == 1 within kUnitNormTolerance.
  explicit Direction(Eigen::VectorXd coords);

  // Normalizes `v`; throws InvalidArgument for zero or non-finite input.
  static Direction normalized(const Eigen::VectorXd& v);

  // Canonical basis vector e_{axis} in R^d.
  static Direction basis(int d, int axis);

  const Eigen::VectorXd& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  Direction operator-() const { return Direction(-coords_); }

  friend bool operator==(const Direction& a, const Direction& b) {
    return a.coords_ == b.coords_;
  }

 private:
  Eigen::VectorXd coords_;
};

// Ordered slice set. Rows of `matrix()` are the directions, so projecting an
// n x d cloud onto every slice is `cloud * matrix().transpose()`.
//
// The order is part of the value: selectors replace directions by index.
class DirectionSet {
 public:
  // Empty set of dimension d (used while a selector is filling a budget).
  explicit DirectionSet(int d);

  // Every row must have unit norm.
  explicit DirectionSet(Eigen::MatrixXd rows);

  explicit DirectionSet(const std::vector<Direction>& dirs);

  std::size_t size() const { return static_cast<std::size_t>(rows_.rows()); }
  bool empty() const { return rows_.rows() == 0; }
  int dim() const { return static_cast<int>(rows_.cols()); }

  Direction operator[](std::size_t i) const;
  auto row(std::size_t i) const { return rows_.row(static_cast<Eigen::Index>(i)); }

  const Eigen::MatrixXd& matrix() const { return rows_; }

  void push_back(const Direction& d);
  void append(const DirectionSet& other);
  void replace(std::size_t i, const Direction& d);

  // First `n` directions.
  DirectionSet prefix(std::size_t n) const;

  friend bool operator==(const DirectionSet& a, const DirectionSet& b) {
    return a.rows_.rows() == b.rows_.rows() && a.rows_.cols() == b.rows_.cols() &&
           a.rows_ == b.rows_;
  }

 private:
  Eigen::MatrixXd rows_;
};

// n i.i.d. uniform directions (normalized standard normal vectors).
DirectionSet sample_uniform(Rng& rng, int d, std::size_t n);
Direction sample_uniform_direction(Rng& rng, int d);

// Great-circle distance in [0, pi]; the inner product is clamped to [-1, 1].
double geodesic_distance(const Direction& a, const Direction& b);
double geodesic_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b);

// Haar-distributed element of SO(d): QR of a Gaussian matrix with the
// diagonal-sign correction, then one column flip if det = -1.
Eigen::MatrixXd random_rotation(Rng& rng, int d);

// Applies R to every direction (renormalizing away roundoff).
DirectionSet rotate(const DirectionSet& set, const Eigen::MatrixXd& rotation);

// Number of positions i where a[i] != b[i]; sets must have equal size.
std::size_t positional_difference(const DirectionSet& a, const DirectionSet& b);

}  // namespace slicekit
