#include "slicekit/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "slicekit/errors.hpp"

namespace slicekit {

namespace {

void check_unit(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() < 2) {
    throw InvalidArgument("direction dimension must be >= 2, got " + std::to_string(v.size()));
  }
  const double norm = v.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kUnitNormTolerance) {
    throw InvalidArgument("direction is not unit norm (norm = " + std::to_string(norm) + ")");
  }
}

}  // namespace

Direction::Direction(Eigen::VectorXd coords) : coords_(std::move(coords)) { check_unit(coords_); }

Direction Direction::normalized(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("cannot normalize a zero or non-finite vector");
  }
  return Direction(v / norm);
}

Direction Direction::basis(int d, int axis) {
  if (d < 2 || axis < 0 || axis >= d) throw InvalidArgument("basis: bad dimension or axis");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
  e[axis] = 1.0;
  return Direction(std::move(e));
}

DirectionSet::DirectionSet(int d) : rows_(0, d) {
  if (d < 2) throw InvalidArgument("direction dimension must be >= 2");
}

DirectionSet::DirectionSet(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.cols() < 2) throw InvalidArgument("direction dimension must be >= 2");
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) check_unit(rows_.row(i).transpose());
}

DirectionSet::DirectionSet(const std::vector<Direction>& dirs) {
  if (dirs.empty()) throw InvalidArgument("DirectionSet from an empty list has no dimension");
  const int d = dirs.front().dim();
  rows_.resize(static_cast<Eigen::Index>(dirs.size()), d);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (dirs[i].dim() != d) throw InvalidArgument("mixed dimensions in DirectionSet");
    rows_.row(static_cast<Eigen::Index>(i)) = dirs[i].coords().transpose();
  }
}

Direction DirectionSet::operator[](std::size_t i) const {
  return Direction(rows_.row(static_cast<Eigen::Index>(i)).transpose());
}

void DirectionSet::push_back(const Direction& d) {
  if (d.dim() != dim()) throw InvalidArgument("push_back: dimension mismatch");
  rows_.conservativeResize(rows_.rows() + 1, Eigen::NoChange);
  rows_.row(rows_.rows() - 1) = d.coords().transpose();
}

void DirectionSet::append(const DirectionSet& other) {
  if (other.dim() != dim()) throw InvalidArgument("append: dimension mismatch");
  const Eigen::Index old = rows_.rows();
  rows_.conservativeResize(old + other.rows_.rows(), Eigen::NoChange);
  rows_.bottomRows(other.rows_.rows()) = other.rows_;
}

void DirectionSet::replace(std::size_t i, const Direction& d) {
  if (i >= size()) throw InvalidArgument("replace: index out of range");
  if (d.dim() != dim()) throw InvalidArgument("replace: dimension mismatch");
  rows_.row(static_cast<Eigen::Index>(i)) = d.coords().transpose();
}

DirectionSet DirectionSet::prefix(std::size_t n) const {
  n = std::min(n, size());
  DirectionSet out(dim());
  out.rows_ = rows_.topRows(static_cast<Eigen::Index>(n));
  return out;
}

Direction sample_uniform_direction(Rng& rng, int d) {
  if (d < 2) throw InvalidArgument("sample_uniform: d must be >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(d);
  // A zero draw has probability zero but we loop rather than divide by it.
  double norm = 0.0;
  do {
    for (int k = 0; k < d; ++k) v[k] = normal(rng);
    norm = v.norm();
  } while (!(norm > 1e-300));
  return Direction(v / norm);
}

DirectionSet sample_uniform(Rng& rng, int d, std::size_t n) {
  if (d < 2) throw InvalidArgument("sample_uniform: d must be >= 2");
  if (n == 0) throw InvalidArgument("sample_uniform: n must be >= 1");
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), d);
  for (std::size_t i = 0; i < n; ++i) {
    rows.row(static_cast<Eigen::Index>(i)) = sample_uniform_direction(rng, d).coords().transpose();
  }
  return DirectionSet(std::move(rows));
}

double geodesic_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) throw InvalidArgument("geodesic_distance: dimension mismatch");
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

double geodesic_distance(const Direction& a, const Direction& b) {
  return geodesic_distance(a.coords(), b.coords());
}

Eigen::MatrixXd random_rotation(Rng& rng, int d) {
  if (d < 2) throw InvalidArgument("random_rotation: d must be >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = normal(rng);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Q * diag(sign(R_ii)) is Haar on O(d).
  for (int k = 0; k < d; ++k) {
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

DirectionSet rotate(const DirectionSet& set, const Eigen::MatrixXd& rotation) {
  if (rotation.rows() != set.dim() || rotation.cols() != set.dim()) {
    throw InvalidArgument("rotate: rotation size does not match direction dimension");
  }
  Eigen::MatrixXd rows = set.matrix() * rotation.transpose();
  rows.rowwise().normalize();
  return DirectionSet(std::move(rows));
}

std::size_t positional_difference(const DirectionSet& a, const DirectionSet& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) {
    throw InvalidArgument("positional_difference: sets differ in shape");
  }
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.row(i) != b.row(i)) ++diff;
  }
  return diff;
}

}  // namespace slicekit
