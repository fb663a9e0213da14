#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "slicekit/sphere.hpp"

namespace slicekit {

// Gaussian of the great-circle distance: exp(-0.5 * (d_S(a, b) / lengthscale)^2).
double angular_rbf(const Direction& a, const Direction& b, double lengthscale);

// Kernel matrix between the rows of two direction matrices.
Eigen::MatrixXd angular_rbf_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double lengthscale);

inline constexpr double kFallbackLengthscale = 0.7853981633974483;  // pi / 4

// Median of all pairwise geodesic distances (mean of the two middle values
// for an even pair count). Below 1e-6 the set is treated as duplicates and
// pi/4 is returned.
double median_lengthscale(const DirectionSet& dirs);

struct GpOptions {
  std::optional<double> lengthscale;  // default: median heuristic
  double initial_jitter = 1e-8;
  double max_jitter = 1e-2;
};

// Zero-mean, unit-prior-variance GP on de-meaned targets. Immutable after fit.
class GpState {
 public:
  const DirectionSet& train_dirs() const { return train_dirs_; }
  const Eigen::VectorXd& train_vals() const { return train_vals_; }
  double mean_offset() const { return mean_offset_; }
  double lengthscale() const { return lengthscale_; }
  double jitter() const { return jitter_; }
  const Eigen::MatrixXd& chol() const { return chol_; }  // lower triangular
  const Eigen::VectorXd& alpha() const { return alpha_; }
  std::size_t size() const { return static_cast<std::size_t>(train_vals_.size()); }
  double best_value() const { return train_vals_.maxCoeff(); }

 private:
  friend GpState fit(const DirectionSet&, std::span<const double>, const GpOptions&);
  explicit GpState(DirectionSet dirs) : train_dirs_(std::move(dirs)) {}

  DirectionSet train_dirs_;
  Eigen::VectorXd train_vals_;
  double mean_offset_ = 0.0;
  double lengthscale_ = kFallbackLengthscale;
  double jitter_ = 0.0;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
};

// Factorizes K + jitter * I, multiplying jitter by 10 from initial_jitter up
// to max_jitter until the Cholesky succeeds; throws IllConditioned otherwise.
GpState fit(const DirectionSet& dirs, std::span<const double> vals, const GpOptions& options = {});

struct Posterior {
  double mean = 0.0;
  double std = 0.0;
};

Posterior posterior(const GpState& state, const Direction& query);

// Posterior means and standard deviations for every row of `queries`.
struct PosteriorBatch {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};
PosteriorBatch posterior(const GpState& state, const DirectionSet& queries);

struct AcquisitionKind {
  enum class Type { kUcb, kEi, kLogEi, kThompson };
  Type type = Type::kUcb;
  double beta = 0.7;  // UCB only

  static AcquisitionKind ucb(double beta = 0.7) { return {Type::kUcb, beta}; }
  static AcquisitionKind ei() { return {Type::kEi, 0.0}; }
  static AcquisitionKind log_ei() { return {Type::kLogEi, 0.0}; }
  static AcquisitionKind thompson() { return {Type::kThompson, 0.0}; }
};

std::string_view to_string(AcquisitionKind::Type type);

// Expected improvement over `best` for a maximization problem.
double expected_improvement(double mean, double std, double best);
// log of expected_improvement, accurate far into the tail.
double log_expected_improvement(double mean, double std, double best);

// Score of one query. Thompson draws a single posterior sample from rng.
double acquisition(const GpState& state, const Direction& query, AcquisitionKind kind, double best_so_far,
                   Rng& rng);

// Scores for every pool element, in pool order. Thompson sampling draws one
// independent pointwise sample per candidate (no joint covariance).
Eigen::VectorXd acquisition_scores(const GpState& state, const DirectionSet& pool, AcquisitionKind kind,
                                   double best_so_far, Rng& rng);

// First index of the maximum.
std::size_t argmax(const Eigen::VectorXd& scores);

// With probability t^(-gamma) the acquisition argmax, otherwise a uniform pool element.
std::size_t annealed_select_index(const GpState& state, const DirectionSet& pool, std::size_t t, double gamma,
                                  AcquisitionKind kind, Rng& rng);
Direction annealed_select(const GpState& state, const DirectionSet& pool, std::size_t t, double gamma,
                          AcquisitionKind kind, Rng& rng);

}  // namespace slicekit
