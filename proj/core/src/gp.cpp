#include "slicekit/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>

#include "slicekit/errors.hpp"

namespace slicekit {

namespace {

constexpr double kMinStd = 1e-12;

void check_lengthscale(double lengthscale) {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
    throw InvalidArgument("kernel lengthscale must be positive and finite");
  }
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// exp(x^2) erfc(x) for x >= 0.
double erfcx(double x) {
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  const double x2 = x * x;
  return (1.0 - 0.5 / x2 + 0.75 / (x2 * x2)) / (x * std::sqrt(std::numbers::pi));
}

// log(phi(z) + z Phi(z)).
double log_h(double z) {
  if (z > -1.0) return std::log(z * normal_cdf(z) + normal_pdf(z));
  const double log_pdf = -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
  const double a = -z;
  if (a <= 30.0) {
    const double ratio = a * std::sqrt(std::numbers::pi / 2.0) * erfcx(a / std::numbers::sqrt2);
    return log_pdf + std::log1p(-ratio);
  }
  // 1 - a Phi(-a)/phi(a) = 1/a^2 - 3/a^4 + 15/a^6 - 105/a^8 + 945/a^10 - ...
  const double w = 1.0 / (a * a);
  const double series = w * (1.0 - w * (3.0 - w * (15.0 - w * (105.0 - w * 945.0))));
  return log_pdf + std::log(series);
}

}  // namespace

double angular_rbf(const Direction& a, const Direction& b, double lengthscale) {
  check_lengthscale(lengthscale);
  const double r = geodesic_distance(a, b) / lengthscale;
  return std::exp(-0.5 * r * r);
}

Eigen::MatrixXd angular_rbf_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double lengthscale) {
  check_lengthscale(lengthscale);
  if (a.cols() != b.cols()) throw InvalidArgument("angular_rbf_matrix: dimension mismatch");
  const double inv = 1.0 / lengthscale;
  return (a * b.transpose()).unaryExpr([inv](double c) {
    const double r = std::acos(std::clamp(c, -1.0, 1.0)) * inv;
    return std::exp(-0.5 * r * r);
  });
}

double median_lengthscale(const DirectionSet& dirs) {
  const std::size_t n = dirs.size();
  if (n < 2) throw InvalidArgument("median_lengthscale needs at least two directions");
  std::vector<double> dist;
  dist.reserve(n * (n - 1) / 2);
  const Eigen::MatrixXd gram = dirs.matrix() * dirs.matrix().transpose();
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = i + 1; j < gram.cols(); ++j) dist.push_back(std::acos(std::clamp(gram(i, j), -1.0, 1.0)));

  const std::size_t mid = dist.size() / 2;
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
  double median = dist[mid];
  if (dist.size() % 2 == 0) {
    const double lower = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  return median < 1e-6 ? kFallbackLengthscale : median;
}

GpState fit(const DirectionSet& dirs, std::span<const double> vals, const GpOptions& options) {
  const std::size_t n = dirs.size();
  if (n == 0) throw InvalidArgument("fit: no training data");
  if (vals.size() != n) throw InvalidArgument("fit: directions and values differ in length");
  for (double v : vals) {
    if (!std::isfinite(v)) throw InvalidArgument("fit: non-finite training value");
  }
  if (!(options.initial_jitter > 0.0) || options.max_jitter < options.initial_jitter) {
    throw InvalidArgument("fit: invalid jitter ladder");
  }

  GpState state(dirs);
  const auto nn = static_cast<Eigen::Index>(n);
  state.train_vals_ = Eigen::Map<const Eigen::VectorXd>(vals.data(), nn);
  state.mean_offset_ = state.train_vals_.mean();
  if (options.lengthscale) {
    check_lengthscale(*options.lengthscale);
    state.lengthscale_ = *options.lengthscale;
  } else {
    state.lengthscale_ = n >= 2 ? median_lengthscale(dirs) : kFallbackLengthscale;
  }

  const Eigen::MatrixXd k = angular_rbf_matrix(dirs.matrix(), dirs.matrix(), state.lengthscale_);
  // Small tolerance so that 1e-8 * 10^6 still counts as reaching 1e-2.
  for (double jitter = options.initial_jitter; jitter <= options.max_jitter * (1.0 + 1e-9); jitter *= 10.0) {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(kj);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd lower = llt.matrixL();
    if (!lower.allFinite() || (lower.diagonal().array() <= 0.0).any()) continue;
    state.jitter_ = jitter;
    state.chol_ = std::move(lower);
    state.alpha_ = llt.solve((state.train_vals_.array() - state.mean_offset_).matrix());
    return state;
  }
  throw IllConditioned("kernel matrix is not positive definite even with jitter " +
                       std::to_string(options.max_jitter));
}

PosteriorBatch posterior(const GpState& state, const DirectionSet& queries) {
  if (queries.dim() != state.train_dirs().dim()) throw InvalidArgument("posterior: dimension mismatch");
  const Eigen::MatrixXd kq = angular_rbf_matrix(state.train_dirs().matrix(), queries.matrix(), state.lengthscale());
  PosteriorBatch out;
  out.mean = (kq.transpose() * state.alpha()).array() + state.mean_offset();
  const Eigen::MatrixXd v = state.chol().triangularView<Eigen::Lower>().solve(kq);
  out.std = (1.0 - v.colwise().squaredNorm().array()).max(0.0).sqrt().transpose();
  return out;
}

Posterior posterior(const GpState& state, const Direction& query) {
  DirectionSet one(query.dim());
  one.push_back(query);
  const PosteriorBatch batch = posterior(state, one);
  return Posterior{batch.mean[0], batch.std[0]};
}

std::string_view to_string(AcquisitionKind::Type type) {
  switch (type) {
    case AcquisitionKind::Type::kUcb: return "ucb";
    case AcquisitionKind::Type::kEi: return "ei";
    case AcquisitionKind::Type::kLogEi: return "logei";
    case AcquisitionKind::Type::kThompson: return "thompson";
  }
  return "?";
}

double expected_improvement(double mean, double std, double best) {
  const double gain = mean - best;
  if (std < kMinStd) return std::max(gain, 0.0);
  const double z = gain / std;
  return std * (z * normal_cdf(z) + normal_pdf(z));
}

double log_expected_improvement(double mean, double std, double best) {
  const double gain = mean - best;
  if (std < kMinStd) return gain > 0.0 ? std::log(gain) : -std::numeric_limits<double>::infinity();
  return std::log(std) + log_h(gain / std);
}

namespace {

double score_one(double mean, double std, AcquisitionKind kind, double best, Rng& rng) {
  switch (kind.type) {
    case AcquisitionKind::Type::kUcb:
      return mean + kind.beta * std;
    case AcquisitionKind::Type::kEi:
      return expected_improvement(mean, std, best);
    case AcquisitionKind::Type::kLogEi:
      return log_expected_improvement(mean, std, best);
    case AcquisitionKind::Type::kThompson: {
      std::normal_distribution<double> normal(0.0, 1.0);
      return mean + std * normal(rng);
    }
  }
  return mean;
}

}  // namespace

double acquisition(const GpState& state, const Direction& query, AcquisitionKind kind, double best_so_far,
                   Rng& rng) {
  const Posterior post = posterior(state, query);
  return score_one(post.mean, post.std, kind, best_so_far, rng);
}

Eigen::VectorXd acquisition_scores(const GpState& state, const DirectionSet& pool, AcquisitionKind kind,
                                   double best_so_far, Rng& rng) {
  if (kind.type == AcquisitionKind::Type::kUcb && kind.beta < 0.0) {
    throw InvalidArgument("UCB beta must be >= 0");
  }
  const PosteriorBatch post = posterior(state, pool);
  Eigen::VectorXd scores(post.mean.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    scores[i] = score_one(post.mean[i], post.std[i], kind, best_so_far, rng);
  }
  return scores;
}

std::size_t argmax(const Eigen::VectorXd& scores) {
  if (scores.size() == 0) throw InvalidArgument("argmax of an empty score vector");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return static_cast<std::size_t>(best);
}

std::size_t annealed_select_index(const GpState& state, const DirectionSet& pool, std::size_t t, double gamma,
                                  AcquisitionKind kind, Rng& rng) {
  if (pool.empty()) throw InvalidArgument("annealed_select: empty pool");
  if (t < 1) throw InvalidArgument("annealed_select: t must be >= 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("annealed_select: gamma must be in (0, 1)");
  const double epsilon = std::pow(static_cast<double>(t), -gamma);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    return argmax(acquisition_scores(state, pool, kind, state.best_value(), rng));
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pick(rng);
}

Direction annealed_select(const GpState& state, const DirectionSet& pool, std::size_t t, double gamma,
                          AcquisitionKind kind, Rng& rng) {
  return pool[annealed_select_index(state, pool, t, gamma, kind, rng)];
}

}  // namespace slicekit
