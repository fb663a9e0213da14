#include "slicekit/qsw.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <boost/math/special_functions/erf.hpp>

#include "slicekit/errors.hpp"

namespace slicekit {

namespace {

constexpr double kClampEps = 1e-12;

double inverse_normal_cdf(double u) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

void check_d3(const DirectionSet& set, const char* what) {
  if (set.dim() != 3) throw InvalidArgument(std::string(what) + " requires d = 3");
}

// Energy and its Euclidean gradient in one pass over the pairs.
double energy_and_gradient(const Eigen::MatrixXd& pts, EnergyKind kind, Eigen::MatrixXd* grad) {
  const Eigen::Index n = pts.rows();
  if (grad) grad->setZero(n, pts.cols());
  double energy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = pts(i, 0) - pts(j, 0);
      const double dy = pts(i, 1) - pts(j, 1);
      const double dz = pts(i, 2) - pts(j, 2);
      const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
      double coeff;  // dE/d(t_i) = coeff * (t_i - t_j)
      if (kind == EnergyKind::kCoulomb) {
        energy += 1.0 / r;
        coeff = -1.0 / (r * r * r);
      } else {
        energy -= r;
        coeff = -1.0 / r;
      }
      if (grad) {
        (*grad)(i, 0) += coeff * dx;
        (*grad)(i, 1) += coeff * dy;
        (*grad)(i, 2) += coeff * dz;
        (*grad)(j, 0) -= coeff * dx;
        (*grad)(j, 1) -= coeff * dy;
        (*grad)(j, 2) -= coeff * dz;
      }
    }
  }
  return energy;
}

Eigen::MatrixXd separate_coincident(Eigen::MatrixXd pts) {
  Rng rng(0x5eedu);
  std::normal_distribution<double> normal(0.0, 1.0);
  bool changed = true;
  for (int pass = 0; changed && pass < 8; ++pass) {
    changed = false;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < pts.rows(); ++j) {
        if ((pts.row(i) - pts.row(j)).norm() < 1e-12) {
          for (Eigen::Index k = 0; k < pts.cols(); ++k) pts(j, k) += 1e-8 * normal(rng);
          pts.row(j).normalize();
          changed = true;
        }
      }
    }
  }
  return pts;
}

DirectionSet build_base(QswKind kind, std::size_t L, int d) {
  switch (kind) {
    case QswKind::kEqualAreaSobol: {
      const Eigen::MatrixXd u = sobol(L, 2);
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(L), 3);
      for (Eigen::Index i = 0; i < u.rows(); ++i) rows.row(i) = equal_area_map(u(i, 0), u(i, 1)).coords().transpose();
      return DirectionSet(std::move(rows));
    }
    case QswKind::kGaussianSobol: {
      const Eigen::MatrixXd u = sobol(L, d);
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(L), d);
      for (Eigen::Index i = 0; i < u.rows(); ++i) rows.row(i) = gaussian_map(u.row(i).transpose()).coords().transpose();
      return DirectionSet(std::move(rows));
    }
    case QswKind::kSpiral:
      return spiral(L);
    case QswKind::kDistanceOptimized:
      return optimize_energy(spiral(L), EnergyKind::kDistance, kDefaultEnergyIters, kDefaultEnergyStep).directions;
    case QswKind::kCoulombOptimized:
      return optimize_energy(spiral(L), EnergyKind::kCoulomb, kDefaultEnergyIters, kDefaultEnergyStep).directions;
  }
  throw InvalidArgument("unknown QSW kind");
}

}  // namespace

std::string_view to_string(QswKind kind) {
  switch (kind) {
    case QswKind::kEqualAreaSobol: return "equal-area-sobol";
    case QswKind::kGaussianSobol: return "gaussian-sobol";
    case QswKind::kSpiral: return "spiral";
    case QswKind::kDistanceOptimized: return "distance-optimized";
    case QswKind::kCoulombOptimized: return "coulomb-optimized";
  }
  return "?";
}

std::string_view to_string(RandomizeMode mode) {
  switch (mode) {
    case RandomizeMode::kNone: return "none";
    case RandomizeMode::kScramble: return "scramble";
    case RandomizeMode::kRotate: return "rotate";
  }
  return "?";
}

bool requires_s2(QswKind kind) { return kind != QswKind::kGaussianSobol; }

Direction equal_area_map(double u1, double u2) {
  const double z = 2.0 * u2 - 1.0;
  const double phi = 2.0 * std::numbers::pi * u1;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  Eigen::VectorXd v(3);
  v << r * std::cos(phi), r * std::sin(phi), z;
  return Direction::normalized(v);
}

Direction gaussian_map(const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (u.size() < 2) throw InvalidArgument("gaussian_map: dimension must be >= 2");
  Eigen::VectorXd z(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    z[k] = inverse_normal_cdf(std::clamp(u[k], kClampEps, 1.0 - kClampEps));
  }
  if (z.norm() == 0.0) {
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      if (z[k] == 0.0) z[k] = inverse_normal_cdf(0.5 + kClampEps);
    }
  }
  const double norm = z.norm();
  if (!(norm > 0.0)) throw std::logic_error("gaussian_map: zero vector after inversion");
  return Direction(z / norm);
}

DirectionSet spiral(std::size_t n) {
  if (n == 0) throw InvalidArgument("spiral: n must be >= 1");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double nd = static_cast<double>(n);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), 3);
  for (std::size_t l = 1; l <= n; ++l) {
    const double z = 1.0 - (2.0 * static_cast<double>(l) - 1.0) / nd;
    const double phi = static_cast<double>(l) * golden;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const auto i = static_cast<Eigen::Index>(l - 1);
    rows(i, 0) = r * std::cos(phi);
    rows(i, 1) = r * std::sin(phi);
    rows(i, 2) = z;
  }
  rows.rowwise().normalize();
  return DirectionSet(std::move(rows));
}

double pairwise_energy(const DirectionSet& set, EnergyKind kind) {
  check_d3(set, "pairwise_energy");
  return energy_and_gradient(set.matrix(), kind, nullptr);
}

EnergyDesign optimize_energy(const DirectionSet& init, EnergyKind kind, std::size_t iters, double step) {
  check_d3(init, "optimize_energy");
  if (!(step > 0.0)) throw InvalidArgument("optimize_energy: step must be > 0");
  if (iters == 0) return EnergyDesign{init, {pairwise_energy(init, kind)}};

  Eigen::MatrixXd pts = separate_coincident(init.matrix());
  Eigen::MatrixXd grad, trial, trial_grad;
  double energy = energy_and_gradient(pts, kind, &grad);
  std::vector<double> trace{energy};
  double trial_step = step;

  for (std::size_t it = 0; it < iters; ++it) {
    // Tangential component only.
    const Eigen::VectorXd radial = (grad.cwiseProduct(pts)).rowwise().sum();
    grad -= (pts.array().colwise() * radial.array()).matrix();

    bool accepted = false;
    for (int halvings = 0; halvings < 40; ++halvings) {
      trial = pts - trial_step * grad;
      trial.rowwise().normalize();
      const double e = energy_and_gradient(trial, kind, &trial_grad);
      if (e <= energy) {
        pts.swap(trial);
        grad.swap(trial_grad);
        energy = e;
        trace.push_back(energy);
        trial_step = std::min(trial_step * 1.5, 1e6);
        accepted = true;
        break;
      }
      trial_step *= 0.5;
    }
    if (!accepted) break;
  }
  return EnergyDesign{DirectionSet(std::move(pts)), std::move(trace)};
}

DirectionSet qsw_base_set(QswKind kind, std::size_t L, int d) {
  if (L == 0) throw InvalidArgument("QSW set size must be >= 1");
  if (requires_s2(kind) && d != 3) {
    throw InvalidArgument(std::string(to_string(kind)) + " is an S^2 construction and requires d = 3");
  }
  if (d < 2) throw InvalidArgument("QSW dimension must be >= 2");

  static std::mutex mutex;
  static std::map<std::tuple<QswKind, std::size_t, int>, DirectionSet> cache;
  const auto key = std::make_tuple(kind, L, d);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  DirectionSet built = build_base(kind, L, d);
  std::lock_guard lock(mutex);
  return cache.try_emplace(key, std::move(built)).first->second;
}

DirectionSet make_qsw(QswKind kind, std::size_t L, RandomizeMode randomize, Rng& rng, int d,
                      SobolScramble scramble) {
  switch (randomize) {
    case RandomizeMode::kNone:
      return qsw_base_set(kind, L, d);
    case RandomizeMode::kRotate: {
      const DirectionSet base = qsw_base_set(kind, L, d);
      return rotate(base, random_rotation(rng, base.dim()));
    }
    case RandomizeMode::kScramble: {
      if (kind != QswKind::kEqualAreaSobol && kind != QswKind::kGaussianSobol) {
        throw InvalidArgument("scrambling applies only to Sobol-based QSW kinds");
      }
      if (L == 0) throw InvalidArgument("QSW set size must be >= 1");
      const std::uint64_t seed = rng();
      if (kind == QswKind::kEqualAreaSobol) {
        if (d != 3) throw InvalidArgument("equal-area-sobol requires d = 3");
        const Eigen::MatrixXd u = sobol(L, 2, seed, scramble);
        Eigen::MatrixXd rows(static_cast<Eigen::Index>(L), 3);
        for (Eigen::Index i = 0; i < u.rows(); ++i) rows.row(i) = equal_area_map(u(i, 0), u(i, 1)).coords().transpose();
        return DirectionSet(std::move(rows));
      }
      const Eigen::MatrixXd u = sobol(L, d, seed, scramble);
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(L), d);
      for (Eigen::Index i = 0; i < u.rows(); ++i) rows.row(i) = gaussian_map(u.row(i).transpose()).coords().transpose();
      return DirectionSet(std::move(rows));
    }
  }
  throw InvalidArgument("unknown randomize mode");
}

}  // namespace slicekit
