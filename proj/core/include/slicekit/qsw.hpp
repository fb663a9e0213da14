#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "slicekit/sobol.hpp"
#include "slicekit/sphere.hpp"

namespace slicekit {

// Quasi-Monte Carlo direction-set constructions. All kinds except
// kGaussianSobol are S^2 designs (d = 3 only).
enum class QswKind {
  kEqualAreaSobol,
  kGaussianSobol,
  kSpiral,
  kDistanceOptimized,
  kCoulombOptimized,
};

enum class RandomizeMode {
  kNone,
  kScramble,  // fresh digital scramble of the Sobol net (Sobol kinds only)
  kRotate,    // one Haar rotation applied to the whole base set
};

std::string_view to_string(QswKind kind);
std::string_view to_string(RandomizeMode mode);

// Lambert cylindrical equal-area map [0,1)^2 -> S^2:
// z = 2 u2 - 1, phi = 2 pi u1.
Direction equal_area_map(double u1, double u2);

// Componentwise inverse normal CDF, then normalization. Coordinates are
// clamped to [1e-12, 1 - 1e-12]. The centre point (0.5, ..., 0.5) maps to the
// zero vector; it is nudged to 0.5 + 1e-12 in every coordinate and therefore
// returns (1, ..., 1) / sqrt(d).
Direction gaussian_map(const Eigen::Ref<const Eigen::VectorXd>& u);

// Generalized spiral on S^2: z_l = 1 - (2l - 1)/n, phi_l = l * pi * (3 - sqrt 5).
DirectionSet spiral(std::size_t n);

enum class EnergyKind {
  kCoulomb,   // sum_{i<j} 1 / |t_i - t_j|
  kDistance,  // -sum_{i<j} |t_i - t_j|
};

double pairwise_energy(const DirectionSet& set, EnergyKind kind);

struct EnergyDesign {
  DirectionSet directions;
  std::vector<double> energy_trace;  // energy before the first and after every accepted step
};

// Projected gradient descent on the sphere with backtracking: a trial step
// that raises the energy is halved (up to 40 times); an accepted step grows
// the next trial step by 1.5x. Coincident input points are separated by a
// deterministic 1e-8 perturbation first.
EnergyDesign optimize_energy(const DirectionSet& init, EnergyKind kind, std::size_t iters, double step);

inline constexpr std::size_t kDefaultEnergyIters = 1000;
inline constexpr double kDefaultEnergyStep = 0.01;

// The deterministic base set for `kind` (memoized per (kind, L, d)).
// Energy designs start from spiral(L) with the default iteration settings.
DirectionSet qsw_base_set(QswKind kind, std::size_t L, int d = 3);

// Base set plus optional randomization. kScramble draws a fresh scramble seed
// from rng (Owen-style nested scramble by default); kRotate applies one
// random_rotation to the base set.
DirectionSet make_qsw(QswKind kind, std::size_t L, RandomizeMode randomize, Rng& rng, int d = 3,
                      SobolScramble scramble = SobolScramble::kOwen);

bool requires_s2(QswKind kind);

}  // namespace slicekit
