#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

namespace slicekit {

// Digital scrambles applied to the 32-bit Sobol integers.
enum class SobolScramble {
  kOwen,  // hash-based nested uniform (Owen-style) scramble
  kXor,   // random digital shift
};

inline constexpr int kSobolMaxDim = 21;

// First n points of the Sobol sequence in [0,1)^dim, in Gray-code order.
//
// Direction numbers are the Joe-Kuo "new-joe-kuo-6.21201" table (dimension 1
// is the van der Corput sequence), the same table scipy.stats.qmc.Sobol uses,
// so unscrambled output matches scipy point for point. Supported dim: 2..21.
//
// With a scramble seed, each coordinate's 32-bit integer is scrambled with
// per-dimension keys derived from the seed; the result is deterministic.
Eigen::MatrixXd sobol(std::size_t n, int dim, std::optional<std::uint64_t> scramble_seed = std::nullopt,
                      SobolScramble kind = SobolScramble::kOwen);

// Centered L2 discrepancy (Hickernell) of points in [0,1]^s, squared.
double centered_l2_discrepancy_squared(const Eigen::MatrixXd& points);

}  // namespace slicekit
