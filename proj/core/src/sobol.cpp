#include "slicekit/sobol.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <vector>

#include "slicekit/errors.hpp"

namespace slicekit {

namespace {

struct PrimitivePoly {
  unsigned degree;
  std::uint32_t coeffs;  // the "a" column: interior coefficients
  std::array<std::uint32_t, 7> m;
};

// new-joe-kuo-6.21201, dimensions 2..21.
constexpr std::array<PrimitivePoly, kSobolMaxDim - 1> kJoeKuo{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
}};

constexpr unsigned kBits = 32;

using DirectionNumbers = std::array<std::uint32_t, kBits>;

DirectionNumbers direction_numbers(int dim_index) {
  DirectionNumbers v{};
  if (dim_index == 0) {
    for (unsigned k = 0; k < kBits; ++k) v[k] = std::uint32_t{1} << (kBits - 1 - k);
    return v;
  }
  const PrimitivePoly& poly = kJoeKuo[static_cast<std::size_t>(dim_index - 1)];
  const unsigned s = poly.degree;
  for (unsigned k = 0; k < s; ++k) v[k] = poly.m[k] << (kBits - 1 - k);
  for (unsigned k = s; k < kBits; ++k) {
    std::uint32_t x = v[k - s] ^ (v[k - s] >> s);
    for (unsigned i = 1; i < s; ++i) {
      if ((poly.coeffs >> (s - 1 - i)) & 1u) x ^= v[k - i];
    }
    v[k] = x;
  }
  return v;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint32_t reverse_bits(std::uint32_t x) {
  x = ((x >> 1) & 0x55555555u) | ((x & 0x55555555u) << 1);
  x = ((x >> 2) & 0x33333333u) | ((x & 0x33333333u) << 2);
  x = ((x >> 4) & 0x0f0f0f0fu) | ((x & 0x0f0f0f0fu) << 4);
  x = ((x >> 8) & 0x00ff00ffu) | ((x & 0x00ff00ffu) << 8);
  return (x >> 16) | (x << 16);
}

// Laine-Karras style hash; on bit-reversed input it flips each bit based only
// on the bits above it, which is exactly a nested uniform scramble.
std::uint32_t laine_karras_permutation(std::uint32_t x, std::uint32_t seed) {
  x += seed;
  x ^= x * 0x6c50b47cu;
  x ^= x * 0xb82f1e52u;
  x ^= x * 0xc7afe638u;
  x ^= x * 0x8d22f6e6u;
  return x;
}

std::uint32_t nested_uniform_scramble(std::uint32_t x, std::uint32_t seed) {
  return reverse_bits(laine_karras_permutation(reverse_bits(x), seed));
}

}  // namespace

Eigen::MatrixXd sobol(std::size_t n, int dim, std::optional<std::uint64_t> scramble_seed, SobolScramble kind) {
  if (dim < 2 || dim > kSobolMaxDim) {
    throw InvalidArgument("sobol: dim must be in [2, " + std::to_string(kSobolMaxDim) + "]");
  }
  if (n == 0) throw InvalidArgument("sobol: n must be >= 1");
  if (n > (std::size_t{1} << kBits)) throw InvalidArgument("sobol: n exceeds 2^32 points");

  std::vector<DirectionNumbers> v(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) v[static_cast<std::size_t>(j)] = direction_numbers(j);

  std::vector<std::uint32_t> keys(static_cast<std::size_t>(dim), 0);
  if (scramble_seed) {
    std::uint64_t state = *scramble_seed;
    for (auto& key : keys) key = static_cast<std::uint32_t>(splitmix64(state) >> 32);
  }

  constexpr double kScale = 1.0 / 4294967296.0;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), dim);
  std::vector<std::uint32_t> x(static_cast<std::size_t>(dim), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      // Gray-code update: flip the direction number of the lowest zero bit of i-1.
      const auto c = static_cast<unsigned>(std::countr_one(i - 1));
      for (int j = 0; j < dim; ++j) x[static_cast<std::size_t>(j)] ^= v[static_cast<std::size_t>(j)][c];
    }
    for (int j = 0; j < dim; ++j) {
      std::uint32_t value = x[static_cast<std::size_t>(j)];
      if (scramble_seed) {
        const std::uint32_t key = keys[static_cast<std::size_t>(j)];
        value = kind == SobolScramble::kOwen ? nested_uniform_scramble(value, key) : value ^ key;
      }
      out(static_cast<Eigen::Index>(i), j) = static_cast<double>(value) * kScale;
    }
  }
  return out;
}

double centered_l2_discrepancy_squared(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  const Eigen::Index s = points.cols();
  if (n == 0) throw InvalidArgument("discrepancy of an empty point set");
  const Eigen::ArrayXXd c = (points.array() - 0.5).abs();

  double single = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double prod = 1.0;
    for (Eigen::Index k = 0; k < s; ++k) prod *= 1.0 + 0.5 * c(i, k) - 0.5 * c(i, k) * c(i, k);
    single += prod;
  }
  double pair = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double prod = 1.0;
      for (Eigen::Index k = 0; k < s; ++k) {
        prod *= 1.0 + 0.5 * c(i, k) + 0.5 * c(j, k) - 0.5 * std::abs(points(i, k) - points(j, k));
      }
      pair += prod;
    }
  }
  const double nd = static_cast<double>(n);
  return std::pow(13.0 / 12.0, static_cast<double>(s)) - 2.0 / nd * single + pair / (nd * nd);
}

}  // namespace slicekit
