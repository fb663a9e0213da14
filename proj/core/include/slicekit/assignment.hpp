#pragma once

#include <cstddef>
#include <vector>

#include "slicekit/ot1d.hpp"

namespace slicekit {

inline constexpr std::size_t kExactW2MaxPoints = 4096;

// Minimum-cost perfect matching between the rows of x and y under squared
// Euclidean cost (shortest augmenting paths with potentials, O(n^3)).
// Returns assignment[i] = row of y matched to row i of x.
std::vector<std::size_t> optimal_assignment(const PointCloud& x, const PointCloud& y);

// Exact W_2 between two equal-size uniform clouds. Throws ProblemTooLarge
// above kExactW2MaxPoints points; use the high-L sliced metric instead.
double exact_w2(const PointCloud& x, const PointCloud& y);

}  // namespace slicekit
