#pragma once

// Simplex utilities: Euclidean projection and enumeration of the uniform
// grid {w : w_i in {0, 1/r, ..., 1}, sum w = 1}.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace decx {

/// Euclidean projection of v onto {x >= 0, sum x = total}.
std::vector<double> project_to_simplex(std::span<const double> v, double total = 1.0);

/// Euclidean projection onto {x >= floor, sum x = 1}; requires
/// floor * |v| <= 1.
std::vector<double> project_to_floored_simplex(std::span<const double> v, double floor);

/// Number of grid points C(r + k - 1, k - 1), saturating at UINT64_MAX.
std::uint64_t simplex_grid_size(std::size_t k, std::size_t r);

/// All compositions of r into k nonnegative parts in lexicographic order
/// (first coordinate descending from r). Throws ValidationError if the
/// count exceeds `guard`.
std::vector<std::vector<int>> simplex_grid(std::size_t k, std::size_t r,
                                           std::uint64_t guard = 1'000'000);

}  // namespace decx
